#ifndef CORESCOPE_EXPOSURE_HPP
#define CORESCOPE_EXPOSURE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "corescope/core.hpp"
#include "corescope/graph.hpp"
#include "corescope/rng.hpp"

namespace corescope
{
    /// Partition of the vertices into radius-2 balls: every vertex lies
    /// within hop distance 2 of its cluster's center.
    struct Clustering
    {
        std::vector<vertex_t> cluster_of;
        std::vector<std::vector<vertex_t>> clusters;
        std::vector<vertex_t> centers;

        std::size_t size() const { return clusters.size(); }
    };

    /// Grows balls of radius two around randomly selected uncovered vertices
    /// until everything is covered. Centers are drawn uniformly, or with
    /// probability proportional to degree when degree_biased is set (falling
    /// back to uniform if only zero-degree vertices remain). Vertices claimed
    /// by an earlier ball are never reassigned.
    inline Clustering three_net_clustering(const Graph &g, std::uint64_t seed,
                                           bool degree_biased = false)
    {
        const vertex_t n = g.num_vertices();
        Clustering result;
        result.cluster_of.assign(n, 0);
        SplitMix64 rng(seed);
        std::vector<char> covered(n, 0);
        std::vector<vertex_t> uncovered(n);
        std::iota(uncovered.begin(), uncovered.end(), 0);
        detail::BfsScratch bfs;

        while (!uncovered.empty())
        {
            uncovered.erase(std::remove_if(uncovered.begin(), uncovered.end(),
                                           [&](vertex_t v) { return covered[v] != 0; }),
                            uncovered.end());
            if (uncovered.empty())
                break;
            vertex_t center;
            if (degree_biased)
            {
                std::uint64_t total = 0;
                for (vertex_t v : uncovered)
                    total += g.degree(v);
                if (total == 0)
                {
                    center = uncovered[rng.next_below(uncovered.size())];
                }
                else
                {
                    std::uint64_t target = rng.next_below(total);
                    center = uncovered.back();
                    for (vertex_t v : uncovered)
                    {
                        const std::uint64_t d = g.degree(v);
                        if (target < d)
                        {
                            center = v;
                            break;
                        }
                        target -= d;
                    }
                }
            }
            else
            {
                center = uncovered[rng.next_below(uncovered.size())];
            }

            const vertex_t cluster_id = static_cast<vertex_t>(result.clusters.size());
            result.centers.push_back(center);
            result.clusters.emplace_back();
            bfs.run(g, center, 2);
            for (vertex_t v : bfs.order)
                if (!covered[v])
                {
                    covered[v] = 1;
                    result.cluster_of[v] = cluster_id;
                    result.clusters[cluster_id].push_back(v);
                }
            std::sort(result.clusters[cluster_id].begin(), result.clusters[cluster_id].end());
        }
        return result;
    }

    /// Partition + radius-2 check; true when the clustering is a valid 3-net
    /// assignment for g.
    inline bool validate_three_net(const Graph &g, const Clustering &c)
    {
        const vertex_t n = g.num_vertices();
        if (c.cluster_of.size() != n || c.centers.size() != c.clusters.size())
            return false;
        std::vector<char> seen(n, 0);
        for (std::size_t id = 0; id < c.clusters.size(); ++id)
            for (vertex_t v : c.clusters[id])
            {
                if (v >= n || seen[v] || c.cluster_of[v] != id)
                    return false;
                seen[v] = 1;
            }
        for (vertex_t v = 0; v < n; ++v)
            if (!seen[v])
                return false;
        detail::BfsScratch bfs;
        for (std::size_t id = 0; id < c.clusters.size(); ++id)
        {
            bfs.run(g, c.centers[id], 2);
            for (vertex_t v : c.clusters[id])
                if (!bfs.visited(v))
                    return false;
        }
        return true;
    }

    /// Exposure inputs at one vertex: the s clusters touching {v} u N_1(v)
    /// with v's own cluster indexed last, and the per-cluster counts w of
    /// edges from v. sum(w) = d(v).
    struct ExposureProfile
    {
        vertex_t vertex = 0;
        double p = 0.0;
        std::vector<vertex_t> cluster_ids; // own cluster last, others ascending
        std::vector<vertex_t> w;           // aligned with cluster_ids

        std::size_t s() const { return cluster_ids.size(); }
        vertex_t own_w() const { return w.back(); }
    };

    inline ExposureProfile exposure_profile(const Graph &g, const Clustering &c,
                                            vertex_t v, double p)
    {
        g.check_vertex(v);
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("treatment probability must lie in (0, 1)");
        const vertex_t own = c.cluster_of[v];
        std::vector<std::pair<vertex_t, vertex_t>> counts; // (cluster, edge count)
        for (vertex_t u : g.neighbors(v))
        {
            const vertex_t cu = c.cluster_of[u];
            auto it = std::find_if(counts.begin(), counts.end(),
                                   [&](const auto &e) { return e.first == cu; });
            if (it == counts.end())
                counts.emplace_back(cu, 1);
            else
                ++it->second;
        }
        ExposureProfile prof;
        prof.vertex = v;
        prof.p = p;
        vertex_t own_count = 0;
        for (auto &[cluster, cnt] : counts)
            if (cluster == own)
                own_count = cnt;
        std::sort(counts.begin(), counts.end());
        for (const auto &[cluster, cnt] : counts)
            if (cluster != own)
            {
                prof.cluster_ids.push_back(cluster);
                prof.w.push_back(cnt);
            }
        prof.cluster_ids.push_back(own);
        prof.w.push_back(own_count);
        return prof;
    }

    enum class ExposureKind
    {
        degree,
        neighbor_degree,
        pruned_degree,
        core_monte_carlo
    };

    struct ExposureResult
    {
        ExposureKind kind = ExposureKind::degree;
        unsigned kappa = 0;
        double probability = 0.0;
        // subset search diagnostics (neighbor_degree)
        std::uint64_t subsets_explored = 0;
        std::uint64_t subsets_pruned = 0;
        // sampling diagnostics (core_monte_carlo)
        std::uint64_t trials = 0;
        double std_error = 0.0;
    };

    namespace detail
    {
        /// f(j, T): probability that the treated clusters among the first j
        /// foreign clusters contribute at least T edges. T <= 0 collapses to
        /// index 0, where the probability is 1 regardless of treatment.
        inline double degree_exposure_dp(std::span<const vertex_t> foreign_w, double p,
                                         std::int64_t need)
        {
            if (need <= 0)
                return 1.0;
            std::int64_t reachable = 0;
            for (vertex_t w : foreign_w)
                reachable += w;
            if (need > reachable)
                return 0.0;
            std::vector<double> dp(static_cast<std::size_t>(need) + 1, 0.0);
            dp[0] = 1.0;
            for (vertex_t wj : foreign_w)
            {
                for (std::int64_t t = need; t >= 1; --t)
                {
                    const std::int64_t reduced = std::max<std::int64_t>(t - wj, 0);
                    dp[t] = p * dp[reduced] + (1.0 - p) * dp[t];
                }
            }
            return dp[need];
        }
    } // namespace detail

    /// Exact absolute degree-exposure probability via the cluster recursion,
    /// O(s * kappa). The leading factor p is the requirement that v's own
    /// cluster is treated, so the result never exceeds p.
    inline ExposureResult degree_exposure_prob(const ExposureProfile &prof, unsigned kappa)
    {
        ExposureResult result;
        result.kind = ExposureKind::degree;
        result.kappa = kappa;
        const std::span<const vertex_t> foreign(prof.w.data(), prof.w.size() - 1);
        const std::int64_t need = static_cast<std::int64_t>(kappa) - prof.own_w();
        result.probability = prof.p * detail::degree_exposure_dp(foreign, prof.p, need);
        return result;
    }

    /// Degree exposure with w pruned of neighbors that can never be
    /// kappa-degree exposed themselves (their exposure probability is zero);
    /// a tighter upper bound on core exposure than the raw degree recursion.
    inline ExposureResult pruned_degree_exposure_prob(const Graph &g, const Clustering &c,
                                                      vertex_t v, unsigned kappa, double p)
    {
        ExposureProfile prof = exposure_profile(g, c, v, p);
        for (vertex_t u : g.neighbors(v))
        {
            const ExposureProfile up = exposure_profile(g, c, u, p);
            if (degree_exposure_prob(up, kappa).probability == 0.0)
            {
                const vertex_t cu = c.cluster_of[u];
                for (std::size_t i = 0; i < prof.cluster_ids.size(); ++i)
                    if (prof.cluster_ids[i] == cu)
                    {
                        --prof.w[i];
                        break;
                    }
            }
        }
        ExposureResult result = degree_exposure_prob(prof, kappa);
        result.kind = ExposureKind::pruned_degree;
        return result;
    }

    namespace detail
    {
        /// Shared final summation for the subset search: the qualifying-set
        /// counts per cardinality fully determine the probability, so pruned
        /// and exhaustive searches that agree on counts produce bit-identical
        /// results.
        inline double subset_counts_to_probability(const std::vector<std::uint64_t> &counts,
                                                   std::size_t num_clusters, double p)
        {
            double total = 0.0;
            for (std::size_t size = num_clusters + 1; size-- > 0;)
                if (counts[size] != 0)
                    total += static_cast<double>(counts[size]) *
                             std::pow(p, static_cast<double>(size) + 1.0) *
                             std::pow(1.0 - p, static_cast<double>(num_clusters - size));
            return total;
        }

        struct SubsetSearch
        {
            // per neighbor u of v
            std::vector<vertex_t> need_home;  // index into cluster list of u's home, or -1 (own)
            std::vector<vertex_t> count_min;  // treated neighbours with included clusters only
            std::vector<vertex_t> count_max;  // treated neighbours if all undecided included
            // per candidate cluster: (neighbor index, edge multiplicity) pairs
            std::vector<std::vector<std::pair<vertex_t, vertex_t>>> cluster_edges;
            std::vector<std::vector<vertex_t>> cluster_homes; // neighbor indices homed there
            std::vector<std::uint64_t> counts;                // qualifying subsets per size
            std::vector<std::uint64_t> binom;                 // scratch row of binomials
            unsigned kappa = 0;
            bool prune = true;
            std::uint64_t explored = 0, pruned = 0;
            std::size_t num_clusters = 0;

            std::size_t exposed(const std::vector<vertex_t> &cnt,
                                const std::vector<char> &home_on) const
            {
                std::size_t total = 0;
                for (std::size_t u = 0; u < cnt.size(); ++u)
                    if (home_on[u] && cnt[u] >= kappa)
                        ++total;
                return total;
            }

            std::vector<char> home_min, home_max;

            void add_all_subsets(std::size_t included, std::size_t undecided)
            {
                // every subset of the undecided clusters qualifies
                std::uint64_t c = 1;
                for (std::size_t r = 0; r <= undecided; ++r)
                {
                    counts[included + r] += c;
                    c = c * (undecided - r) / (r + 1);
                }
            }

            static std::uint64_t subset_count(std::size_t undecided)
            {
                return undecided >= 64 ? ~std::uint64_t(0) : std::uint64_t(1) << undecided;
            }

            void dfs(std::size_t next, std::size_t included)
            {
                const std::size_t undecided = num_clusters - next;
                if (prune)
                {
                    if (exposed(count_max, home_max) < kappa)
                    {
                        pruned += subset_count(undecided);
                        return;
                    }
                    if (exposed(count_min, home_min) >= kappa)
                    {
                        add_all_subsets(included, undecided);
                        explored += subset_count(undecided);
                        return;
                    }
                }
                if (next == num_clusters)
                {
                    ++explored;
                    if (exposed(count_min, home_min) >= kappa)
                        ++counts[included];
                    return;
                }
                // include cluster `next`
                for (const auto &[u, mult] : cluster_edges[next])
                    count_min[u] += mult;
                for (vertex_t u : cluster_homes[next])
                    home_min[u] = 1;
                dfs(next + 1, included + 1);
                for (const auto &[u, mult] : cluster_edges[next])
                    count_min[u] -= mult;
                for (vertex_t u : cluster_homes[next])
                    home_min[u] = 0;
                // exclude cluster `next`
                for (const auto &[u, mult] : cluster_edges[next])
                    count_max[u] -= mult;
                for (vertex_t u : cluster_homes[next])
                    home_max[u] = 0;
                dfs(next + 1, included);
                for (const auto &[u, mult] : cluster_edges[next])
                    count_max[u] += mult;
                for (vertex_t u : cluster_homes[next])
                    home_max[u] = 1;
            }
        };
    } // namespace detail

    /// Absolute kappa-neighbor-degree exposure probability: the total mass of
    /// treated-cluster patterns (v's own cluster always treated) under which
    /// at least kappa neighbors of v are kappa-degree exposed. Subsets of the
    /// foreign clusters touching N_2(v) are searched depth-first in
    /// descending order of contribution, with both-sided monotone bounds;
    /// pruning only skips work and never changes the counted sets.
    inline ExposureResult neighbor_degree_exposure_prob(const Graph &g, const Clustering &c,
                                                        vertex_t v, unsigned kappa, double p,
                                                        std::size_t max_clusters = 24,
                                                        bool prune = true)
    {
        g.check_vertex(v);
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("treatment probability must lie in (0, 1)");
        const vertex_t own = c.cluster_of[v];

        // candidate clusters: those containing a vertex of N_2(v), minus v's own
        thread_local detail::BfsScratch bfs;
        bfs.run(g, v, 2);
        std::vector<vertex_t> candidates;
        for (vertex_t u : bfs.order)
            if (c.cluster_of[u] != own)
                candidates.push_back(c.cluster_of[u]);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        if (candidates.size() > max_clusters)
            throw std::invalid_argument(
                "neighbor-degree exposure: " + std::to_string(candidates.size()) +
                " candidate clusters exceed the subset-search limit (" +
                std::to_string(max_clusters) + "); use the Monte Carlo estimator instead");

        const auto nbrs = g.neighbors(v);
        const std::size_t nn = nbrs.size();
        detail::SubsetSearch search;
        search.kappa = kappa;
        search.prune = prune;
        search.num_clusters = candidates.size();

        // stale entries are never read: every cluster id this sweep touches
        // is itself a candidate
        thread_local std::vector<vertex_t> cluster_rank;
        if (cluster_rank.size() < c.size())
            cluster_rank.resize(c.size(), 0);
        for (std::size_t i = 0; i < candidates.size(); ++i)
            cluster_rank[candidates[i]] = static_cast<vertex_t>(i);

        // per-neighbor counts of treated neighbours under {own} and under
        // {own} + all candidates, plus per-cluster update lists
        search.count_min.assign(nn, 0);
        search.count_max.assign(nn, 0);
        search.home_min.assign(nn, 0);
        search.home_max.assign(nn, 0);
        search.cluster_edges.assign(candidates.size(), {});
        search.cluster_homes.assign(candidates.size(), {});
        for (std::size_t ui = 0; ui < nn; ++ui)
        {
            const vertex_t u = nbrs[ui];
            const vertex_t cu = c.cluster_of[u];
            if (cu == own)
            {
                search.home_min[ui] = search.home_max[ui] = 1;
            }
            else
            {
                search.home_max[ui] = 1;
                search.cluster_homes[cluster_rank[cu]].push_back(static_cast<vertex_t>(ui));
            }
            std::vector<std::pair<vertex_t, vertex_t>> per_cluster; // (cluster rank, count)
            vertex_t own_edges = 0;
            for (vertex_t w : g.neighbors(u))
            {
                const vertex_t cw = c.cluster_of[w];
                if (cw == own)
                {
                    ++own_edges;
                    continue;
                }
                const vertex_t rank = cluster_rank[cw];
                auto it = std::find_if(per_cluster.begin(), per_cluster.end(),
                                       [&](const auto &e) { return e.first == rank; });
                if (it == per_cluster.end())
                    per_cluster.emplace_back(rank, 1);
                else
                    ++it->second;
            }
            search.count_min[ui] = own_edges;
            search.count_max[ui] = own_edges;
            for (const auto &[rank, cnt] : per_cluster)
            {
                search.cluster_edges[rank].emplace_back(static_cast<vertex_t>(ui), cnt);
                search.count_max[ui] += cnt;
            }
        }

        // search clusters in descending order of how much treating them can
        // raise neighbor exposure (ties by ascending cluster id)
        std::vector<std::size_t> order(candidates.size());
        std::iota(order.begin(), order.end(), 0);
        std::vector<std::uint64_t> weight(candidates.size(), 0);
        for (std::size_t i = 0; i < candidates.size(); ++i)
        {
            for (const auto &[u, mult] : search.cluster_edges[i])
                weight[i] += mult;
            weight[i] += search.cluster_homes[i].size();
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (weight[a] != weight[b])
                return weight[a] > weight[b];
            return candidates[a] < candidates[b];
        });
        {
            std::vector<std::vector<std::pair<vertex_t, vertex_t>>> edges_sorted;
            std::vector<std::vector<vertex_t>> homes_sorted;
            edges_sorted.reserve(order.size());
            homes_sorted.reserve(order.size());
            for (std::size_t i : order)
            {
                edges_sorted.push_back(std::move(search.cluster_edges[i]));
                homes_sorted.push_back(std::move(search.cluster_homes[i]));
            }
            search.cluster_edges = std::move(edges_sorted);
            search.cluster_homes = std::move(homes_sorted);
        }

        search.counts.assign(candidates.size() + 1, 0);
        search.dfs(0, 0);

        ExposureResult result;
        result.kind = ExposureKind::neighbor_degree;
        result.kappa = kappa;
        result.probability =
            detail::subset_counts_to_probability(search.counts, candidates.size(), p);
        result.subsets_explored = search.explored;
        result.subsets_pruned = search.pruned;
        return result;
    }

    namespace detail
    {
        /// Core numbers of the subgraph induced on the treated vertices,
        /// reusing scratch buffers across trials. Returns them via `core`,
        /// indexed like `members` (the treated vertices).
        struct MaskedCoreScratch
        {
            std::vector<vertex_t> slot_of;
            std::vector<std::uint32_t> stamp;
            std::uint32_t epoch = 0;
            std::vector<vertex_t> members, deg, core, vert, pos;
            std::vector<std::size_t> offsets, bin;
            std::vector<vertex_t> adj;

            void ensure(vertex_t n)
            {
                if (slot_of.size() < n)
                {
                    slot_of.resize(n);
                    stamp.assign(n, 0);
                    epoch = 0;
                }
            }

            void decompose(const Graph &g)
            {
                const std::size_t k = members.size();
                ++epoch;
                if (epoch == 0)
                {
                    std::fill(stamp.begin(), stamp.end(), 0);
                    epoch = 1;
                }
                for (std::size_t i = 0; i < k; ++i)
                {
                    slot_of[members[i]] = static_cast<vertex_t>(i);
                    stamp[members[i]] = epoch;
                }
                offsets.assign(k + 1, 0);
                deg.assign(k, 0);
                for (std::size_t i = 0; i < k; ++i)
                {
                    vertex_t d = 0;
                    for (vertex_t w : g.neighbors(members[i]))
                        if (stamp[w] == epoch)
                            ++d;
                    deg[i] = d;
                    offsets[i + 1] = offsets[i] + d;
                }
                adj.resize(offsets[k]);
                for (std::size_t i = 0; i < k; ++i)
                {
                    std::size_t fill = offsets[i];
                    for (vertex_t w : g.neighbors(members[i]))
                        if (stamp[w] == epoch)
                            adj[fill++] = slot_of[w];
                }
                vertex_t md = 0;
                for (std::size_t i = 0; i < k; ++i)
                    md = std::max(md, deg[i]);
                bin.assign(md + 2, 0);
                for (std::size_t i = 0; i < k; ++i)
                    ++bin[deg[i]];
                std::size_t start = 0;
                for (vertex_t d = 0; d <= md; ++d)
                {
                    const std::size_t cnt = bin[d];
                    bin[d] = start;
                    start += cnt;
                }
                vert.resize(k);
                pos.resize(k);
                core.resize(k);
                for (std::size_t i = 0; i < k; ++i)
                {
                    pos[i] = static_cast<vertex_t>(bin[deg[i]]++);
                    vert[pos[i]] = static_cast<vertex_t>(i);
                }
                for (vertex_t d = md; d >= 1; --d)
                    bin[d] = bin[d - 1];
                bin[0] = 0;
                for (std::size_t i = 0; i < k; ++i)
                {
                    const vertex_t u = vert[i];
                    core[u] = deg[u];
                    for (std::size_t e = offsets[u]; e < offsets[u + 1]; ++e)
                    {
                        const vertex_t w = adj[e];
                        if (deg[w] <= deg[u])
                            continue;
                        const std::size_t pw = bin[deg[w]];
                        const vertex_t front = vert[pw];
                        if (w != front)
                        {
                            vert[pos[w]] = front;
                            vert[pw] = w;
                            std::swap(pos[w], pos[front]);
                        }
                        ++bin[deg[w]];
                        --deg[w];
                    }
                }
            }
        };

        inline void sample_treated_members(const Clustering &c, SplitMix64 &rng, double p,
                                           std::vector<char> &treated_cluster,
                                           std::vector<vertex_t> &members)
        {
            treated_cluster.assign(c.size(), 0);
            members.clear();
            for (std::size_t id = 0; id < c.size(); ++id)
                treated_cluster[id] = rng.bernoulli(p) ? 1 : 0;
            for (std::size_t id = 0; id < c.size(); ++id)
                if (treated_cluster[id])
                    members.insert(members.end(), c.clusters[id].begin(), c.clusters[id].end());
        }
    } // namespace detail

    /// Monte Carlo estimate of absolute kappa-core exposure: each trial
    /// treats clusters independently with probability p and tests whether v
    /// lies in the kappa-core of the treated induced subgraph. Trial t draws
    /// from substream (seed, t), so estimates do not depend on evaluation
    /// order or thread schedule.
    inline ExposureResult monte_carlo_core_exposure(const Graph &g, const Clustering &c,
                                                    vertex_t v, unsigned kappa, double p,
                                                    std::uint64_t trials, std::uint64_t seed)
    {
        g.check_vertex(v);
        if (trials == 0)
            throw std::invalid_argument("at least one trial required");
        detail::MaskedCoreScratch scratch;
        scratch.ensure(g.num_vertices());
        std::vector<char> treated_cluster;
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < trials; ++t)
        {
            SplitMix64 rng = SplitMix64::substream(seed, t);
            detail::sample_treated_members(c, rng, p, treated_cluster, scratch.members);
            if (!treated_cluster[c.cluster_of[v]])
                continue;
            scratch.decompose(g);
            if (scratch.core[scratch.slot_of[v]] >= kappa)
                ++hits;
        }
        ExposureResult result;
        result.kind = ExposureKind::core_monte_carlo;
        result.kappa = kappa;
        result.trials = trials;
        result.probability = static_cast<double>(hits) / static_cast<double>(trials);
        result.std_error =
            std::sqrt(result.probability * (1.0 - result.probability) / static_cast<double>(trials));
        return result;
    }

    /// Batch form of the Monte Carlo estimator: one treated-subgraph
    /// decomposition per trial serves every vertex and exposure level.
    /// counts[k][v] holds the number of trials in which v was kappas[k]-core
    /// exposed; trial substreams match monte_carlo_core_exposure, so the
    /// per-vertex estimates agree exactly for the same (seed, trials).
    inline std::vector<std::vector<std::uint32_t>>
    monte_carlo_core_exposure_counts(const Graph &g, const Clustering &c,
                                     std::span<const unsigned> kappas, double p,
                                     std::uint64_t trials, std::uint64_t seed)
    {
        detail::MaskedCoreScratch scratch;
        scratch.ensure(g.num_vertices());
        std::vector<char> treated_cluster;
        std::vector<std::vector<std::uint32_t>> counts(
            kappas.size(), std::vector<std::uint32_t>(g.num_vertices(), 0));
        for (std::uint64_t t = 0; t < trials; ++t)
        {
            SplitMix64 rng = SplitMix64::substream(seed, t);
            detail::sample_treated_members(c, rng, p, treated_cluster, scratch.members);
            if (scratch.members.empty())
                continue;
            scratch.decompose(g);
            for (std::size_t i = 0; i < scratch.members.size(); ++i)
            {
                const vertex_t core = scratch.core[i];
                const vertex_t v = scratch.members[i];
                for (std::size_t k = 0; k < kappas.size(); ++k)
                    if (core >= kappas[k])
                        ++counts[k][v];
            }
        }
        return counts;
    }

    /// Test oracle: enumerates every treatment pattern over the clusters the
    /// event can depend on and sums the pattern probabilities. Exact but
    /// exponential; refuses more than 20 relevant clusters.
    inline double brute_force_exposure_oracle(const Graph &g, const Clustering &c, vertex_t v,
                                              unsigned kappa, double p, ExposureKind kind)
    {
        g.check_vertex(v);
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("treatment probability must lie in (0, 1)");

        const vertex_t own = c.cluster_of[v];
        std::vector<vertex_t> relevant;
        if (kind == ExposureKind::degree || kind == ExposureKind::pruned_degree)
        {
            relevant.push_back(own);
            for (vertex_t u : g.neighbors(v))
                relevant.push_back(c.cluster_of[u]);
        }
        else if (kind == ExposureKind::neighbor_degree)
        {
            detail::BfsScratch bfs;
            bfs.run(g, v, 2);
            relevant.push_back(own);
            for (vertex_t u : bfs.order)
                relevant.push_back(c.cluster_of[u]);
        }
        else
        {
            relevant.resize(c.size());
            std::iota(relevant.begin(), relevant.end(), 0);
        }
        std::sort(relevant.begin(), relevant.end());
        relevant.erase(std::unique(relevant.begin(), relevant.end()), relevant.end());
        if (relevant.size() > 20)
            throw std::invalid_argument("brute-force oracle limited to 20 relevant clusters");

        detail::MaskedCoreScratch scratch;
        if (kind == ExposureKind::core_monte_carlo)
            scratch.ensure(g.num_vertices());

        std::vector<char> cluster_treated(c.size(), 0);
        double total = 0.0;
        const std::size_t patterns = std::size_t(1) << relevant.size();
        for (std::size_t mask = 0; mask < patterns; ++mask)
        {
            unsigned treated_count = 0;
            for (std::size_t i = 0; i < relevant.size(); ++i)
            {
                cluster_treated[relevant[i]] = (mask >> i) & 1;
                treated_count += (mask >> i) & 1;
            }
            bool event = false;
            if (kind == ExposureKind::degree || kind == ExposureKind::pruned_degree)
            {
                if (cluster_treated[own])
                {
                    unsigned treated_neighbors = 0;
                    for (vertex_t u : g.neighbors(v))
                        if (cluster_treated[c.cluster_of[u]] &&
                            (kind != ExposureKind::pruned_degree ||
                             degree_exposure_prob(exposure_profile(g, c, u, p), kappa).probability >
                                 0.0))
                            ++treated_neighbors;
                    event = treated_neighbors >= kappa;
                }
            }
            else if (kind == ExposureKind::neighbor_degree)
            {
                // same event as neighbor_degree_exposure_prob: v's own cluster treated
                if (cluster_treated[own])
                {
                    unsigned exposed = 0;
                    for (vertex_t u : g.neighbors(v))
                    {
                        if (!cluster_treated[c.cluster_of[u]])
                            continue;
                        unsigned treated_neighbors = 0;
                        for (vertex_t w : g.neighbors(u))
                            if (cluster_treated[c.cluster_of[w]])
                                ++treated_neighbors;
                        if (treated_neighbors >= kappa)
                            ++exposed;
                    }
                    event = exposed >= kappa;
                }
            }
            else
            {
                if (cluster_treated[own])
                {
                    scratch.members.clear();
                    for (std::size_t id = 0; id < c.size(); ++id)
                        if (cluster_treated[id])
                            scratch.members.insert(scratch.members.end(), c.clusters[id].begin(),
                                                   c.clusters[id].end());
                    scratch.decompose(g);
                    event = scratch.core[scratch.slot_of[v]] >= kappa;
                }
            }
            if (event)
                total += std::pow(p, static_cast<double>(treated_count)) *
                         std::pow(1.0 - p,
                                  static_cast<double>(relevant.size() - treated_count));
        }
        return total;
    }

    inline void emit_clustering_csv(const Clustering &c, std::ostream &out)
    {
        out << "vertex,cluster,center\n";
        for (std::size_t v = 0; v < c.cluster_of.size(); ++v)
            out << v << ',' << c.cluster_of[v] << ',' << c.centers[c.cluster_of[v]] << '\n';
    }

} // namespace corescope

#endif // CORESCOPE_EXPOSURE_HPP
