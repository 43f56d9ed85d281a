#ifndef CORESCOPE_GENERATORS_HPP
#define CORESCOPE_GENERATORS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "corescope/core.hpp"
#include "corescope/graph.hpp"
#include "corescope/parallel.hpp"
#include "corescope/rng.hpp"

namespace corescope
{
    struct generation_error : std::runtime_error
    {
        generation_error(const std::string &msg, vertex_t shell_number)
            : std::runtime_error(msg), shell(shell_number)
        {
        }
        vertex_t shell;
    };

    /// G(n, p): each unordered pair an edge independently with probability p.
    /// Uses geometric pair-skipping, so expected cost is O(n + m).
    inline Graph gen_erdos_renyi(vertex_t n, double p, std::uint64_t seed)
    {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("edge probability must lie in [0, 1]");
        std::vector<std::pair<vertex_t, vertex_t>> edges;
        if (n >= 2 && p > 0.0)
        {
            if (p == 1.0)
            {
                edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
                for (vertex_t u = 0; u < n; ++u)
                    for (vertex_t v = u + 1; v < n; ++v)
                        edges.emplace_back(u, v);
            }
            else
            {
                SplitMix64 rng(seed);
                const double log_1mp = std::log1p(-p);
                std::int64_t v = 1, w = -1;
                while (v < static_cast<std::int64_t>(n))
                {
                    const double u = rng.next_double();
                    const double skip_f = std::floor(std::log1p(-u) / log_1mp);
                    const std::int64_t skip =
                        skip_f >= 4.0e18 ? std::numeric_limits<std::int64_t>::max() / 4
                                         : static_cast<std::int64_t>(skip_f);
                    w += 1 + skip;
                    while (w >= v && v < static_cast<std::int64_t>(n))
                    {
                        w -= v;
                        ++v;
                    }
                    if (v < static_cast<std::int64_t>(n))
                        edges.emplace_back(static_cast<vertex_t>(w), static_cast<vertex_t>(v));
                }
            }
        }
        return Graph::from_edges(n, edges);
    }

    /// Grows a graph shell by shell, deepest first: shell i adds c_i fresh
    /// vertices, then tops each one up to degree i with edges to uniformly
    /// random present non-adjacent vertices. The output's core decomposition
    /// reproduces the input counts exactly.
    inline Graph gen_shell_distribution(const ShellDistribution &dist, std::uint64_t seed)
    {
        const vertex_t depth = dist.depth();
        if (depth == 0 || dist.counts.back() == 0)
            throw generation_error("shell distribution must end with a non-empty deepest shell",
                                   depth);
        {
            std::size_t deeper = 0;
            vertex_t bad_shell = 0;
            for (vertex_t i = depth; i >= 1; --i)
            {
                deeper += dist.counts[i - 1];
                if (dist.counts[i - 1] > 0 && deeper < static_cast<std::size_t>(i) + 1)
                    bad_shell = i;
            }
            if (bad_shell != 0)
                throw generation_error(
                    "infeasible shell distribution: shell " + std::to_string(bad_shell) +
                        " needs at least " + std::to_string(bad_shell + 1) +
                        " vertices in shells >= " + std::to_string(bad_shell),
                    bad_shell);
        }

        const std::size_t n = dist.total();
        SplitMix64 rng(seed);
        std::vector<std::vector<vertex_t>> adj(n);
        std::vector<char> excluded(n, 0);
        std::vector<vertex_t> candidates;
        std::vector<std::pair<vertex_t, vertex_t>> edges;

        std::size_t present = 0;
        vertex_t id = 0;
        for (vertex_t shell = depth; shell >= 1; --shell)
        {
            const std::size_t count = dist.counts[shell - 1];
            present += count; // V_i joins the graph before its edges are added
            const vertex_t first = id;
            for (; id < first + count; ++id)
            {
                if (adj[id].size() >= shell)
                    continue;
                const std::size_t need = shell - adj[id].size();
                excluded[id] = 1;
                for (vertex_t u : adj[id])
                    excluded[u] = 1;
                candidates.clear();
                for (vertex_t u = 0; u < present; ++u)
                    if (!excluded[u])
                        candidates.push_back(u);
                excluded[id] = 0;
                for (vertex_t u : adj[id])
                    excluded[u] = 0;
                if (candidates.size() < need)
                    throw generation_error("shell " + std::to_string(shell) +
                                               ": not enough candidate endpoints",
                                           shell);
                for (std::size_t t = 0; t < need; ++t)
                {
                    const std::size_t pick =
                        t + rng.next_below(candidates.size() - t);
                    std::swap(candidates[t], candidates[pick]);
                    const vertex_t u = candidates[t];
                    adj[id].push_back(u);
                    adj[u].push_back(id);
                    edges.emplace_back(id, u);
                }
            }
        }
        return Graph::from_edges(static_cast<vertex_t>(n), edges);
    }

    /// Complete j-ary tree with `levels` levels; level i holds j^(i-1)
    /// vertices and the root (id 0) sits alone on level 1.
    inline std::pair<Graph, vertex_t> gen_complete_ary_tree(unsigned branching, unsigned levels)
    {
        if (branching < 2 || levels < 2)
            throw std::invalid_argument("complete j-ary tree requires branching >= 2, levels >= 2");
        std::uint64_t total = 1, layer = 1;
        for (unsigned i = 2; i <= levels; ++i)
        {
            layer *= branching;
            total += layer;
            if (total > (1u << 27))
                throw std::invalid_argument("tree too large");
        }
        std::vector<std::pair<vertex_t, vertex_t>> edges;
        edges.reserve(total - 1);
        vertex_t next = 1;
        std::uint64_t level_size = 1;
        vertex_t level_first = 0;
        for (unsigned i = 2; i <= levels; ++i)
        {
            const vertex_t parent_first = level_first;
            level_first = next;
            for (std::uint64_t parent = 0; parent < level_size; ++parent)
                for (unsigned b = 0; b < branching; ++b)
                {
                    edges.emplace_back(parent_first + static_cast<vertex_t>(parent), next);
                    ++next;
                }
            level_size *= branching;
        }
        return {Graph::from_edges(static_cast<vertex_t>(total), edges), 0};
    }

    /// T'_{j,l}: the complete j-ary tree plus j extra vertices, each adjacent
    /// to every leaf.
    inline std::pair<Graph, vertex_t> gen_tree_prime(unsigned branching, unsigned levels)
    {
        auto [tree, root] = gen_complete_ary_tree(branching, levels);
        const vertex_t tree_n = tree.num_vertices();
        std::uint64_t leaves = 1;
        for (unsigned i = 2; i <= levels; ++i)
            leaves *= branching;
        const vertex_t leaf_first = tree_n - static_cast<vertex_t>(leaves);

        std::vector<std::pair<vertex_t, vertex_t>> edges;
        for (vertex_t u = 0; u < tree_n; ++u)
            for (vertex_t v : tree.neighbors(u))
                if (u < v)
                    edges.emplace_back(u, v);
        for (unsigned extra = 0; extra < branching; ++extra)
        {
            const vertex_t w = tree_n + extra;
            for (std::uint64_t leaf = 0; leaf < leaves; ++leaf)
                edges.emplace_back(leaf_first + static_cast<vertex_t>(leaf), w);
        }
        return {Graph::from_edges(tree_n + branching, edges), root};
    }

    /// Distribution of the one-round propagating estimate on G(n, p) with
    /// fixed mean degree: P[khat_1 = kappa] for kappa = 0..kappa_max, with
    /// the infinite degree sum truncated at d_max.
    struct Khat1Pmf
    {
        double mean_degree = 0.0;
        unsigned kappa_max = 0;
        unsigned d_max = 0;
        double tail_tolerance = 0.0;
        std::vector<double> probabilities;
        double tail_mass = 0.0;
        bool tail_exceeds_tolerance = false;
    };

    inline unsigned khat1_default_dmax(double mean_degree, unsigned kappa_max)
    {
        return static_cast<unsigned>(std::ceil(mean_degree + 12.0 * std::sqrt(mean_degree))) +
               kappa_max;
    }

    /// Evaluates the analytic pmf: a vertex of degree d has, conditionally,
    /// i neighbors that can support a bound above kappa, x on the boundary
    /// and j below it, weighted by the multinomial d!/(i!j!x!); neighbor
    /// degrees follow the size-biased Poisson (one edge is already spent on
    /// the vertex itself, hence the shifted pmf/cdf arguments). Multinomial
    /// terms go through lgamma to avoid overflow.
    inline Khat1Pmf analytic_khat1_pmf(double mean_degree, unsigned kappa_max,
                                       unsigned d_max = 0, double tail_tolerance = 1e-9)
    {
        if (!(mean_degree > 0.0))
            throw std::invalid_argument("mean degree must be positive");
        if (d_max == 0)
            d_max = khat1_default_dmax(mean_degree, kappa_max);
        if (d_max < kappa_max)
            throw std::invalid_argument("d_max must be at least kappa_max");

        const double lambda = mean_degree;
        std::vector<double> pois(d_max + 1), cdf(d_max + 1), lg(d_max + 2);
        pois[0] = std::exp(-lambda);
        cdf[0] = pois[0];
        for (unsigned k = 1; k <= d_max; ++k)
        {
            pois[k] = pois[k - 1] * lambda / k;
            cdf[k] = cdf[k - 1] + pois[k];
        }
        lg[0] = 0.0;
        for (unsigned k = 1; k <= d_max + 1; ++k)
            lg[k] = std::lgamma(static_cast<double>(k) + 1.0);

        auto pmf_at = [&](int k) { return k < 0 ? 0.0 : pois[static_cast<unsigned>(k)]; };
        auto cdf_at = [&](int k) { return k < 0 ? 0.0 : cdf[static_cast<unsigned>(k)]; };

        Khat1Pmf result;
        result.mean_degree = mean_degree;
        result.kappa_max = kappa_max;
        result.d_max = d_max;
        result.tail_tolerance = tail_tolerance;
        result.probabilities.assign(kappa_max + 1, 0.0);

        parallel_for(kappa_max + 1, [&](std::size_t ki) {
            const unsigned kappa = static_cast<unsigned>(ki);
            const double above = 1.0 - cdf_at(static_cast<int>(kappa) - 1);
            const double below = cdf_at(static_cast<int>(kappa) - 2);
            const double at = pmf_at(static_cast<int>(kappa) - 1);
            const double log_above = above > 0.0 ? std::log(above) : 0.0;
            const double log_below = below > 0.0 ? std::log(below) : 0.0;
            const double log_at = at > 0.0 ? std::log(at) : 0.0;

            double total = 0.0;
            for (unsigned d = kappa; d <= d_max; ++d)
            {
                double conditional = 0.0;
                for (unsigned i = 0; i <= kappa; ++i)
                {
                    if (above == 0.0 && i > 0)
                        break;
                    for (unsigned j = 0; j <= d - kappa; ++j)
                    {
                        const unsigned x = d - i - j;
                        if (below == 0.0 && j > 0)
                            break;
                        if (at == 0.0 && x > 0)
                            continue;
                        const double log_term = lg[d] - lg[i] - lg[j] - lg[x] +
                                                i * log_above + j * log_below + x * log_at;
                        conditional += std::exp(log_term);
                    }
                }
                total += pois[d] * conditional;
            }
            result.probabilities[kappa] = total;
        });

        double sum = 0.0;
        for (double p : result.probabilities)
            sum += p;
        result.tail_mass = std::max(0.0, 1.0 - sum);
        result.tail_exceeds_tolerance = result.tail_mass > tail_tolerance;
        return result;
    }

} // namespace corescope

#endif // CORESCOPE_GENERATORS_HPP
