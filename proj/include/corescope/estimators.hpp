#ifndef CORESCOPE_ESTIMATORS_HPP
#define CORESCOPE_ESTIMATORS_HPP

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "corescope/core.hpp"
#include "corescope/graph.hpp"
#include "corescope/parallel.hpp"

namespace corescope
{
    namespace detail
    {
        /// Max-min step over bucket counts: largest j <= deg with at least j
        /// bounds >= j. `counts` must have deg+1 zeroed slots on entry and is
        /// left zeroed on exit.
        inline vertex_t upper_bound_step_ws(vertex_t deg,
                                            std::span<const vertex_t> bounds,
                                            std::vector<vertex_t> &counts)
        {
            for (vertex_t b : bounds)
                ++counts[std::min(b, deg)];
            vertex_t answer = 0;
            vertex_t at_least = 0;
            for (vertex_t j = deg; j >= 1; --j)
            {
                at_least += counts[j];
                if (at_least >= j)
                {
                    answer = j;
                    break;
                }
            }
            for (vertex_t b : bounds)
                counts[std::min(b, deg)] = 0;
            return answer;
        }
    } // namespace detail

    /// One refinement step: with neighbor upper bounds psi(u_1)..psi(u_d)
    /// sorted ascending, returns max_i min(psi(u_i), deg - i + 1). Realized
    /// with a bucket count over [0, deg] so the step costs O(deg).
    inline vertex_t upper_bound_step(vertex_t deg, std::span<const vertex_t> neighbor_bounds)
    {
        if (neighbor_bounds.size() != deg)
            throw std::invalid_argument("upper_bound_step: bound count must equal degree");
        if (deg == 0)
            return 0;
        std::vector<vertex_t> counts(static_cast<std::size_t>(deg) + 1, 0);
        return detail::upper_bound_step_ws(deg, neighbor_bounds, counts);
    }

    enum class EstimatorKind
    {
        propagating, // khat: non-increasing upper bounds, khat_0 = degree
        induced      // kbreve: non-decreasing lower bounds, kbreve_0 = 0
    };

    inline const char *estimator_name(EstimatorKind kind)
    {
        return kind == EstimatorKind::propagating ? "hat" : "breve";
    }

    /// Per-vertex estimates for every delta in 0..delta_max.
    struct EstimateTable
    {
        EstimatorKind kind = EstimatorKind::propagating;
        unsigned delta_max = 0;
        std::vector<std::vector<vertex_t>> values; // values[delta][v]
        std::vector<vertex_t> exact_core;          // optional, empty unless attached

        vertex_t at(unsigned delta, vertex_t v) const { return values[delta][v]; }
        vertex_t num_vertices() const
        {
            return values.empty() ? 0 : static_cast<vertex_t>(values[0].size());
        }
    };

    /// Synchronous propagation over the whole graph: round 0 is the degree,
    /// each later round applies upper_bound_step at every vertex using the
    /// previous round's values. Rounds are barrier-separated; vertices within
    /// a round may be evaluated concurrently.
    inline EstimateTable propagate_all(const Graph &g, unsigned delta_max)
    {
        const vertex_t n = g.num_vertices();
        EstimateTable table;
        table.kind = EstimatorKind::propagating;
        table.delta_max = delta_max;
        table.values.assign(delta_max + 1, std::vector<vertex_t>(n));
        for (vertex_t v = 0; v < n; ++v)
            table.values[0][v] = g.degree(v);

        const unsigned workers = thread_count();
        for (unsigned round = 1; round <= delta_max; ++round)
        {
            const std::vector<vertex_t> &prev = table.values[round - 1];
            std::vector<vertex_t> &cur = table.values[round];
            parallel_for(
                n,
                [&](std::size_t vi) {
                    thread_local std::vector<vertex_t> counts;
                    thread_local std::vector<vertex_t> bounds;
                    const vertex_t v = static_cast<vertex_t>(vi);
                    const vertex_t d = g.degree(v);
                    if (counts.size() < static_cast<std::size_t>(d) + 1)
                        counts.assign(static_cast<std::size_t>(d) + 1, 0);
                    bounds.clear();
                    for (vertex_t u : g.neighbors(v))
                        bounds.push_back(prev[u]);
                    cur[v] = detail::upper_bound_step_ws(d, bounds, counts);
                },
                workers);
        }
        return table;
    }

    /// khat_delta(v) from local data only: BFS collects N_delta(v), then the
    /// estimate propagates inward over a shrinking horizon, so the cost is
    /// O(delta * |E_delta(v)|) and vertices outside N_delta(v) are never read.
    inline vertex_t propagate_estimate(const Graph &g, vertex_t v, unsigned delta)
    {
        g.check_vertex(v);
        if (delta == 0)
            return g.degree(v);

        thread_local detail::BfsScratch bfs;
        thread_local std::vector<vertex_t> slot_of;
        thread_local std::vector<std::uint32_t> slot_stamp;
        thread_local std::uint32_t slot_epoch = 0;
        thread_local std::vector<vertex_t> prev, cur, counts, bounds;

        const vertex_t n = g.num_vertices();
        if (slot_of.size() < n)
        {
            slot_of.resize(n);
            slot_stamp.assign(n, 0);
            slot_epoch = 0;
        }
        bfs.run(g, v, delta);
        const std::vector<vertex_t> &members = bfs.order; // grouped by distance
        const std::size_t k = members.size();

        ++slot_epoch;
        if (slot_epoch == 0)
        {
            std::fill(slot_stamp.begin(), slot_stamp.end(), 0);
            slot_epoch = 1;
        }
        for (std::size_t i = 0; i < k; ++i)
        {
            slot_of[members[i]] = static_cast<vertex_t>(i);
            slot_stamp[members[i]] = slot_epoch;
        }
        // prefix_at[d] = number of members at distance <= d
        std::vector<std::size_t> prefix_at(delta + 1, 0);
        for (std::size_t i = 0; i < k; ++i)
            ++prefix_at[bfs.dist[members[i]]];
        for (unsigned d = 1; d <= delta; ++d)
            prefix_at[d] += prefix_at[d - 1];

        prev.resize(k);
        cur.resize(k);
        for (std::size_t i = 0; i < k; ++i)
            prev[i] = g.degree(members[i]); // khat_0 uses full degrees
        const vertex_t dmax = g.max_degree();
        if (counts.size() < static_cast<std::size_t>(dmax) + 1)
            counts.assign(static_cast<std::size_t>(dmax) + 1, 0);

        for (unsigned round = 1; round <= delta; ++round)
        {
            const std::size_t active = prefix_at[delta - round];
            for (std::size_t i = 0; i < active; ++i)
            {
                const vertex_t u = members[i];
                const vertex_t d = g.degree(u);
                bounds.clear();
                for (vertex_t w : g.neighbors(u))
                    bounds.push_back(prev[slot_of[w]]);
                cur[i] = detail::upper_bound_step_ws(d, bounds, counts);
            }
            // inactive slots keep stale values; they are never read again
            for (std::size_t i = 0; i < active; ++i)
                prev[i] = cur[i];
        }
        return prev[0];
    }

    /// kbreve_delta(v): core number of v within the subgraph induced on
    /// N_delta(v).
    inline vertex_t induced_estimate(const Graph &g, vertex_t v, unsigned delta)
    {
        g.check_vertex(v);
        if (delta == 0)
            return 0;
        const NeighborhoodView view = neighborhood(g, v, delta);
        const InducedSubgraph sub = induced_subgraph(g, view.members);
        return core_decomposition(sub.graph).core[sub.to_local(v)];
    }

    namespace detail
    {
        /// Workspace for repeated induced-core evaluations over one graph.
        struct InducedSweepScratch
        {
            BfsScratch bfs;
            std::vector<vertex_t> slot_of;
            std::vector<std::uint32_t> slot_stamp;
            std::uint32_t slot_epoch = 0;
            std::vector<std::size_t> offsets;
            std::vector<vertex_t> adj, deg, core, vert, pos;
            std::vector<std::size_t> bin;

            void ensure(vertex_t n)
            {
                if (slot_of.size() < n)
                {
                    slot_of.resize(n);
                    slot_stamp.assign(n, 0);
                    slot_epoch = 0;
                }
            }
        };

        /// Fills values[d] = kbreve_d(v) for d in [0, min(delta_max, ecc(v))]
        /// and returns the eccentricity reached. For d beyond ecc(v) the
        /// neighborhood stops growing, so the last value repeats.
        inline unsigned induced_core_sweep(const Graph &g, vertex_t v, unsigned delta_max,
                                           std::vector<vertex_t> &values,
                                           InducedSweepScratch &ws)
        {
            ws.ensure(g.num_vertices());
            const unsigned ecc = ws.bfs.run(g, v, delta_max);
            const std::vector<vertex_t> &members = ws.bfs.order;
            const std::size_t total = members.size();

            ++ws.slot_epoch;
            if (ws.slot_epoch == 0)
            {
                std::fill(ws.slot_stamp.begin(), ws.slot_stamp.end(), 0);
                ws.slot_epoch = 1;
            }
            for (std::size_t i = 0; i < total; ++i)
            {
                ws.slot_of[members[i]] = static_cast<vertex_t>(i);
                ws.slot_stamp[members[i]] = ws.slot_epoch;
            }
            std::vector<std::size_t> prefix_at(delta_max + 2, 0);
            for (std::size_t i = 0; i < total; ++i)
                ++prefix_at[ws.bfs.dist[members[i]] + 1];
            for (unsigned d = 1; d <= delta_max + 1; ++d)
                prefix_at[d] += prefix_at[d - 1];

            values.assign(std::min(delta_max, ecc) + 1, 0);
            values[0] = 0;
            for (unsigned d = 1; d <= std::min(delta_max, ecc); ++d)
            {
                const std::size_t k = prefix_at[d + 1]; // members within distance d
                // build the induced adjacency among the first k members
                ws.offsets.assign(k + 1, 0);
                ws.deg.assign(k, 0);
                for (std::size_t i = 0; i < k; ++i)
                {
                    const vertex_t u = members[i];
                    vertex_t du = 0;
                    for (vertex_t w : g.neighbors(u))
                        if (ws.slot_stamp[w] == ws.slot_epoch && ws.slot_of[w] < k)
                            ++du;
                    ws.deg[i] = du;
                    ws.offsets[i + 1] = ws.offsets[i] + du;
                }
                ws.adj.resize(ws.offsets[k]);
                for (std::size_t i = 0; i < k; ++i)
                {
                    std::size_t fill = ws.offsets[i];
                    const vertex_t u = members[i];
                    for (vertex_t w : g.neighbors(u))
                        if (ws.slot_stamp[w] == ws.slot_epoch && ws.slot_of[w] < k)
                            ws.adj[fill++] = ws.slot_of[w];
                }
                // bucket peel on the local graph
                vertex_t md = 0;
                for (std::size_t i = 0; i < k; ++i)
                    md = std::max(md, ws.deg[i]);
                ws.bin.assign(md + 2, 0);
                for (std::size_t i = 0; i < k; ++i)
                    ++ws.bin[ws.deg[i]];
                std::size_t start = 0;
                for (vertex_t dd = 0; dd <= md; ++dd)
                {
                    const std::size_t c = ws.bin[dd];
                    ws.bin[dd] = start;
                    start += c;
                }
                ws.vert.resize(k);
                ws.pos.resize(k);
                ws.core.resize(k);
                for (std::size_t i = 0; i < k; ++i)
                {
                    ws.pos[i] = static_cast<vertex_t>(ws.bin[ws.deg[i]]++);
                    ws.vert[ws.pos[i]] = static_cast<vertex_t>(i);
                }
                for (vertex_t dd = md; dd >= 1; --dd)
                    ws.bin[dd] = ws.bin[dd - 1];
                ws.bin[0] = 0;
                for (std::size_t i = 0; i < k; ++i)
                {
                    const vertex_t u = ws.vert[i];
                    ws.core[u] = ws.deg[u];
                    for (std::size_t e = ws.offsets[u]; e < ws.offsets[u + 1]; ++e)
                    {
                        const vertex_t w = ws.adj[e];
                        if (ws.deg[w] <= ws.deg[u])
                            continue;
                        const std::size_t pw = ws.bin[ws.deg[w]];
                        const vertex_t front = ws.vert[pw];
                        if (w != front)
                        {
                            ws.vert[ws.pos[w]] = front;
                            ws.vert[pw] = w;
                            std::swap(ws.pos[w], ws.pos[front]);
                        }
                        ++ws.bin[ws.deg[w]];
                        --ws.deg[w];
                    }
                }
                values[d] = ws.core[0]; // slot 0 is the center
            }
            return ecc;
        }
    } // namespace detail

    /// Induced estimates for all vertices and delta in 0..delta_max.
    inline EstimateTable induced_all(const Graph &g, unsigned delta_max)
    {
        const vertex_t n = g.num_vertices();
        EstimateTable table;
        table.kind = EstimatorKind::induced;
        table.delta_max = delta_max;
        table.values.assign(delta_max + 1, std::vector<vertex_t>(n));
        parallel_for(n, [&](std::size_t vi) {
            thread_local detail::InducedSweepScratch ws;
            thread_local std::vector<vertex_t> vals;
            const vertex_t v = static_cast<vertex_t>(vi);
            detail::induced_core_sweep(g, v, delta_max, vals, ws);
            for (unsigned d = 0; d <= delta_max; ++d)
                table.values[d][v] = vals[std::min<std::size_t>(d, vals.size() - 1)];
        });
        return table;
    }

    /// Attaches exact core numbers for ratio computation.
    inline void attach_exact_core(EstimateTable &table, const CoreDecomposition &decomp)
    {
        if (decomp.core.size() != table.num_vertices())
            throw std::invalid_argument("estimate table and decomposition cover different vertex sets");
        table.exact_core = decomp.core;
    }

    /// Estimate divided by true core number; 1 is optimal. Propagating
    /// ratios are >= 1 and induced ratios <= 1 by the bound chains.
    struct RatioReport
    {
        EstimatorKind kind = EstimatorKind::propagating;
        unsigned delta_max = 0;
        double bin_width = 0.25;
        std::vector<std::vector<double>> ratios; // ratios[delta][v], -1 where excluded
        std::vector<double> optimal_fraction;    // per delta
        std::vector<std::vector<std::size_t>> histogram; // per delta, non-optimal ratios binned
        std::size_t excluded_zero_core = 0;

        static constexpr std::size_t kBins = 24; // [0, 6) in 0.25 steps; last bin is overflow
    };

    inline RatioReport ratio_report(const EstimateTable &table, const CoreDecomposition &decomp,
                                    bool exclude_zero_core = false)
    {
        const vertex_t n = table.num_vertices();
        if (decomp.core.size() != n)
            throw std::invalid_argument("estimate table and decomposition cover different vertex sets");

        RatioReport report;
        report.kind = table.kind;
        report.delta_max = table.delta_max;
        for (vertex_t v = 0; v < n; ++v)
            if (decomp.core[v] == 0)
            {
                if (!exclude_zero_core)
                    throw std::invalid_argument(
                        "ratio undefined for vertex with core number 0; pass exclude_zero_core");
                ++report.excluded_zero_core;
            }

        report.ratios.assign(table.delta_max + 1, std::vector<double>(n, -1.0));
        report.optimal_fraction.assign(table.delta_max + 1, 0.0);
        report.histogram.assign(table.delta_max + 1,
                                std::vector<std::size_t>(RatioReport::kBins, 0));
        const std::size_t included = n - report.excluded_zero_core;
        for (unsigned d = 0; d <= table.delta_max; ++d)
        {
            std::size_t optimal = 0;
            for (vertex_t v = 0; v < n; ++v)
            {
                if (decomp.core[v] == 0)
                    continue;
                const double r = static_cast<double>(table.values[d][v]) / decomp.core[v];
                report.ratios[d][v] = r;
                if (table.values[d][v] == decomp.core[v])
                {
                    ++optimal;
                    continue;
                }
                const std::size_t bin = std::min<std::size_t>(
                    static_cast<std::size_t>(r / report.bin_width), RatioReport::kBins - 1);
                ++report.histogram[d][bin];
            }
            report.optimal_fraction[d] = included == 0 ? 0.0
                                                       : static_cast<double>(optimal) / included;
        }
        return report;
    }

    /// Rows: vertex,delta,kind,estimate,core,ratio. The ratio column is left
    /// empty when the core number is 0. Requires exact cores attached.
    inline void emit_estimate_csv(const EstimateTable &table, const CoreDecomposition &decomp,
                                  std::ostream &out, unsigned delta_lo = 0)
    {
        out << "vertex,delta,kind,estimate,core,ratio\n";
        const char *kind = estimator_name(table.kind);
        for (unsigned d = delta_lo; d <= table.delta_max; ++d)
            for (vertex_t v = 0; v < table.num_vertices(); ++v)
            {
                out << v << ',' << d << ',' << kind << ',' << table.values[d][v] << ','
                    << decomp.core[v] << ',';
                if (decomp.core[v] != 0)
                    out << static_cast<double>(table.values[d][v]) / decomp.core[v];
                out << '\n';
            }
    }

} // namespace corescope

#endif // CORESCOPE_ESTIMATORS_HPP
