#ifndef CORESCOPE_CORE_HPP
#define CORESCOPE_CORE_HPP

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "corescope/graph.hpp"

namespace corescope
{
    /// Result of peeling: per-vertex core numbers k(v), the degeneracy
    /// D = max k(v), and shell sizes c_1..c_D where c_i counts vertices with
    /// k(v) = i. Vertices with k(v) = 0 (isolated) are counted separately.
    struct CoreDecomposition
    {
        std::vector<vertex_t> core;
        vertex_t degeneracy = 0;
        std::vector<std::size_t> shell_sizes; // shell_sizes[i-1] = c_i
        std::size_t isolated_count = 0;

        void finalize(vertex_t n)
        {
            degeneracy = 0;
            for (vertex_t v = 0; v < n; ++v)
                degeneracy = std::max(degeneracy, core[v]);
            shell_sizes.assign(degeneracy, 0);
            isolated_count = 0;
            for (vertex_t v = 0; v < n; ++v)
            {
                if (core[v] == 0)
                    ++isolated_count;
                else
                    ++shell_sizes[core[v] - 1];
            }
        }
    };

    /// Linear-time peeling with bucketed degree queues: k(v) is the value of
    /// the peel threshold at the moment v is removed.
    inline CoreDecomposition core_decomposition(const Graph &g)
    {
        const vertex_t n = g.num_vertices();
        CoreDecomposition result;
        result.core.assign(n, 0);
        if (n == 0)
            return result;

        const vertex_t md = g.max_degree();
        std::vector<vertex_t> deg(n);
        std::vector<std::size_t> bin(md + 2, 0);
        for (vertex_t v = 0; v < n; ++v)
        {
            deg[v] = g.degree(v);
            ++bin[deg[v]];
        }
        std::size_t start = 0;
        for (vertex_t d = 0; d <= md; ++d)
        {
            const std::size_t count = bin[d];
            bin[d] = start;
            start += count;
        }
        // vert sorted by degree (ascending id within a degree class), pos is its inverse
        std::vector<vertex_t> vert(n), pos(n);
        for (vertex_t v = 0; v < n; ++v)
        {
            pos[v] = static_cast<vertex_t>(bin[deg[v]]);
            vert[pos[v]] = v;
            ++bin[deg[v]];
        }
        for (vertex_t d = md; d >= 1; --d)
            bin[d] = bin[d - 1];
        bin[0] = 0;

        for (std::size_t i = 0; i < n; ++i)
        {
            const vertex_t v = vert[i];
            result.core[v] = deg[v];
            for (vertex_t u : g.neighbors(v))
            {
                if (deg[u] <= deg[v])
                    continue;
                // swap u with the first vertex of its bucket, then shrink its degree
                const std::size_t du = deg[u];
                const std::size_t pu = pos[u];
                const std::size_t pw = bin[du];
                const vertex_t w = vert[pw];
                if (u != w)
                {
                    vert[pu] = w;
                    vert[pw] = u;
                    pos[u] = static_cast<vertex_t>(pw);
                    pos[w] = static_cast<vertex_t>(pu);
                }
                ++bin[du];
                --deg[u];
            }
        }
        result.finalize(n);
        return result;
    }

    /// Deliberately naive peeling oracle: repeated full scans deleting any
    /// vertex of degree <= i, no bucket structure. Same output contract as
    /// core_decomposition; refuses graphs beyond the quadratic-time budget.
    inline CoreDecomposition naive_core_oracle(const Graph &g)
    {
        const vertex_t n = g.num_vertices();
        if (n > 10000)
            throw std::invalid_argument("naive_core_oracle: graph too large (n > 10^4)");
        CoreDecomposition result;
        result.core.assign(n, 0);
        std::vector<bool> alive(n, true);
        std::vector<vertex_t> deg(n);
        for (vertex_t v = 0; v < n; ++v)
            deg[v] = g.degree(v);

        std::size_t remaining = n;
        vertex_t threshold = 0;
        while (remaining > 0)
        {
            bool removed_any = false;
            for (vertex_t v = 0; v < n; ++v)
            {
                if (!alive[v] || deg[v] > threshold)
                    continue;
                alive[v] = false;
                result.core[v] = threshold;
                --remaining;
                removed_any = true;
                for (vertex_t u : g.neighbors(v))
                    if (alive[u])
                        --deg[u];
                v = static_cast<vertex_t>(-1); // rescan from the beginning
            }
            if (!removed_any)
                ++threshold;
        }
        result.finalize(n);
        return result;
    }

    /// Target (or observed) shell counts c_1..c_D. counts[i-1] = c_i.
    struct ShellDistribution
    {
        std::vector<std::size_t> counts;

        vertex_t depth() const { return static_cast<vertex_t>(counts.size()); }

        std::size_t total() const
        {
            std::size_t sum = 0;
            for (std::size_t c : counts)
                sum += c;
            return sum;
        }

        /// A shell i with c_i > 0 needs at least i+1 vertices present in
        /// shells >= i, or edge insertion runs out of endpoints.
        bool feasible() const
        {
            if (counts.empty() || counts.back() == 0)
                return false;
            std::size_t deeper = 0;
            for (std::size_t i = counts.size(); i >= 1; --i)
            {
                deeper += counts[i - 1];
                if (counts[i - 1] > 0 && deeper < i + 1)
                    return false;
            }
            return true;
        }
    };

    /// Exact shell counts of a decomposition; k = 0 vertices are excluded
    /// from the counts and reported via isolated_count on the decomposition.
    inline ShellDistribution shell_distribution(const CoreDecomposition &d)
    {
        return ShellDistribution{d.shell_sizes};
    }

    inline void emit_core_csv(const CoreDecomposition &d, std::ostream &out)
    {
        out << "vertex,core\n";
        for (std::size_t v = 0; v < d.core.size(); ++v)
            out << v << ',' << d.core[v] << '\n';
    }

    inline std::string shell_sizes_json(const ShellDistribution &dist)
    {
        std::string s = "[";
        for (std::size_t i = 0; i < dist.counts.size(); ++i)
        {
            if (i)
                s += ',';
            s += std::to_string(dist.counts[i]);
        }
        s += ']';
        return s;
    }

} // namespace corescope

#endif // CORESCOPE_CORE_HPP
