#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "corescope/core.hpp"
#include "corescope/generators.hpp"
#include "corescope/graph.hpp"
#include "corescope/rng.hpp"

using namespace corescope;

namespace
{
    Graph make(vertex_t n, std::initializer_list<std::pair<vertex_t, vertex_t>> edges)
    {
        std::vector<std::pair<vertex_t, vertex_t>> e(edges);
        return Graph::from_edges(n, e);
    }

    Graph complete(vertex_t n)
    {
        std::vector<std::pair<vertex_t, vertex_t>> e;
        for (vertex_t u = 0; u < n; ++u)
            for (vertex_t v = u + 1; v < n; ++v)
                e.emplace_back(u, v);
        return Graph::from_edges(n, e);
    }

    Graph relabel(const Graph &g, const std::vector<vertex_t> &perm)
    {
        std::vector<std::pair<vertex_t, vertex_t>> e;
        for (vertex_t u = 0; u < g.num_vertices(); ++u)
            for (vertex_t v : g.neighbors(u))
                if (u < v)
                    e.emplace_back(perm[u], perm[v]);
        return Graph::from_edges(g.num_vertices(), e);
    }
} // namespace

TEST_CASE("core numbers of small fixtures", "[core]")
{
    const Graph triangle = complete(3);
    const CoreDecomposition tri = core_decomposition(triangle);
    CHECK(tri.core == std::vector<vertex_t>{2, 2, 2});
    CHECK(tri.degeneracy == 2);
    CHECK(tri.shell_sizes == std::vector<std::size_t>{0, 3});

    const Graph p4 = make(4, {{0, 1}, {1, 2}, {2, 3}});
    const CoreDecomposition path = core_decomposition(p4);
    CHECK(path.core == std::vector<vertex_t>{1, 1, 1, 1});
    CHECK(path.degeneracy == 1);

    const auto [tp, root] = gen_tree_prime(2, 3);
    CHECK(core_decomposition(tp).core[root] == 2);
}

TEST_CASE("shell distribution separates isolated vertices", "[core]")
{
    // K4 plus a pendant hanging off vertex 0, plus one isolated vertex
    const Graph g = make(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {0, 4}});
    const CoreDecomposition d = core_decomposition(g);
    CHECK(d.degeneracy == 3);
    CHECK(d.shell_sizes == std::vector<std::size_t>{1, 0, 4});
    CHECK(d.isolated_count == 1);
    CHECK(shell_distribution(d).counts == std::vector<std::size_t>{1, 0, 4});
    CHECK(shell_sizes_json(shell_distribution(d)) == "[1,0,4]");

    const auto [t24, unused] = gen_complete_ary_tree(2, 4);
    CHECK(shell_distribution(core_decomposition(t24)).counts == std::vector<std::size_t>{15});
}

TEST_CASE("naive oracle agrees on fixtures and refuses huge graphs", "[core]")
{
    const Graph star = make(9, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}, {0, 7}, {0, 8}});
    const CoreDecomposition naive = naive_core_oracle(star);
    CHECK(naive.core == core_decomposition(star).core);
    CHECK(std::all_of(naive.core.begin(), naive.core.end(),
                      [](vertex_t k) { return k == 1; }));

    const Graph big = gen_erdos_renyi(10001, 0.0, 1);
    CHECK_THROWS_AS(naive_core_oracle(big), std::invalid_argument);
}

TEST_CASE("bucket peeling equals the naive oracle on random graphs", "[core]")
{
    for (std::uint64_t seed = 1; seed <= 6; ++seed)
    {
        const Graph g = gen_erdos_renyi(200, 0.05, seed);
        CHECK(core_decomposition(g).core == naive_core_oracle(g).core);
    }
}

TEST_CASE("core numbers are invariant under vertex relabeling", "[core]")
{
    const Graph g = gen_erdos_renyi(150, 0.04, 42);
    const CoreDecomposition base = core_decomposition(g);
    SplitMix64 rng(9);
    std::vector<vertex_t> perm(g.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[rng.next_below(i)]);
    const CoreDecomposition shuffled = core_decomposition(relabel(g, perm));
    for (vertex_t v = 0; v < g.num_vertices(); ++v)
        REQUIRE(shuffled.core[perm[v]] == base.core[v]);
}

TEST_CASE("every vertex has enough neighbors inside its own core", "[core]")
{
    const Graph g = gen_erdos_renyi(300, 0.03, 5);
    const CoreDecomposition d = core_decomposition(g);
    for (vertex_t v = 0; v < g.num_vertices(); ++v)
    {
        const vertex_t k = d.core[v];
        vertex_t in_core = 0, in_next = 0;
        for (vertex_t u : g.neighbors(v))
        {
            if (d.core[u] >= k)
                ++in_core;
            if (d.core[u] >= k + 1)
                ++in_next;
        }
        REQUIRE(in_core >= k);
        REQUIRE(in_next < k + 1);
    }
}

TEST_CASE("j-cores are nested subgraphs of minimum degree j", "[core]")
{
    const Graph g = gen_erdos_renyi(250, 0.05, 17);
    const CoreDecomposition d = core_decomposition(g);
    for (vertex_t j = 1; j <= d.degeneracy; ++j)
    {
        std::vector<vertex_t> members;
        for (vertex_t v = 0; v < g.num_vertices(); ++v)
            if (d.core[v] >= j)
                members.push_back(v);
        REQUIRE(!members.empty());
        const InducedSubgraph sub = induced_subgraph(g, members);
        for (vertex_t v = 0; v < sub.graph.num_vertices(); ++v)
            REQUIRE(sub.graph.degree(v) >= j);
    }
}

TEST_CASE("removing a vertex never raises core numbers", "[core]")
{
    const Graph g = gen_erdos_renyi(120, 0.06, 23);
    const CoreDecomposition base = core_decomposition(g);
    SplitMix64 rng(77);
    for (int trial = 0; trial < 8; ++trial)
    {
        const vertex_t removed = static_cast<vertex_t>(rng.next_below(g.num_vertices()));
        std::vector<vertex_t> rest;
        for (vertex_t v = 0; v < g.num_vertices(); ++v)
            if (v != removed)
                rest.push_back(v);
        const InducedSubgraph sub = induced_subgraph(g, rest);
        const CoreDecomposition after = core_decomposition(sub.graph);
        for (vertex_t local = 0; local < sub.graph.num_vertices(); ++local)
            REQUIRE(after.core[local] <= base.core[sub.vertices[local]]);
    }
}

TEST_CASE("shell sizes plus isolated count account for every vertex", "[core]")
{
    const Graph g = gen_erdos_renyi(400, 0.004, 31); // sparse: isolated vertices likely
    const CoreDecomposition d = core_decomposition(g);
    std::size_t total = d.isolated_count;
    for (std::size_t c : d.shell_sizes)
        total += c;
    CHECK(total == g.num_vertices());
}
