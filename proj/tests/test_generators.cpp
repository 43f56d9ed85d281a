#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "corescope/core.hpp"
#include "corescope/estimators.hpp"
#include "corescope/generators.hpp"
#include "corescope/graph.hpp"
#include "corescope/rng.hpp"

using namespace corescope;

TEST_CASE("Erdos-Renyi edge cases and determinism", "[generators]")
{
    CHECK(gen_erdos_renyi(5, 0.0, 1).num_edges() == 0);
    CHECK(gen_erdos_renyi(5, 1.0, 1).num_edges() == 10);
    CHECK_THROWS_AS(gen_erdos_renyi(5, -0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_erdos_renyi(5, 1.5, 1), std::invalid_argument);

    const Graph a = gen_erdos_renyi(300, 0.02, 99);
    const Graph b = gen_erdos_renyi(300, 0.02, 99);
    const Graph c = gen_erdos_renyi(300, 0.02, 100);
    CHECK(a == b);
    CHECK_FALSE(a == c);
}

TEST_CASE("Erdos-Renyi empirical mean degree", "[generators]")
{
    // 20 seeds at n=10^4, p=3/(n-1): the pooled mean degree estimator has
    // standard error 2*sqrt(S*N*p*(1-p))/(S*n) ~ 0.0055, so a 3-sigma band
    // of +-0.0165 around 3.
    const vertex_t n = 10000;
    const double p = 3.0 / (n - 1);
    double total_edges = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        total_edges += static_cast<double>(gen_erdos_renyi(n, p, seed).num_edges());
    const double mean_degree = 2.0 * total_edges / (20.0 * n);
    CHECK(std::abs(mean_degree - 3.0) <= 0.0165);
}

TEST_CASE("complete j-ary trees have the prescribed shape", "[generators]")
{
    const auto [t24, root] = gen_complete_ary_tree(2, 4);
    CHECK(t24.num_vertices() == 15);
    CHECK(t24.num_edges() == 14);
    CHECK(root == 0);
    CHECK(t24.degree(root) == 2);
    const CoreDecomposition d = core_decomposition(t24);
    for (vertex_t v = 0; v < t24.num_vertices(); ++v)
        REQUIRE(d.core[v] == 1);

    const auto [star, sroot] = gen_complete_ary_tree(3, 2);
    CHECK(star.num_vertices() == 4);
    CHECK(star.degree(sroot) == 3);

    CHECK_THROWS_AS(gen_complete_ary_tree(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(gen_complete_ary_tree(2, 1), std::invalid_argument);
}

TEST_CASE("T-prime attaches the extra vertices to every leaf", "[generators]")
{
    const auto [tp24, root] = gen_tree_prime(2, 4);
    CHECK(tp24.num_vertices() == 17);
    CHECK(tp24.num_edges() == 30); // 14 tree edges + 2*8 attachment edges

    const auto [tp23, r23] = gen_tree_prime(2, 3);
    CHECK(core_decomposition(tp23).core[r23] == 2);

    const auto [tp33, r33] = gen_tree_prime(3, 3);
    CHECK(tp33.degree(r33) == 3);
    CHECK(core_decomposition(tp33).core[r33] == 3);
    CHECK(propagate_estimate(tp33, r33, 0) == 3); // khat_0 = d = k at the T' root
}

TEST_CASE("shell-distribution generator fixtures", "[generators]")
{
    const Graph k2 = gen_shell_distribution(ShellDistribution{{2}}, 5);
    CHECK(k2.num_vertices() == 2);
    CHECK(k2.num_edges() == 1);

    const Graph g = gen_shell_distribution(ShellDistribution{{0, 4}}, 11);
    const CoreDecomposition d = core_decomposition(g);
    CHECK(d.shell_sizes == std::vector<std::size_t>{0, 4});

    try
    {
        gen_shell_distribution(ShellDistribution{{0, 0, 2}}, 1);
        FAIL("expected generation_error");
    }
    catch (const generation_error &e)
    {
        CHECK(e.shell == 3);
        CHECK(std::string(e.what()).find("shell 3") != std::string::npos);
    }
    CHECK_THROWS_AS(gen_shell_distribution(ShellDistribution{{2, 0}}, 1), generation_error);
}

TEST_CASE("shell distributions round-trip through the generator", "[generators]")
{
    SplitMix64 rng(2024);
    std::size_t produced = 0;
    while (produced < 60)
    {
        const vertex_t depth = 1 + static_cast<vertex_t>(rng.next_below(8));
        ShellDistribution dist;
        dist.counts.resize(depth);
        for (auto &c : dist.counts)
            c = rng.next_below(41);
        dist.counts[depth - 1] = 1 + rng.next_below(40);
        if (!dist.feasible())
            continue;
        ++produced;
        const Graph g = gen_shell_distribution(dist, rng.next());
        const CoreDecomposition d = core_decomposition(g);
        REQUIRE(d.isolated_count == 0);
        REQUIRE(shell_distribution(d).counts == dist.counts);
    }
}

TEST_CASE("generator tops vertices up to exactly the shell degree", "[generators]")
{
    // every vertex of the deepest shell ends with degree >= D, and the graph
    // stays simple (no duplicate edges ever inserted)
    const ShellDistribution dist{{5, 0, 7, 6}};
    const Graph g = gen_shell_distribution(dist, 77);
    REQUIRE(g.num_vertices() == 18);
    const CoreDecomposition d = core_decomposition(g);
    REQUIRE(shell_distribution(d).counts == dist.counts);
    for (vertex_t v = 0; v < g.num_vertices(); ++v)
        REQUIRE(g.degree(v) >= d.core[v]);
}

TEST_CASE("analytic khat_1 pmf matches an independently computed oracle", "[generators]")
{
    // reference values computed with 30-digit arithmetic from the same
    // size-biased Poisson trichotomy
    const Khat1Pmf pmf = analytic_khat1_pmf(3.0, 10, 60, 1e-9);
    const double expected[] = {0.049787068367863943, 0.1728082794593883,
                               0.3464459553048482, 0.33316471726237796,
                               0.09315974233262025, 0.0046091496076314097,
                               2.5077458154688715e-5};
    for (int k = 0; k <= 6; ++k)
        REQUIRE_THAT(pmf.probabilities[k],
                     Catch::Matchers::WithinRel(expected[k], 1e-12));
    CHECK(pmf.probabilities[0] == Catch::Approx(std::exp(-3.0)).epsilon(1e-13));
}

TEST_CASE("analytic pmf normalizes and reports truncation", "[generators]")
{
    const Khat1Pmf pmf = analytic_khat1_pmf(3.0, 10, 60, 1e-9);
    double sum = 0;
    for (double p : pmf.probabilities)
        sum += p;
    CHECK(1.0 - sum <= 1e-9);
    CHECK_FALSE(pmf.tail_exceeds_tolerance);
    CHECK(pmf.tail_mass >= 0.0);

    const Khat1Pmf truncated = analytic_khat1_pmf(3.0, 1, 60, 1e-9);
    CHECK(truncated.tail_exceeds_tolerance);
    CHECK(truncated.tail_mass > 0.5);

    CHECK_THROWS_AS(analytic_khat1_pmf(0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(analytic_khat1_pmf(3.0, 10, 5), std::invalid_argument);
    CHECK(khat1_default_dmax(3.0, 10) == static_cast<unsigned>(std::ceil(3.0 + 12 * std::sqrt(3.0))) + 10);
}
