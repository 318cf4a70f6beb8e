// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "qsx/graph.hpp"
#include "oracles.hpp"

using namespace qsx;

namespace {

CooccurrenceCounts plant_counts(
    const std::vector<std::tuple<std::string, std::string, std::int64_t>>& cooc,
    const std::map<std::string, std::int64_t>& q_sessions,
    const std::map<std::string, std::int64_t>& n_sessions) {
    CooccurrenceCounts counts;
    for (const auto& [q, c] : q_sessions) counts.q_sessions[q] = c;
    for (const auto& [n, c] : n_sessions) counts.n_sessions[n] = c;
    for (const auto& [q, n, c] : cooc) counts.qn_cooc[q][n] = c;
    return counts;
}

}  // namespace

TEST_CASE("association_strength: direct evaluation", "[graph]") {
    // ln(100/2000) + ln(10/20) = -ln 40
    CHECK_THAT(association_strength(10, 20, 100),
               Catch::Matchers::WithinAbs(-3.6888794541139363, 1e-12));
    // both log arguments are 1 whenever c = |q| = |n|
    for (const std::int64_t k : {1, 2, 7, 1000}) {
        CHECK_THAT(association_strength(k, k, k), Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
    CHECK_THROWS_AS(association_strength(0, 5, 5), std::invalid_argument);
}

TEST_CASE("association_strength: typicality scenario beats flat PMI", "[graph]") {
    // same query, |n1|=100 with c1=10 vs |n2|=500 with c2=50
    const std::int64_t q = 60;
    const double w1 = association_strength(10, q, 100);
    const double w2 = association_strength(50, q, 500);
    CHECK_THAT(w2 - w1, Catch::Matchers::WithinAbs(2.0 * std::log(5.0), 1e-12));

    // PMI cannot tell the two apart, for any corpus size
    for (const std::int64_t total : {1000, 100000}) {
        CHECK_THAT(oracle::pmi(10, q, 100, total) - oracle::pmi(50, q, 500, total),
                   Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
    CHECK(w2 > w1);
}

TEST_CASE("association_strength: corpus duplication invariance", "[graph]") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<std::int64_t> count(1, 5000);
    std::uniform_int_distribution<std::int64_t> factor(2, 50);
    for (int i = 0; i < 200; ++i) {
        const std::int64_t nq = count(rng);
        const std::int64_t nn = count(rng);
        const std::int64_t c = std::uniform_int_distribution<std::int64_t>(
            1, std::min(nq, nn))(rng);
        const std::int64_t k = factor(rng);
        CHECK_THAT(association_strength(c * k, nq * k, nn * k),
                   Catch::Matchers::WithinAbs(association_strength(c, nq, nn), 1e-9));
    }
}

TEST_CASE("association_strength: monotonicity", "[graph]") {
    // strictly increasing in c at fixed |q|, |n|
    for (std::int64_t c = 1; c < 20; ++c) {
        CHECK(association_strength(c + 1, 40, 60) > association_strength(c, 40, 60));
    }
    // strictly decreasing in |n| at fixed c, |q|
    for (std::int64_t nn = 10; nn < 200; nn += 13) {
        CHECK(association_strength(10, 40, nn + 1) < association_strength(10, 40, nn));
    }
    // scaling (|n|, c) by k raises w by exactly 2 ln k
    for (const std::int64_t k : {2, 3, 10}) {
        const double base = association_strength(5, 100, 50);
        CHECK_THAT(association_strength(5 * k, 100, 50 * k) - base,
                   Catch::Matchers::WithinAbs(2.0 * std::log(static_cast<double>(k)), 1e-12));
    }
}

TEST_CASE("build_graph: thresholding and edge weights", "[graph]") {
    // c = |q| = |n| = 5 gives w = 0
    const auto counts = plant_counts({{"q", "n", 5}}, {{"q", 5}}, {{"n", 5}});

    SECTION("w above t_w: edge weight is the shift") {
        const auto g = BipartiteGraph::build(counts, -18.0, 1);
        REQUIRE(g.edge_count() == 1);
        CHECK_THAT(*g.edge_weight("q", "n"), Catch::Matchers::WithinAbs(18.0, 1e-12));
    }
    SECTION("w equal to t_w: edge absent, strict inequality") {
        const auto g = BipartiteGraph::build(counts, 0.0, 1);
        CHECK(g.edge_count() == 0);
        CHECK_FALSE(g.has_query("q"));
    }
}

TEST_CASE("build_graph: frequency floor applies to both endpoints", "[graph]") {
    const auto counts = plant_counts({{"q1", "n1", 3}, {"q2", "n1", 4}},
                                     {{"q1", 9}, {"q2", 10}}, {{"n1", 10}});
    const auto g = BipartiteGraph::build(counts, -18.0, 10);
    // q1 is one session short of the floor; q2 qualifies
    CHECK_FALSE(g.has_query("q1"));
    CHECK(g.has_query("q2"));
    REQUIRE(g.edge_count() == 1);

    const auto g_low_n = BipartiteGraph::build(
        plant_counts({{"q", "n", 5}}, {{"q", 100}}, {{"n", 99}}), -18.0, 100);
    CHECK(g_low_n.edge_count() == 0);
}

TEST_CASE("bipartite graph: adjacency maps are exact inverses", "[graph]") {
    std::mt19937 rng(11);
    std::vector<std::tuple<Query, Ngram, double>> edges;
    std::uniform_real_distribution<double> weight(0.5, 12.0);
    for (int q = 0; q < 12; ++q) {
        for (int n = 0; n < 9; ++n) {
            if ((q * 7 + n) % 3 == 0)
                edges.emplace_back("q" + std::to_string(q), "n" + std::to_string(n), weight(rng));
        }
    }
    const auto g = BipartiteGraph::from_edges(edges, -18.0, 1);
    std::size_t forward = 0;
    for (const auto& [q, n, w] : edges) {
        ++forward;
        REQUIRE(g.edge_weight(q, n) == w);
    }
    CHECK(g.edge_count() == forward);

    for (const auto& [q, n, w] : edges) {
        const auto* nbrs = g.ngram_neighbors(n);
        REQUIRE(nbrs != nullptr);
        bool found = false;
        for (const auto& e : *nbrs) found |= (e.item == q && e.weight == w);
        CHECK(found);
    }
}

TEST_CASE("bipartite graph: from_edges validation", "[graph]") {
    CHECK_THROWS_AS(BipartiteGraph::from_edges({{"q", "n", 0.0}}, -18.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(BipartiteGraph::from_edges({{"q", "n", -1.0}}, -18.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(BipartiteGraph::from_edges({{"q", "n", 1.0}, {"q", "n", 2.0}}, -18.0, 1),
                    std::invalid_argument);
}

TEST_CASE("bipartite graph: save/load round trip is byte-stable", "[graph]") {
    const auto counts = plant_counts(
        {{"alpha", "x", 4}, {"alpha", "y z", 2}, {"beta", "x", 3}},
        {{"alpha", 6}, {"beta", 5}}, {{"x", 7}, {"y z", 4}});
    const auto g = BipartiteGraph::build(counts, -18.0, 2);
    REQUIRE(g.edge_count() == 3);

    std::stringstream first;
    g.save(first);
    const auto loaded = BipartiteGraph::load(first);
    CHECK(loaded.threshold() == g.threshold());
    CHECK(loaded.min_sessions() == g.min_sessions());
    CHECK(loaded.edge_count() == g.edge_count());

    std::stringstream second;
    loaded.save(second);
    std::stringstream third;
    g.save(third);
    CHECK(second.str() == third.str());
    CHECK(second.str().rfind("#graph\tt_w=-18\tmin_sessions=2\n", 0) == 0);
}

TEST_CASE("bipartite graph: load rejects malformed files", "[graph]") {
    std::stringstream empty;
    CHECK_THROWS_AS(BipartiteGraph::load(empty), std::runtime_error);
    std::stringstream bad_header("#nope\tt_w=1\tmin_sessions=1\n");
    CHECK_THROWS_AS(BipartiteGraph::load(bad_header), std::runtime_error);
    std::stringstream bad_row("#graph\tt_w=-18\tmin_sessions=1\nq\tn\n");
    CHECK_THROWS_AS(BipartiteGraph::load(bad_row), std::runtime_error);
}
