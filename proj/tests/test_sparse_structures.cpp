#include <doctest.h>

#include <algorithm>

#include "nhols/datasets.hpp"
#include "nhols/error.hpp"
#include "nhols/rng.hpp"
#include "nhols/sparse_graph.hpp"
#include "oracles.hpp"

using namespace nhols;

TEST_CASE("single edge symmetrizes") {
    const EdgeRecord edges[] = {{0, 1, 1.0}};
    const SparseGraph g = build_graph(edges, 2);
    CHECK(g.nnz() == 2);
    CHECK(g.degrees[0] == doctest::Approx(1.0));
    CHECK(g.degrees[1] == doctest::Approx(1.0));
    CHECK(g.edge_weight(0, 1) == doctest::Approx(1.0));
    CHECK(g.edge_weight(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("duplicate orientations collapse, duplicate records sum") {
    const EdgeRecord both[] = {{0, 1, 2.0}, {1, 0, 2.0}};
    const SparseGraph g1 = build_graph(both, 2);
    CHECK(g1.degrees[0] == doctest::Approx(2.0));
    CHECK(g1.degrees[1] == doctest::Approx(2.0));

    const EdgeRecord repeat[] = {{0, 1, 1.5}, {0, 1, 0.5}};
    const SparseGraph g2 = build_graph(repeat, 2);
    CHECK(g2.edge_weight(0, 1) == doctest::Approx(2.0));

    const EdgeRecord bad[] = {{0, 1, 1.0}, {1, 0, 2.0}};
    CHECK_THROWS_AS(build_graph(bad, 2), InvalidWeight);
}

TEST_CASE("dedup against permuted-input oracle") {
    // The graph from a record list must not depend on record order.
    Rng rng(11);
    std::vector<EdgeRecord> edges;
    for (int e = 0; e < 40; ++e) {
        const auto u = static_cast<int64_t>(rng.uniform_int(12));
        const auto v = static_cast<int64_t>(rng.uniform_int(12));
        if (u == v) continue;
        edges.push_back({u, v, 1.0 + static_cast<double>(u + v)});
    }
    // force symmetric duplicates to carry the same weight
    for (auto& e : edges)
        if (e.u > e.v) std::swap(e.u, e.v);
    GraphOptions opt;
    opt.self_loop_fallback = true;
    const SparseGraph base = build_graph(edges, 12, opt);
    for (int trial = 0; trial < 5; ++trial) {
        rng.shuffle(std::span<EdgeRecord>(edges));
        const SparseGraph g = build_graph(edges, 12, opt);
        REQUIRE(g.col_indices == base.col_indices);
        for (size_t q = 0; q < g.weights.size(); ++q)
            CHECK(g.weights[q] == doctest::Approx(base.weights[q]));
    }
}

TEST_CASE("graph validation errors") {
    const EdgeRecord neg[] = {{0, 1, -1.0}};
    CHECK_THROWS_AS(build_graph(neg, 2), InvalidWeight);
    const EdgeRecord zero[] = {{0, 1, 0.0}};
    CHECK_THROWS_AS(build_graph(zero, 2), InvalidWeight);
    const EdgeRecord oob[] = {{0, 5, 1.0}};
    CHECK_THROWS_AS(build_graph(oob, 2), InvalidNode);
    const EdgeRecord loop[] = {{1, 1, 1.0}};
    CHECK_THROWS_AS(build_graph(loop, 2), InvalidNode);

    const EdgeRecord iso[] = {{0, 1, 1.0}};
    CHECK_THROWS_AS(build_graph(iso, 3), IsolatedNode);
    GraphOptions opt;
    opt.self_loop_fallback = true;
    const SparseGraph g = build_graph(iso, 3, opt);
    CHECK(g.degrees[2] == doctest::Approx(1.0));  // injected self-loop
    CHECK(g.edge_weight(2, 2) == doctest::Approx(1.0));
}

TEST_CASE("degrees equal row sums") {
    const auto inst = make_random_instance(30, 60, 5);
    for (int64_t i = 0; i < inst.graph.n; ++i) {
        double s = 0.0;
        for (const double w : inst.graph.neighbor_weights(i)) s += w;
        CHECK(std::abs(inst.graph.degrees[static_cast<size_t>(i)] - s) <=
              1e-12 * s);
    }
}

TEST_CASE("triangle tensor canonicalization and hyper-degrees") {
    SUBCASE("single triangle") {
        const TripleRecord t[] = {{0, 1, 2, 1.0}};
        const TriangleTensor tt = build_triangle_tensor(t, 3);
        // oracle: expand all 6 permutations and sum rows
        const auto dense = oracle::expand_tensor(tt);
        const auto delta = oracle::hyper_degrees(dense);
        for (int i = 0; i < 3; ++i) {
            CHECK(delta[static_cast<size_t>(i)] == doctest::Approx(2.0));
            CHECK(tt.hyper_degrees[static_cast<size_t>(i)] ==
                  doctest::Approx(delta[static_cast<size_t>(i)]));
        }
    }
    SUBCASE("reversed input canonicalizes") {
        const TripleRecord t[] = {{2, 1, 0, 1.0}};
        const TriangleTensor tt = build_triangle_tensor(t, 3);
        REQUIRE(tt.num_triples() == 1);
        CHECK(tt.ti[0] == 0);
        CHECK(tt.tj[0] == 1);
        CHECK(tt.tk[0] == 2);
        CHECK(tt.tau[0] == doctest::Approx(1.0));
    }
    SUBCASE("two triangles, weighted") {
        const TripleRecord t[] = {{0, 1, 2, 1.0}, {0, 1, 3, 2.0}};
        const TriangleTensor tt = build_triangle_tensor(t, 4);
        CHECK(tt.hyper_degrees[0] == doctest::Approx(6.0));
        CHECK(tt.hyper_degrees[3] == doctest::Approx(4.0));
        const auto delta = oracle::hyper_degrees(oracle::expand_tensor(tt));
        for (int i = 0; i < 4; ++i)
            CHECK(tt.hyper_degrees[static_cast<size_t>(i)] ==
                  doctest::Approx(delta[static_cast<size_t>(i)]));
    }
    SUBCASE("duplicates merge by summing") {
        const TripleRecord t[] = {{0, 1, 2, 1.0}, {2, 0, 1, 0.5}};
        const TriangleTensor tt = build_triangle_tensor(t, 3);
        REQUIRE(tt.num_triples() == 1);
        CHECK(tt.tau[0] == doctest::Approx(1.5));
    }
    SUBCASE("errors") {
        const TripleRecord rep[] = {{0, 0, 2, 1.0}};
        CHECK_THROWS_AS(build_triangle_tensor(rep, 3), DegenerateTriple);
        const TripleRecord neg[] = {{0, 1, 2, -0.5}};
        CHECK_THROWS_AS(build_triangle_tensor(neg, 3), InvalidWeight);
    }
}

TEST_CASE("hyper-degree matches permutation-expansion oracle on random instances") {
    for (const uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto inst = make_random_instance(8, 14, seed, /*weighted=*/false);
        const auto delta = oracle::hyper_degrees(oracle::expand_tensor(inst.tensor));
        for (int64_t i = 0; i < inst.tensor.n; ++i)  // integer tau: exact equality
            CHECK(inst.tensor.hyper_degrees[static_cast<size_t>(i)] ==
                  delta[static_cast<size_t>(i)]);
    }
}

TEST_CASE("canonicalization is idempotent") {
    const auto inst = make_random_instance(12, 24, 9);
    std::vector<TripleRecord> records;
    for (int64_t e = 0; e < inst.tensor.num_triples(); ++e)
        records.push_back({inst.tensor.ti[static_cast<size_t>(e)],
                           inst.tensor.tj[static_cast<size_t>(e)],
                           inst.tensor.tk[static_cast<size_t>(e)],
                           inst.tensor.tau[static_cast<size_t>(e)]});
    const TriangleTensor again = build_triangle_tensor(records, inst.tensor.n);
    CHECK(again.ti == inst.tensor.ti);
    CHECK(again.tj == inst.tensor.tj);
    CHECK(again.tk == inst.tensor.tk);
    for (size_t q = 0; q < again.tau.size(); ++q)
        CHECK(again.tau[q] == doctest::Approx(inst.tensor.tau[q]));
}

TEST_CASE("pair weights") {
    SUBCASE("single triangle") {
        const TripleRecord t[] = {{0, 1, 2, 1.0}};
        const TriangleTensor tt = build_triangle_tensor(t, 3);
        const PairWeightMatrix b = pair_weights(tt);
        CHECK(b.nnz() == 6);
        for (const auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
            const auto row = b.row_cols(i);
            const auto it = std::find(row.begin(), row.end(), j);
            REQUIRE(it != row.end());
            CHECK(b.row_vals(i)[static_cast<size_t>(it - row.begin())] ==
                  doctest::Approx(2.0));
        }
    }
    SUBCASE("empty tensor gives empty matrix") {
        const TriangleTensor tt = build_triangle_tensor({}, 4);
        CHECK(pair_weights(tt).nnz() == 0);
    }
    SUBCASE("shared edge accumulates") {
        const TripleRecord t[] = {{0, 1, 2, 1.0}, {0, 1, 3, 1.0}};
        const TriangleTensor tt = build_triangle_tensor(t, 4);
        const PairWeightMatrix b = pair_weights(tt);
        const auto row = b.row_cols(0);
        const auto it = std::find(row.begin(), row.end(), 1);
        REQUIRE(it != row.end());
        CHECK(b.row_vals(0)[static_cast<size_t>(it - row.begin())] ==
              doctest::Approx(4.0));
    }
}

TEST_CASE("pair weights equal dense-expansion oracle exactly") {
    for (const uint64_t seed : {4ULL, 5ULL}) {
        const auto inst = make_random_instance(8, 12, seed, /*weighted=*/false);
        const PairWeightMatrix b = pair_weights(inst.tensor);
        const auto dense = oracle::pair_weights_dense(oracle::expand_tensor(inst.tensor));
        for (int64_t i = 0; i < b.n; ++i) {
            std::vector<double> got(static_cast<size_t>(b.n), 0.0);
            const auto cols = b.row_cols(i);
            const auto vals = b.row_vals(i);
            for (size_t q = 0; q < cols.size(); ++q)
                got[static_cast<size_t>(cols[q])] = vals[q];
            for (int64_t j = 0; j < b.n; ++j)
                CHECK(got[static_cast<size_t>(j)] ==
                      dense[static_cast<size_t>(i * b.n + j)]);  // integer tau
        }
    }
}

TEST_CASE("total pair weight is 12x total tau") {
    const auto inst = make_random_instance(15, 30, 6);
    const PairWeightMatrix b = pair_weights(inst.tensor);
    double total_b = 0.0;
    for (const double v : b.values) total_b += v;
    double total_tau = 0.0;
    for (const double v : inst.tensor.tau) total_tau += v;
    CHECK(total_b == doctest::Approx(12.0 * total_tau));
}

TEST_CASE("coverage report") {
    SUBCASE("K4 with all triangles is clean") {
        std::vector<EdgeRecord> edges;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) edges.push_back({i, j, 1.0});
        const SparseGraph g = build_graph(edges, 4);
        const TriangleTensor t = enumerate_triangles(g);
        CHECK(t.num_triples() == 4);
        const CoverageReport rep = validate_coverage(g, t, false);
        CHECK(rep.clean());
    }
    SUBCASE("path graph has no triangles at all") {
        const EdgeRecord edges[] = {{0, 1, 1.0}, {1, 2, 1.0}};
        const SparseGraph g = build_graph(edges, 3);
        const TriangleTensor t = enumerate_triangles(g);
        CHECK(t.num_triples() == 0);
        CHECK_THROWS_AS(validate_coverage(g, t, false), IsolatedNode);
        const CoverageReport rep = validate_coverage(g, t, true);
        CHECK(rep.zero_hyper_degree.size() == 3);
        CHECK(rep.zero_degree.empty());
    }
    SUBCASE("star center outside the leaf triangle is flagged") {
        const EdgeRecord edges[] = {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0},
                                    {1, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}};
        // graph = K4; tensor only over the leaves
        const SparseGraph g = build_graph(edges, 4);
        const TripleRecord t[] = {{1, 2, 3, 1.0}};
        const TriangleTensor tt = build_triangle_tensor(t, 4);
        const CoverageReport rep = validate_coverage(g, tt, true);
        REQUIRE(rep.zero_hyper_degree.size() == 1);
        CHECK(rep.zero_hyper_degree[0] == 0);
    }
}
