#include <doctest.h>

#include <cmath>

#include "nhols/datasets.hpp"
#include "nhols/kernels.hpp"
#include "nhols/mixing.hpp"
#include "nhols/rng.hpp"
#include "nhols/sparse_graph.hpp"

using namespace nhols;

namespace {

// Relative infinity-norm difference.
double rel_inf(const std::vector<double>& a, const std::vector<double>& b) {
    double diff = 0.0, scale = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(a[i]));
    }
    return scale > 0 ? diff / scale : diff;
}

}  // namespace

TEST_CASE("scalar and avx2 backends agree") {
    const kernels::Table& scalar = kernels::scalar_table();
    const kernels::Table* simd = kernels::avx2_table();
    if (!simd) {
        MESSAGE("avx2 unavailable; scalar-only build");
        return;
    }

    Rng rng(41);
    for (const int64_t n : {5LL, 23LL, 64LL, 301LL}) {
        const auto inst = make_random_instance(n, 3 * n, rng.next());
        const PairWeightMatrix b = pair_weights(inst.tensor);
        std::vector<double> u(static_cast<size_t>(n));
        for (auto& v : u) v = rng.log_uniform(0.05, 20.0);

        SUBCASE("spmv") {}
        {
            std::vector<double> y0(u.size()), y1(u.size());
            scalar.spmv(inst.graph.row_offsets.data(), inst.graph.col_indices.data(),
                        inst.graph.weights.data(), u.data(), y0.data(), n);
            simd->spmv(inst.graph.row_offsets.data(), inst.graph.col_indices.data(),
                       inst.graph.weights.data(), u.data(), y1.data(), n);
            CHECK(rel_inf(y0, y1) <= 1e-13);
        }
        for (int kind = 0; kind < kNamedKindCount; ++kind) {
            CAPTURE(kind);
            std::vector<double> y0(u.size(), 0.0), y1(u.size(), 0.0);
            scalar.hyper[kind](inst.tensor.ti.data(), inst.tensor.tj.data(),
                               inst.tensor.tk.data(), inst.tensor.tau2.data(),
                               inst.tensor.num_triples(), u.data(), y0.data());
            simd->hyper[kind](inst.tensor.ti.data(), inst.tensor.tj.data(),
                              inst.tensor.tk.data(), inst.tensor.tau2.data(),
                              inst.tensor.num_triples(), u.data(), y1.data());
            CHECK(rel_inf(y0, y1) <= 1e-13);

            const double s0 = scalar.pair_sum[kind](b.row_offsets.data(),
                                                    b.col_indices.data(),
                                                    b.values.data(), u.data(), n);
            const double s1 = simd->pair_sum[kind](b.row_offsets.data(),
                                                   b.col_indices.data(),
                                                   b.values.data(), u.data(), n);
            CHECK(std::abs(s0 - s1) <= 1e-12 * std::abs(s0));
        }
    }
}

TEST_CASE("backend selection") {
    const auto initial = kernels::active_backend();
    kernels::set_backend(kernels::Backend::scalar);
    CHECK(kernels::active_backend() == kernels::Backend::scalar);
    if (kernels::avx2_table()) {
        kernels::set_backend(kernels::Backend::avx2);
        CHECK(kernels::active_backend() == kernels::Backend::avx2);
    }
    kernels::set_backend(initial);
}

TEST_CASE("same backend is bit-stable across repeated runs") {
    Rng rng(99);
    const auto inst = make_random_instance(40, 120, rng.next());
    std::vector<double> u(40);
    for (auto& v : u) v = rng.log_uniform(0.1, 10.0);
    const kernels::Table& t = kernels::active();
    std::vector<double> y0(u.size(), 0.0), y1(u.size(), 0.0);
    t.hyper[2](inst.tensor.ti.data(), inst.tensor.tj.data(), inst.tensor.tk.data(),
               inst.tensor.tau2.data(), inst.tensor.num_triples(), u.data(), y0.data());
    t.hyper[2](inst.tensor.ti.data(), inst.tensor.tj.data(), inst.tensor.tk.data(),
               inst.tensor.tau2.data(), inst.tensor.num_triples(), u.data(), y1.data());
    CHECK(y0 == y1);  // bitwise
}
