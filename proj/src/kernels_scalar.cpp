#include <algorithm>
#include <cmath>

#include "nhols/kernels.hpp"

// Scalar reference kernels. These define the semantics the SIMD variants are
// tested against; keep them simple and obviously correct.

namespace nhols::kernels {
namespace {

void spmv_scalar(const int64_t* offsets, const int32_t* cols, const double* vals,
                 const double* x, double* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int64_t k = offsets[i]; k < offsets[i + 1]; ++k)
            acc += vals[k] * x[cols[k]];
        out[i] = acc;
    }
}

inline double sig_arith(double a, double b) { return a + b; }
inline double sig_harm(double a, double b) { return 4.0 * a * b / (a + b); }
inline double sig_l2(double a, double b) { return std::sqrt(2.0 * (a * a + b * b)); }
inline double sig_geom(double a, double b) { return 2.0 * std::sqrt(a * b); }
inline double sig_max(double a, double b) { return 2.0 * std::max(a, b); }

template <double Sig(double, double)>
void hyper_scalar(const int32_t* ti, const int32_t* tj, const int32_t* tk,
                  const double* tau2, int64_t m, const double* u, double* out) {
    for (int64_t t = 0; t < m; ++t) {
        const int32_t i = ti[t], j = tj[t], k = tk[t];
        const double w = tau2[t];
        const double ui = u[i], uj = u[j], uk = u[k];
        out[i] += w * Sig(uj, uk);
        out[j] += w * Sig(ui, uk);
        out[k] += w * Sig(ui, uj);
    }
}

template <double Sig(double, double)>
double pair_sum_scalar(const int64_t* offsets, const int32_t* cols,
                       const double* vals, const double* u, int64_t n) {
    double acc = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        const double ui = u[i];
        double row = 0.0;
        for (int64_t k = offsets[i]; k < offsets[i + 1]; ++k) {
            const double s = Sig(ui, u[cols[k]]);
            row += vals[k] * s * s;
        }
        acc += row;
    }
    return acc;
}

}  // namespace

const Table& scalar_table() {
    static const Table t = [] {
        Table tb;
        tb.spmv = spmv_scalar;
        tb.hyper[0] = hyper_scalar<sig_arith>;
        tb.hyper[1] = hyper_scalar<sig_harm>;
        tb.hyper[2] = hyper_scalar<sig_l2>;
        tb.hyper[3] = hyper_scalar<sig_geom>;
        tb.hyper[4] = hyper_scalar<sig_max>;
        tb.pair_sum[0] = pair_sum_scalar<sig_arith>;
        tb.pair_sum[1] = pair_sum_scalar<sig_harm>;
        tb.pair_sum[2] = pair_sum_scalar<sig_l2>;
        tb.pair_sum[3] = pair_sum_scalar<sig_geom>;
        tb.pair_sum[4] = pair_sum_scalar<sig_max>;
        tb.name = "scalar";
        return tb;
    }();
    return t;
}

}  // namespace nhols::kernels
