#include "nhols/kernels.hpp"

#if defined(NHOLS_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

// AVX2+FMA variants of the inner loops. This translation unit is compiled
// with -mavx2 -mfma and is only entered after a runtime cpuid check.

namespace nhols::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void spmv_avx2(const int64_t* offsets, const int32_t* cols, const double* vals,
               const double* x, double* out, int64_t n) {
    for (int64_t i = 0; i < n; ++i) {
        const int64_t begin = offsets[i], end = offsets[i + 1];
        int64_t k = begin;
        __m256d acc = _mm256_setzero_pd();
        for (; k + 4 <= end; k += 4) {
            const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
            const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
            const __m256d wv = _mm256_loadu_pd(vals + k);
            acc = _mm256_fmadd_pd(wv, xv, acc);
        }
        double s = hsum(acc);
        for (; k < end; ++k) s += vals[k] * x[cols[k]];
        out[i] = s;
    }
}

// Vector sigma for the five named kinds (arguments strictly positive except
// where the scalar reference also accepts zero).
struct SigArith {
    static __m256d v(__m256d a, __m256d b) { return _mm256_add_pd(a, b); }
    static double s(double a, double b) { return a + b; }
};
struct SigHarm {
    static __m256d v(__m256d a, __m256d b) {
        const __m256d four = _mm256_set1_pd(4.0);
        return _mm256_div_pd(_mm256_mul_pd(four, _mm256_mul_pd(a, b)),
                             _mm256_add_pd(a, b));
    }
    static double s(double a, double b) { return 4.0 * a * b / (a + b); }
};
struct SigL2 {
    static __m256d v(__m256d a, __m256d b) {
        const __m256d two = _mm256_set1_pd(2.0);
        const __m256d q = _mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b));
        return _mm256_sqrt_pd(_mm256_mul_pd(two, q));
    }
    static double s(double a, double b) { return std::sqrt(2.0 * (a * a + b * b)); }
};
struct SigGeom {
    static __m256d v(__m256d a, __m256d b) {
        const __m256d two = _mm256_set1_pd(2.0);
        return _mm256_mul_pd(two, _mm256_sqrt_pd(_mm256_mul_pd(a, b)));
    }
    static double s(double a, double b) { return 2.0 * std::sqrt(a * b); }
};
struct SigMax {
    static __m256d v(__m256d a, __m256d b) {
        return _mm256_mul_pd(_mm256_set1_pd(2.0), _mm256_max_pd(a, b));
    }
    static double s(double a, double b) { return 2.0 * std::max(a, b); }
};

template <typename Sig>
void hyper_avx2(const int32_t* ti, const int32_t* tj, const int32_t* tk,
                const double* tau2, int64_t m, const double* u, double* out) {
    int64_t t = 0;
    alignas(32) double si[4], sj[4], sk[4];
    for (; t + 4 <= m; t += 4) {
        const __m128i ii = _mm_loadu_si128(reinterpret_cast<const __m128i*>(ti + t));
        const __m128i jj = _mm_loadu_si128(reinterpret_cast<const __m128i*>(tj + t));
        const __m128i kk = _mm_loadu_si128(reinterpret_cast<const __m128i*>(tk + t));
        const __m256d ui = _mm256_i32gather_pd(u, ii, 8);
        const __m256d uj = _mm256_i32gather_pd(u, jj, 8);
        const __m256d uk = _mm256_i32gather_pd(u, kk, 8);
        const __m256d w = _mm256_loadu_pd(tau2 + t);
        _mm256_store_pd(si, _mm256_mul_pd(w, Sig::v(uj, uk)));
        _mm256_store_pd(sj, _mm256_mul_pd(w, Sig::v(ui, uk)));
        _mm256_store_pd(sk, _mm256_mul_pd(w, Sig::v(ui, uj)));
        // Scatter stays scalar (AVX2 has no scatter; conflicts are possible
        // anyway). Lane order matches the scalar reference.
        for (int l = 0; l < 4; ++l) {
            out[ti[t + l]] += si[l];
            out[tj[t + l]] += sj[l];
            out[tk[t + l]] += sk[l];
        }
    }
    for (; t < m; ++t) {
        const int32_t i = ti[t], j = tj[t], k = tk[t];
        const double w = tau2[t];
        out[i] += w * Sig::s(u[j], u[k]);
        out[j] += w * Sig::s(u[i], u[k]);
        out[k] += w * Sig::s(u[i], u[j]);
    }
}

template <typename Sig>
double pair_sum_avx2(const int64_t* offsets, const int32_t* cols,
                     const double* vals, const double* u, int64_t n) {
    __m256d acc = _mm256_setzero_pd();
    double tail = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        const int64_t begin = offsets[i], end = offsets[i + 1];
        const __m256d ui = _mm256_set1_pd(u[i]);
        int64_t k = begin;
        for (; k + 4 <= end; k += 4) {
            const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
            const __m256d uj = _mm256_i32gather_pd(u, idx, 8);
            const __m256d w = _mm256_loadu_pd(vals + k);
            const __m256d s = Sig::v(ui, uj);
            acc = _mm256_fmadd_pd(_mm256_mul_pd(w, s), s, acc);
        }
        const double uis = u[i];
        for (; k < end; ++k) {
            const double s = Sig::s(uis, u[cols[k]]);
            tail += vals[k] * s * s;
        }
    }
    return hsum(acc) + tail;
}

bool cpu_supports_avx2_fma() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace

const Table* avx2_table() {
    static const bool ok = cpu_supports_avx2_fma();
    if (!ok) return nullptr;
    static const Table t = [] {
        Table tb;
        tb.spmv = spmv_avx2;
        tb.hyper[0] = hyper_avx2<SigArith>;
        tb.hyper[1] = hyper_avx2<SigHarm>;
        tb.hyper[2] = hyper_avx2<SigL2>;
        tb.hyper[3] = hyper_avx2<SigGeom>;
        tb.hyper[4] = hyper_avx2<SigMax>;
        tb.pair_sum[0] = pair_sum_avx2<SigArith>;
        tb.pair_sum[1] = pair_sum_avx2<SigHarm>;
        tb.pair_sum[2] = pair_sum_avx2<SigL2>;
        tb.pair_sum[3] = pair_sum_avx2<SigGeom>;
        tb.pair_sum[4] = pair_sum_avx2<SigMax>;
        tb.name = "avx2";
        return tb;
    }();
    return &t;
}

}  // namespace nhols::kernels

#else

namespace nhols::kernels {
const Table* avx2_table() { return nullptr; }
}  // namespace nhols::kernels

#endif  // NHOLS_HAVE_AVX2
