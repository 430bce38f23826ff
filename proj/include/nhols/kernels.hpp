#pragma once

#include <cstdint>
#include <string>

namespace nhols::kernels {

// The three inner loops that dominate a spreading step, each available as a
// scalar reference implementation and (on x86-64 with AVX2+FMA) a vectorized
// variant selected at runtime. The two backends are equivalence-tested; the
// scalar path is the semantic reference.

// out[i] = sum_j vals[k] * x[cols[k]] over row i.
using SpmvFn = void (*)(const int64_t* offsets, const int32_t* cols,
                        const double* vals, const double* x, double* out,
                        int64_t n);

// Triangle-tensor contraction accumulate step. For each triple (i, j, k) with
// cached weight w = 2*tau: out[i] += w*sigma(u[j], u[k]),
// out[j] += w*sigma(u[i], u[k]), out[k] += w*sigma(u[i], u[j]).
// Scatter order is fixed (triple-major, member-minor) in both backends so a
// given backend is bit-reproducible run to run.
using HyperFn = void (*)(const int32_t* ti, const int32_t* tj,
                         const int32_t* tk, const double* tau2,
                         int64_t num_triples, const double* u, double* out);

// Reduction over stored pair weights: sum_{rows i, stored (i,j)}
// B_ij * sigma(u[i], u[j])^2.
using PairSumFn = double (*)(const int64_t* offsets, const int32_t* cols,
                             const double* vals, const double* u, int64_t n);

struct Table {
    SpmvFn spmv = nullptr;
    HyperFn hyper[5] = {};     // indexed by the five named MixingKind values
    PairSumFn pair_sum[5] = {};
    const char* name = "";
};

enum class Backend { scalar, avx2 };

const Table& scalar_table();
// nullptr when the build or the running CPU lacks AVX2/FMA.
const Table* avx2_table();

// Active table, chosen once at startup: AVX2 when supported, else scalar.
// NHOLS_KERNEL=scalar|avx2 in the environment overrides the choice.
const Table& active();
Backend active_backend();
// Force a backend (tests, CLI flag). Throws if unavailable.
void set_backend(Backend b);
std::string backend_name(Backend b);

}  // namespace nhols::kernels
