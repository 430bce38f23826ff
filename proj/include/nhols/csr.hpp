#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nhols {

// Plain CSR storage for a square sparse matrix. int32 column indices keep the
// rows gather-friendly for the SIMD kernels.
struct CsrMatrix {
    int64_t n = 0;
    std::vector<int64_t> row_offsets;  // size n+1
    std::vector<int32_t> col_indices;  // size nnz
    std::vector<double> values;        // size nnz

    int64_t nnz() const { return static_cast<int64_t>(col_indices.size()); }

    std::span<const int32_t> row_cols(int64_t i) const {
        return {col_indices.data() + row_offsets[i],
                static_cast<size_t>(row_offsets[i + 1] - row_offsets[i])};
    }
    std::span<const double> row_vals(int64_t i) const {
        return {values.data() + row_offsets[i],
                static_cast<size_t>(row_offsets[i + 1] - row_offsets[i])};
    }
};

// Builds CSR from (row, col, value) triplets; duplicates are summed and
// columns within a row end up sorted.
CsrMatrix csr_from_coo(int64_t n, std::vector<int64_t> rows,
                       std::vector<int32_t> cols, std::vector<double> vals);

// out = M x (scalar reference; the kernels module provides the fast path).
void csr_apply(const CsrMatrix& m, std::span<const double> x, std::span<double> out);

}  // namespace nhols
