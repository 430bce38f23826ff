#include "nhols/csr.hpp"

#include <algorithm>
#include <numeric>

#include "nhols/error.hpp"
#include "nhols/kernels.hpp"

namespace nhols {

CsrMatrix csr_from_coo(int64_t n, std::vector<int64_t> rows,
                       std::vector<int32_t> cols, std::vector<double> vals) {
    if (rows.size() != cols.size() || rows.size() != vals.size())
        throw ShapeError("coo arrays disagree in length");
    const size_t m = rows.size();
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return rows[a] != rows[b] ? rows[a] < rows[b] : cols[a] < cols[b];
    });

    CsrMatrix out;
    out.n = n;
    out.row_offsets.assign(static_cast<size_t>(n) + 1, 0);
    out.col_indices.reserve(m);
    out.values.reserve(m);
    for (size_t p = 0; p < m;) {
        const int64_t r = rows[order[p]];
        const int32_t c = cols[order[p]];
        double v = vals[order[p]];
        ++p;
        while (p < m && rows[order[p]] == r && cols[order[p]] == c) {
            v += vals[order[p]];
            ++p;
        }
        out.col_indices.push_back(c);
        out.values.push_back(v);
        ++out.row_offsets[static_cast<size_t>(r) + 1];
    }
    for (int64_t i = 0; i < n; ++i)
        out.row_offsets[static_cast<size_t>(i) + 1] += out.row_offsets[static_cast<size_t>(i)];
    return out;
}

void csr_apply(const CsrMatrix& m, std::span<const double> x, std::span<double> out) {
    if (static_cast<int64_t>(x.size()) != m.n || static_cast<int64_t>(out.size()) != m.n)
        throw ShapeError("csr_apply: vector length mismatch");
    kernels::active().spmv(m.row_offsets.data(), m.col_indices.data(),
                           m.values.data(), x.data(), out.data(), m.n);
}

}  // namespace nhols
