#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nhols/csr.hpp"

namespace nhols {

struct EdgeRecord {
    int64_t u = 0, v = 0;
    double w = 1.0;
};

struct GraphOptions {
    // When set, nodes with zero degree get a unit self-loop instead of
    // triggering IsolatedNode.
    bool self_loop_fallback = false;
};

// Symmetric weighted adjacency in CSR form. Immutable after construction and
// safe to share across threads.
struct SparseGraph {
    int64_t n = 0;
    std::vector<int64_t> row_offsets;   // n+1
    std::vector<int32_t> col_indices;   // nnz, sorted within each row
    std::vector<double> weights;        // A values
    std::vector<double> norm_weights;   // S = D^{-1/2} A D^{-1/2} values
    std::vector<double> degrees;        // d_i = row sums of A
    std::vector<double> inv_sqrt_degrees;

    int64_t nnz() const { return static_cast<int64_t>(col_indices.size()); }
    std::span<const int32_t> neighbors(int64_t i) const {
        return {col_indices.data() + row_offsets[i],
                static_cast<size_t>(row_offsets[i + 1] - row_offsets[i])};
    }
    std::span<const double> neighbor_weights(int64_t i) const {
        return {weights.data() + row_offsets[i],
                static_cast<size_t>(row_offsets[i + 1] - row_offsets[i])};
    }
    // Weight of edge {i,j}, 0 if absent. Binary search over the sorted row.
    double edge_weight(int64_t i, int64_t j) const;
};

// Symmetrizes, dedups orientation pairs, sums repeated same-orientation
// records, validates weights/ids/coverage.
SparseGraph build_graph(std::span<const EdgeRecord> edges, int64_t n,
                        const GraphOptions& opt = {});

struct TripleRecord {
    int64_t a = 0, b = 0, c = 0;
    double w = 1.0;
};

// Deduplicated unordered triples representing the fully symmetric 3-tensor:
// the tensor holds tau(t) on all 6 permutations of each stored triple, so
// hyper-degrees satisfy delta_i = 2 * sum over triples containing i of tau.
struct TriangleTensor {
    int64_t n = 0;
    std::vector<int32_t> ti, tj, tk;  // canonical i < j < k
    std::vector<double> tau;
    std::vector<double> tau2;  // cached 2*tau, the per-member scatter weight
    std::vector<double> hyper_degrees;
    std::vector<double> inv_sqrt_hyper_degrees;  // 1.0 where delta == 0

    // Incidence index: per node, the (triple id, role) pairs, role in {0,1,2}.
    std::vector<int64_t> inc_offsets;
    std::vector<int32_t> inc_triple;
    std::vector<uint8_t> inc_role;

    int64_t num_triples() const { return static_cast<int64_t>(tau.size()); }
    bool empty() const { return tau.empty(); }
};

TriangleTensor build_triangle_tensor(std::span<const TripleRecord> triples,
                                     int64_t n);

// Pair co-occurrence weights B_ij = 2 * sum over triples containing {i,j} of
// tau(t), stored symmetrically with zero diagonal. These are exactly the
// clique-expansion weights 2*(K W K^T)_ij off the diagonal; summing
// sigma(u_i,u_j)^2 over stored entries counts each unordered pair twice.
using PairWeightMatrix = CsrMatrix;

PairWeightMatrix pair_weights(const TriangleTensor& t);

struct CoverageReport {
    std::vector<int64_t> zero_degree;        // d_i == 0
    std::vector<int64_t> zero_hyper_degree;  // delta_i == 0
    bool fallback = false;
    bool clean() const { return zero_degree.empty() && zero_hyper_degree.empty(); }
};

// Lists nodes the spreading assumptions exclude. Without fallback, any zero
// degree raises IsolatedNode; with fallback the report marks nodes whose
// tensor contribution will be zero.
CoverageReport validate_coverage(const SparseGraph& g, const TriangleTensor& t,
                                 bool fallback);

}  // namespace nhols
