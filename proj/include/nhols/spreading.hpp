#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nhols/mixing.hpp"
#include "nhols/sparse_graph.hpp"

namespace nhols {

struct SpreadParams {
    double alpha = 0.5;  // tensor term
    double beta = 0.3;   // graph term
    double gamma = 0.2;  // anchor term
    double eps = 0.01;   // label smoothing
    double tol = 1e-5;   // relative 2-norm stopping tolerance
    int max_iters = 40;

    double lambda() const { return beta / gamma; }
    double mu() const { return alpha / gamma; }
    // require_gamma: the normalized iteration needs a positive anchor.
    void validate(bool require_gamma = true) const;
};

// Per-class membership with smoothing cache. Known nodes carry their class in
// known_class; -1 marks unknown.
struct LabelData {
    int64_t n = 0;
    int32_t num_classes = 0;
    double eps = 0.01;
    std::vector<int32_t> known_class;          // length n, -1 = unknown
    std::vector<std::vector<double>> y_eps;    // per class, (1-eps)Y + eps*1
    std::vector<uint8_t> known_mask;           // 1 where known

    int64_t known_count() const;
};

LabelData make_label_data(std::span<const int32_t> known_class, int32_t num_classes,
                          double eps);

struct ClassRun {
    std::vector<double> f;  // final column
    int iterations = 0;
    double final_rel_change = 0.0;
    bool converged = false;
    std::vector<double> rel_change_history;
    std::vector<double> phi_history;  // phi(g) per iteration (NHOLS only)
};

struct SpreadResult {
    int64_t n = 0;
    int32_t num_classes = 0;
    std::vector<ClassRun> per_class;
    std::vector<int32_t> predictions;
};

// Bundles the tensor with its pair-weight matrix and a mixing function.
// Read-only and shareable once built; apply/phi use caller-provided scratch
// via the Workspace overloads when called in hot loops.
class HyperOperator {
public:
    HyperOperator(const TriangleTensor& tensor, MixingSpec mix);

    const TriangleTensor& tensor() const { return *tensor_; }
    const PairWeightMatrix& pair_matrix() const { return pairs_; }
    const MixingSpec& mixing() const { return mix_; }

    // 𝒮(f) = D_H^{-1/2} A_sigma(D_H^{-1/2} f); out must not alias f.
    void apply(std::span<const double> f, std::span<double> out,
               std::span<double> scratch_u) const;
    std::vector<double> apply(std::span<const double> f) const;

    // phi(f) = 1/2 sqrt( sum over ordered pairs of B~_ij sigma(u_i,u_j)^2 )
    // where B~ is the tensor pair-weight matrix halved (stored entries count
    // both hyperedge orientations). Throws DomainError on an empty tensor.
    double phi(std::span<const double> f, std::span<double> scratch_u) const;
    double phi(std::span<const double> f) const;

private:
    void check_domain(std::span<const double> f) const;

    const TriangleTensor* tensor_;
    PairWeightMatrix pairs_;
    MixingSpec mix_;
};

// S f with S = D_G^{-1/2} A D_G^{-1/2}.
void apply_normalized_adjacency(const SparseGraph& g, std::span<const double> f,
                                std::span<double> out);
std::vector<double> apply_normalized_adjacency(const SparseGraph& g,
                                               std::span<const double> f);

// y_eps = (1 - eps) * y + eps * 1.
std::vector<double> smooth_labels(std::span<const double> y_col, double eps);

struct StepResult {
    double phi_g = 0.0;
};

// One normalized spreading step: g = (alpha/2)*S_H(f) + beta*S f + gamma*y~,
// f_next = g / phi(g), where y~ = y_eps / phi(y_eps) is the anchor projected
// onto the phi slice. The tensor operator acts through both orientations of
// every unordered hyperedge (sigma(a,a) = 2a), so the alpha/2 weight makes
// alpha the per-hyperedge mixing weight; the slice anchor keeps per-class
// columns comparable under imbalanced classes. f and f_next may not alias.
StepResult nhols_step(const SparseGraph& g, const HyperOperator& hyper,
                      const SpreadParams& params, std::span<const double> y_eps,
                      std::span<const double> f, std::span<double> f_next);

// Full single-class run from f0 = y~. Non-convergence inside max_iters is
// reported via ClassRun::converged, not an error.
ClassRun nhols_run(const SparseGraph& g, const HyperOperator& hyper,
                   const SpreadParams& params, std::span<const double> y_eps);

// Standard label spreading, unnormalized (Eq. F <- beta*S F + gamma*Y),
// one column. beta + gamma must be 1; gamma == 0 is allowed with a warning
// (pure diffusion).
ClassRun standard_ls_run(const SparseGraph& g, double beta, double gamma,
                         std::span<const double> y_col, double tol = 1e-5,
                         int max_iters = 40);

// Row-wise argmax; ties break to the lowest class index.
std::vector<int32_t> predict(const std::vector<ClassRun>& per_class);

// Per-class runs are independent; threads > 1 executes them concurrently
// against the shared read-only structures.
SpreadResult nhols_all_classes(const SparseGraph& g, const HyperOperator& hyper,
                               const SpreadParams& params, const LabelData& labels,
                               int threads = 1);

SpreadResult standard_ls_all_classes(const SparseGraph& g, double beta, double gamma,
                                     const LabelData& labels, double tol = 1e-5,
                                     int max_iters = 40, int threads = 1);

}  // namespace nhols
