#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nhols/spreading.hpp"

namespace nhols {

// lambda = beta/gamma, mu = alpha/gamma, and the phi-normalized anchor
// y_tilde = y_eps / phi(y_eps). Step length h of the gradient-descent view
// satisfies (1 - h)/h = lambda + mu, i.e. h = gamma.
struct LossParams {
    double lambda = 0.0;
    double mu = 0.0;
    std::vector<double> y_tilde;
};

LossParams make_loss_params(const SpreadParams& p, const HyperOperator& hyper,
                            std::span<const double> y_eps);

// E1(f) = sum over ordered pairs (i,j) of A_ij (f_i/sqrt(d_i) - f_j/sqrt(d_j))^2.
// Equals 2 f'(I - S) f.
double energy_E1(const SparseGraph& g, std::span<const double> f);

// E2(f) = sum over ordered triples of A_ijk (f_i/sqrt(delta_i)
//         - sigma(f_j/sqrt(delta_j), f_k/sqrt(delta_k)) / 2)^2.
double energy_E2(const TriangleTensor& t, const MixingSpec& mix,
                 std::span<const double> f);

// theta(f) = 1/2 { ||f - y_tilde||^2 + lambda * f'(I-S)f + mu * E2(f) }.
// The graph term is the quadratic form f'Δf (half the ordered-pair sum E1),
// matching the standard-LS loss and the gradient-descent step identity.
double loss_theta(const SparseGraph& g, const HyperOperator& hyper,
                  const LossParams& lp, std::span<const double> f);

// theta_tilde = theta - (mu/2) phi(f)^2; same minimizers on the slice phi = 1.
double loss_theta_tilde(const SparseGraph& g, const HyperOperator& hyper,
                        const LossParams& lp, std::span<const double> f);

// Central differences with h = 1e-6 * max(1, ||f||_inf) by default. A domain
// violation near the boundary shrinks h once, then raises DomainError.
std::vector<double> finite_diff_gradient(
    const std::function<double(std::span<const double>)>& fn,
    std::span<const double> f, double step = 0.0);

// d(u, v) = log(max_i u_i/v_i / min_i u_i/v_i); scale-invariant on the cone.
double hilbert_distance(std::span<const double> u, std::span<const double> v);

struct ContractionAudit {
    double max_ratio = 0.0;
    int trials = 0;
    bool pass = false;  // every sampled ratio < 1
};

// Samples positive pairs on the slice phi = 1, applies one normalized step to
// each, and reports the largest Hilbert-distance ratio.
ContractionAudit contraction_audit(const SparseGraph& g, const HyperOperator& hyper,
                                   const SpreadParams& params,
                                   std::span<const double> y_eps, int trials,
                                   uint64_t seed);

// Normalized clique-expansion adjacency Theta = 2 D_H^{-1/2} K W K^T D_H^{-1/2}
// with the diagonal removed; built from the incidence structure so it serves
// as an independent oracle for the arithmetic-mixing reduction.
CsrMatrix clique_expansion_matrix(const TriangleTensor& t);

// psi(f) = 1/2 { ||f - y||^2 + lambda f'(I - S) f }.
double standard_ls_loss(const SparseGraph& g, std::span<const double> f,
                        std::span<const double> y, double lambda);
std::vector<double> standard_ls_loss_gradient(const SparseGraph& g,
                                              std::span<const double> f,
                                              std::span<const double> y,
                                              double lambda);

struct FixedPointRun {
    std::vector<double> f;
    int iterations = 0;
    double residual_inf = 0.0;  // ||f - (alpha S_H f + beta S f + gamma y)||_inf
    bool converged = false;
};

// Unnormalized iteration
//   f <- [(alpha/2)*S_H(f) + beta*S f + gamma*anchor] / (1 - alpha/2),
// whose fixed point is the stationary point of theta_tilde. A contraction
// exactly when mu = alpha/(2 gamma) < 1 (the tensor quadratic in theta~ is
// indefinite past that point, so no positive stationary point exists);
// divergence is reported via converged = false.
FixedPointRun gradient_flow_fixed_point(const SparseGraph& g,
                                        const HyperOperator& hyper,
                                        const SpreadParams& params,
                                        std::span<const double> anchor,
                                        double tol = 1e-12, int max_iters = 10000);

}  // namespace nhols
