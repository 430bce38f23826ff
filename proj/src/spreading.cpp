#include "nhols/spreading.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "nhols/error.hpp"
#include "nhols/kernels.hpp"
#include "nhols/parallel.hpp"

namespace nhols {

namespace {

double rel_change_2norm(std::span<const double> next, std::span<const double> prev) {
    double dn = 0.0, nn = 0.0;
    for (size_t i = 0; i < next.size(); ++i) {
        const double d = next[i] - prev[i];
        dn += d * d;
        nn += next[i] * next[i];
    }
    return std::sqrt(dn) / std::sqrt(nn);
}

int kernel_index(MixingKind k) { return static_cast<int>(k); }

}  // namespace

void SpreadParams::validate(bool require_gamma) const {
    if (alpha < 0.0 || beta < 0.0 || gamma < 0.0)
        throw InvalidParam("alpha, beta, gamma must be nonnegative");
    if (std::abs(alpha + beta + gamma - 1.0) > 1e-12)
        throw InvalidParam("alpha + beta + gamma must equal 1");
    if (require_gamma && !(gamma > 0.0))
        throw InvalidParam("gamma must be positive (the iteration needs an anchor)");
    if (!(eps > 0.0 && eps < 1.0))
        throw InvalidParam("smoothing eps must lie in (0, 1)");
    if (!(tol > 0.0)) throw InvalidParam("tol must be positive");
    if (max_iters < 1) throw InvalidParam("max_iters must be at least 1");
}

int64_t LabelData::known_count() const {
    int64_t c = 0;
    for (const auto m : known_mask) c += m;
    return c;
}

LabelData make_label_data(std::span<const int32_t> known_class, int32_t num_classes,
                          double eps) {
    if (num_classes < 1) throw InvalidLabels("need at least one class");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidParam("smoothing eps must lie in (0, 1)");
    LabelData out;
    out.n = static_cast<int64_t>(known_class.size());
    out.num_classes = num_classes;
    out.eps = eps;
    out.known_class.assign(known_class.begin(), known_class.end());
    out.known_mask.assign(known_class.size(), 0);
    for (size_t i = 0; i < known_class.size(); ++i) {
        const int32_t c = known_class[i];
        if (c < -1 || c >= num_classes)
            throw InvalidLabels("class id " + std::to_string(c) + " outside [0, " +
                                std::to_string(num_classes) + ")");
        out.known_mask[i] = c >= 0;
    }
    out.y_eps.resize(static_cast<size_t>(num_classes));
    for (int32_t c = 0; c < num_classes; ++c) {
        auto& col = out.y_eps[static_cast<size_t>(c)];
        col.assign(known_class.size(), eps);
        for (size_t i = 0; i < known_class.size(); ++i)
            if (known_class[i] == c) col[i] = 1.0;  // (1-eps)*1 + eps
    }
    return out;
}

HyperOperator::HyperOperator(const TriangleTensor& tensor, MixingSpec mix)
    : tensor_(&tensor), pairs_(pair_weights(tensor)), mix_(std::move(mix)) {}

void HyperOperator::check_domain(std::span<const double> f) const {
    if (static_cast<int64_t>(f.size()) != tensor_->n)
        throw ShapeError("vector length does not match tensor node count");
    const bool strict = mix_.requires_positive();
    for (const double v : f) {
        if (std::isnan(v) || v < 0.0 || (strict && v == 0.0))
            throw DomainError("hyper operator requires entrywise " +
                              std::string(strict ? "positive" : "nonnegative") +
                              " input for this mixing");
    }
}

void HyperOperator::apply(std::span<const double> f, std::span<double> out,
                          std::span<double> scratch_u) const {
    check_domain(f);
    const int64_t n = tensor_->n;
    if (static_cast<int64_t>(out.size()) != n || static_cast<int64_t>(scratch_u.size()) != n)
        throw ShapeError("output/scratch length mismatch");
    const double* isd = tensor_->inv_sqrt_hyper_degrees.data();
    for (int64_t i = 0; i < n; ++i) scratch_u[i] = f[i] * isd[i];
    std::fill(out.begin(), out.end(), 0.0);
    const int64_t m = tensor_->num_triples();
    const int ki = kernel_index(mix_.kind);
    if (ki < kNamedKindCount) {
        kernels::active().hyper[ki](tensor_->ti.data(), tensor_->tj.data(),
                                    tensor_->tk.data(), tensor_->tau2.data(), m,
                                    scratch_u.data(), out.data());
    } else {
        for (int64_t t = 0; t < m; ++t) {
            const int32_t a = tensor_->ti[t], b = tensor_->tj[t], c = tensor_->tk[t];
            const double w = tensor_->tau2[t];
            out[a] += w * sigma_eval(mix_, scratch_u[b], scratch_u[c]);
            out[b] += w * sigma_eval(mix_, scratch_u[a], scratch_u[c]);
            out[c] += w * sigma_eval(mix_, scratch_u[a], scratch_u[b]);
        }
    }
    for (int64_t i = 0; i < n; ++i) out[i] *= isd[i];
}

std::vector<double> HyperOperator::apply(std::span<const double> f) const {
    std::vector<double> out(f.size()), scratch(f.size());
    apply(f, out, scratch);
    return out;
}

double HyperOperator::phi(std::span<const double> f, std::span<double> scratch_u) const {
    if (tensor_->empty())
        throw DomainError("phi is undefined on an empty tensor");
    check_domain(f);
    const int64_t n = tensor_->n;
    const double* isd = tensor_->inv_sqrt_hyper_degrees.data();
    for (int64_t i = 0; i < n; ++i) scratch_u[i] = f[i] * isd[i];
    double acc;
    const int ki = kernel_index(mix_.kind);
    if (ki < kNamedKindCount) {
        acc = kernels::active().pair_sum[ki](pairs_.row_offsets.data(),
                                             pairs_.col_indices.data(),
                                             pairs_.values.data(), scratch_u.data(), n);
    } else {
        acc = 0.0;
        for (int64_t i = 0; i < n; ++i) {
            const double ui = scratch_u[i];
            for (int64_t k = pairs_.row_offsets[i]; k < pairs_.row_offsets[i + 1]; ++k) {
                const double s = sigma_eval(mix_, ui, scratch_u[pairs_.col_indices[k]]);
                acc += pairs_.values[k] * s * s;
            }
        }
    }
    // Stored pair weights count both orientations of each hyperedge; halve to
    // recover the tensor pair marginal sum_k A_kij before the 1/2 sqrt.
    return 0.5 * std::sqrt(0.5 * acc);
}

double HyperOperator::phi(std::span<const double> f) const {
    std::vector<double> scratch(f.size());
    return phi(f, scratch);
}

void apply_normalized_adjacency(const SparseGraph& g, std::span<const double> f,
                                std::span<double> out) {
    if (static_cast<int64_t>(f.size()) != g.n || static_cast<int64_t>(out.size()) != g.n)
        throw ShapeError("vector length does not match graph node count");
    kernels::active().spmv(g.row_offsets.data(), g.col_indices.data(),
                           g.norm_weights.data(), f.data(), out.data(), g.n);
}

std::vector<double> apply_normalized_adjacency(const SparseGraph& g,
                                               std::span<const double> f) {
    std::vector<double> out(f.size());
    apply_normalized_adjacency(g, f, out);
    return out;
}

std::vector<double> smooth_labels(std::span<const double> y_col, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidParam("smoothing eps must lie in (0, 1)");
    std::vector<double> out(y_col.size());
    for (size_t i = 0; i < y_col.size(); ++i) out[i] = (1.0 - eps) * y_col[i] + eps;
    return out;
}

namespace {

struct StepBuffers {
    std::vector<double> sf, hf, u;
    explicit StepBuffers(int64_t n)
        : sf(static_cast<size_t>(n)), hf(static_cast<size_t>(n)), u(static_cast<size_t>(n)) {}
};

double step_into(const SparseGraph& g, const HyperOperator& hyper,
                 const SpreadParams& p, std::span<const double> y_eps,
                 std::span<const double> f, std::span<double> out, StepBuffers& bufs) {
    apply_normalized_adjacency(g, f, bufs.sf);
    if (p.alpha > 0.0)
        hyper.apply(f, bufs.hf, bufs.u);
    else
        std::fill(bufs.hf.begin(), bufs.hf.end(), 0.0);
    // The tensor operator counts every unordered hyperedge through both of
    // its orientations (sigma(a,a) = 2a, degrees over ordered pairs), so its
    // action carries a factor 2; weighting it by alpha/2 makes alpha the
    // per-hyperedge mixing weight and keeps alpha + beta + gamma = 1 a convex
    // combination of unit-scale operators.
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = 0.5 * p.alpha * bufs.hf[i] + p.beta * bufs.sf[i] + p.gamma * y_eps[i];
    const double pg = hyper.phi(out, bufs.u);
    const double inv = 1.0 / pg;
    for (auto& v : out) v *= inv;
    return pg;
}

}  // namespace

StepResult nhols_step(const SparseGraph& g, const HyperOperator& hyper,
                      const SpreadParams& params, std::span<const double> y_eps,
                      std::span<const double> f, std::span<double> f_next) {
    params.validate(true);
    if (g.n != hyper.tensor().n) throw ShapeError("graph/tensor node count mismatch");
    StepBuffers bufs(g.n);
    // Anchor on the phi slice: the loss and the step-length identity are
    // stated for phi(y) = 1, and the slice anchor keeps per-class columns
    // comparable under imbalanced classes.
    std::vector<double> anchor(y_eps.begin(), y_eps.end());
    const double py = hyper.phi(anchor, bufs.u);
    for (auto& v : anchor) v /= py;
    StepResult r;
    r.phi_g = step_into(g, hyper, params, anchor, f, f_next, bufs);
    return r;
}

ClassRun nhols_run(const SparseGraph& g, const HyperOperator& hyper,
                   const SpreadParams& params, std::span<const double> y_eps) {
    params.validate(true);
    if (g.n != hyper.tensor().n) throw ShapeError("graph/tensor node count mismatch");
    const int64_t n = g.n;
    ClassRun run;
    std::vector<double> next(static_cast<size_t>(n));
    StepBuffers bufs(n);
    // Project the smoothed anchor onto the phi slice once; f^(0) is the
    // anchor itself (the extra scale would wash out after one step anyway).
    std::vector<double> anchor(y_eps.begin(), y_eps.end());
    const double py = hyper.phi(anchor, bufs.u);
    for (auto& v : anchor) v /= py;
    run.f = anchor;
    for (int it = 0; it < params.max_iters; ++it) {
        const double pg = step_into(g, hyper, params, anchor, run.f, next, bufs);
        const double rc = rel_change_2norm(next, run.f);
        run.f.swap(next);
        run.phi_history.push_back(pg);
        run.rel_change_history.push_back(rc);
        run.iterations = it + 1;
        run.final_rel_change = rc;
        if (rc < params.tol) {
            run.converged = true;
            break;
        }
    }
    return run;
}

ClassRun standard_ls_run(const SparseGraph& g, double beta, double gamma,
                         std::span<const double> y_col, double tol, int max_iters) {
    if (beta < 0.0 || gamma < 0.0 || std::abs(beta + gamma - 1.0) > 1e-12)
        throw InvalidParam("standard LS needs beta, gamma >= 0 with beta + gamma = 1");
    if (gamma == 0.0)
        std::fprintf(stderr,
                     "nhols: warning: standard LS with gamma = 0 is pure diffusion\n");
    if (static_cast<int64_t>(y_col.size()) != g.n)
        throw ShapeError("label vector length does not match graph node count");
    ClassRun run;
    run.f.assign(y_col.begin(), y_col.end());
    std::vector<double> next(y_col.size());
    for (int it = 0; it < max_iters; ++it) {
        apply_normalized_adjacency(g, run.f, next);
        for (size_t i = 0; i < next.size(); ++i)
            next[i] = beta * next[i] + gamma * y_col[i];
        const double rc = rel_change_2norm(next, run.f);
        run.f.swap(next);
        run.rel_change_history.push_back(rc);
        run.iterations = it + 1;
        run.final_rel_change = rc;
        if (rc < tol) {
            run.converged = true;
            break;
        }
    }
    return run;
}

std::vector<int32_t> predict(const std::vector<ClassRun>& per_class) {
    if (per_class.empty()) throw InvalidEval("predict needs at least one class column");
    const size_t n = per_class.front().f.size();
    std::vector<int32_t> out(n, 0);
    for (size_t i = 0; i < n; ++i) {
        double best = per_class[0].f[i];
        int32_t arg = 0;
        for (size_t c = 1; c < per_class.size(); ++c) {
            if (per_class[c].f[i] > best) {  // strict: ties keep the lowest index
                best = per_class[c].f[i];
                arg = static_cast<int32_t>(c);
            }
        }
        out[i] = arg;
    }
    return out;
}

SpreadResult nhols_all_classes(const SparseGraph& g, const HyperOperator& hyper,
                               const SpreadParams& params, const LabelData& labels,
                               int threads) {
    params.validate(true);
    if (labels.n != g.n) throw ShapeError("label data does not match graph size");
    SpreadResult res;
    res.n = g.n;
    res.num_classes = labels.num_classes;
    res.per_class.resize(static_cast<size_t>(labels.num_classes));
    parallel_for(labels.num_classes, threads, [&](int64_t c) {
        res.per_class[static_cast<size_t>(c)] =
            nhols_run(g, hyper, params, labels.y_eps[static_cast<size_t>(c)]);
    });
    res.predictions = predict(res.per_class);
    return res;
}

SpreadResult standard_ls_all_classes(const SparseGraph& g, double beta, double gamma,
                                     const LabelData& labels, double tol,
                                     int max_iters, int threads) {
    if (labels.n != g.n) throw ShapeError("label data does not match graph size");
    SpreadResult res;
    res.n = g.n;
    res.num_classes = labels.num_classes;
    res.per_class.resize(static_cast<size_t>(labels.num_classes));
    parallel_for(labels.num_classes, threads, [&](int64_t c) {
        // Standard LS spreads the raw 0/1 columns (no smoothing).
        std::vector<double> y(static_cast<size_t>(g.n), 0.0);
        for (int64_t i = 0; i < g.n; ++i)
            if (labels.known_class[static_cast<size_t>(i)] == static_cast<int32_t>(c))
                y[static_cast<size_t>(i)] = 1.0;
        res.per_class[static_cast<size_t>(c)] =
            standard_ls_run(g, beta, gamma, y, tol, max_iters);
    });
    res.predictions = predict(res.per_class);
    return res;
}

}  // namespace nhols
