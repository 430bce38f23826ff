#include "nhols/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nhols/error.hpp"
#include "nhols/rng.hpp"

namespace nhols {

LossParams make_loss_params(const SpreadParams& p, const HyperOperator& hyper,
                            std::span<const double> y_eps) {
    p.validate(true);
    LossParams lp;
    lp.lambda = p.lambda();
    // mu carries the same 1/2 as the spreading step's tensor term (the
    // operator acts through both hyperedge orientations), so stationarity of
    // theta~ matches the iteration's fixed point.
    lp.mu = 0.5 * p.mu();
    const double py = hyper.phi(y_eps);
    lp.y_tilde.assign(y_eps.begin(), y_eps.end());
    for (auto& v : lp.y_tilde) v /= py;
    return lp;
}

double energy_E1(const SparseGraph& g, std::span<const double> f) {
    if (static_cast<int64_t>(f.size()) != g.n)
        throw ShapeError("vector length does not match graph node count");
    double acc = 0.0;
    for (int64_t i = 0; i < g.n; ++i) {
        const double fi = f[i] * g.inv_sqrt_degrees[static_cast<size_t>(i)];
        for (int64_t k = g.row_offsets[static_cast<size_t>(i)];
             k < g.row_offsets[static_cast<size_t>(i) + 1]; ++k) {
            const int32_t j = g.col_indices[static_cast<size_t>(k)];
            const double d = fi - f[j] * g.inv_sqrt_degrees[static_cast<size_t>(j)];
            acc += g.weights[static_cast<size_t>(k)] * d * d;
        }
    }
    return acc;
}

double energy_E2(const TriangleTensor& t, const MixingSpec& mix,
                 std::span<const double> f) {
    if (static_cast<int64_t>(f.size()) != t.n)
        throw ShapeError("vector length does not match tensor node count");
    std::vector<double> u(f.size());
    for (size_t i = 0; i < f.size(); ++i)
        u[i] = f[i] * t.inv_sqrt_hyper_degrees[i];
    double acc = 0.0;
    // Each stored triple expands to 6 ordered entries; the (j,k) and (k,j)
    // orientations coincide for symmetric sigma, giving weight 2*tau per
    // leading index.
    for (int64_t e = 0; e < t.num_triples(); ++e) {
        const double w = t.tau2[static_cast<size_t>(e)];
        const double a = u[static_cast<size_t>(t.ti[static_cast<size_t>(e)])];
        const double b = u[static_cast<size_t>(t.tj[static_cast<size_t>(e)])];
        const double c = u[static_cast<size_t>(t.tk[static_cast<size_t>(e)])];
        const double da = a - 0.5 * sigma_eval(mix, b, c);
        const double db = b - 0.5 * sigma_eval(mix, a, c);
        const double dc = c - 0.5 * sigma_eval(mix, a, b);
        acc += w * (da * da + db * db + dc * dc);
    }
    return acc;
}

double loss_theta(const SparseGraph& g, const HyperOperator& hyper,
                  const LossParams& lp, std::span<const double> f) {
    double anchor = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
        const double d = f[i] - lp.y_tilde[i];
        anchor += d * d;
    }
    const double e1 = energy_E1(g, f);
    const double e2 = energy_E2(hyper.tensor(), hyper.mixing(), f);
    return 0.5 * (anchor + lp.lambda * 0.5 * e1 + lp.mu * e2);
}

double loss_theta_tilde(const SparseGraph& g, const HyperOperator& hyper,
                        const LossParams& lp, std::span<const double> f) {
    const double p = hyper.phi(f);
    return loss_theta(g, hyper, lp, f) - 0.5 * lp.mu * p * p;
}

std::vector<double> finite_diff_gradient(
    const std::function<double(std::span<const double>)>& fn,
    std::span<const double> f, double step) {
    double hmax = 1.0;
    for (const double v : f) hmax = std::max(hmax, std::abs(v));
    double h = step > 0.0 ? step : 1e-6 * hmax;

    std::vector<double> x(f.begin(), f.end());
    std::vector<double> grad(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        const double xi = x[i];
        auto eval_pair = [&](double hh) {
            x[i] = xi + hh;
            const double fp = fn(x);
            x[i] = xi - hh;
            const double fm = fn(x);
            x[i] = xi;
            return (fp - fm) / (2.0 * hh);
        };
        try {
            grad[i] = eval_pair(h);
        } catch (const DomainError&) {
            const double h2 = h / 16.0;  // shrink once near the boundary
            grad[i] = eval_pair(h2);
        }
    }
    return grad;
}

double hilbert_distance(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw ShapeError("hilbert_distance: length mismatch");
    if (u.empty()) throw ShapeError("hilbert_distance: empty vectors");
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < u.size(); ++i) {
        if (!(u[i] > 0.0) || !(v[i] > 0.0))
            throw DomainError("hilbert_distance requires entrywise positive vectors");
        const double r = u[i] / v[i];
        mx = std::max(mx, r);
        mn = std::min(mn, r);
    }
    return std::log(mx / mn);
}

ContractionAudit contraction_audit(const SparseGraph& g, const HyperOperator& hyper,
                                   const SpreadParams& params,
                                   std::span<const double> y_eps, int trials,
                                   uint64_t seed) {
    params.validate(true);
    Rng rng(seed);
    const int64_t n = g.n;
    std::vector<double> u(static_cast<size_t>(n)), v(static_cast<size_t>(n));
    std::vector<double> su(static_cast<size_t>(n)), sv(static_cast<size_t>(n));
    ContractionAudit audit;
    audit.trials = trials;
    audit.pass = true;
    for (int t = 0; t < trials; ++t) {
        for (auto& x : u) x = rng.log_uniform(0.05, 5.0);
        for (auto& x : v) x = rng.log_uniform(0.05, 5.0);
        const double pu = hyper.phi(u), pv = hyper.phi(v);
        for (auto& x : u) x /= pu;
        for (auto& x : v) x /= pv;
        const double d0 = hilbert_distance(u, v);
        if (!(d0 > 0.0)) continue;
        nhols_step(g, hyper, params, y_eps, u, su);
        nhols_step(g, hyper, params, y_eps, v, sv);
        const double d1 = hilbert_distance(su, sv);
        const double ratio = d1 / d0;
        audit.max_ratio = std::max(audit.max_ratio, ratio);
        if (!(ratio < 1.0)) audit.pass = false;
    }
    return audit;
}

CsrMatrix clique_expansion_matrix(const TriangleTensor& t) {
    // K W K^T assembled hyperedge by hyperedge (K has one column per triple),
    // diagonal dropped, then scaled by 2 D_H^{-1/2} . D_H^{-1/2}.
    std::vector<int64_t> rows;
    std::vector<int32_t> cols;
    std::vector<double> vals;
    rows.reserve(6 * t.tau.size());
    cols.reserve(6 * t.tau.size());
    vals.reserve(6 * t.tau.size());
    for (size_t e = 0; e < t.tau.size(); ++e) {
        const int32_t v[3] = {t.ti[e], t.tj[e], t.tk[e]};
        const double w = t.tau[e];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                if (a == b) continue;  // (K W K^T)_ii excluded from Theta
                rows.push_back(v[a]);
                cols.push_back(v[b]);
                vals.push_back(w);
            }
    }
    CsrMatrix m = csr_from_coo(t.n, std::move(rows), std::move(cols), std::move(vals));
    for (int64_t i = 0; i < m.n; ++i) {
        const double di = t.inv_sqrt_hyper_degrees[static_cast<size_t>(i)];
        for (int64_t k = m.row_offsets[static_cast<size_t>(i)];
             k < m.row_offsets[static_cast<size_t>(i) + 1]; ++k)
            m.values[static_cast<size_t>(k)] *=
                2.0 * di *
                t.inv_sqrt_hyper_degrees[static_cast<size_t>(
                    m.col_indices[static_cast<size_t>(k)])];
    }
    return m;
}

double standard_ls_loss(const SparseGraph& g, std::span<const double> f,
                        std::span<const double> y, double lambda) {
    double anchor = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
        const double d = f[i] - y[i];
        anchor += d * d;
    }
    // f'(I - S) f = ||f||^2 - f' S f.
    std::vector<double> sf = apply_normalized_adjacency(g, f);
    double quad = 0.0;
    for (size_t i = 0; i < f.size(); ++i) quad += f[i] * (f[i] - sf[i]);
    return 0.5 * (anchor + lambda * quad);
}

std::vector<double> standard_ls_loss_gradient(const SparseGraph& g,
                                              std::span<const double> f,
                                              std::span<const double> y,
                                              double lambda) {
    std::vector<double> grad = apply_normalized_adjacency(g, f);
    for (size_t i = 0; i < f.size(); ++i)
        grad[i] = (1.0 + lambda) * f[i] - lambda * grad[i] - y[i];
    return grad;
}

FixedPointRun gradient_flow_fixed_point(const SparseGraph& g,
                                        const HyperOperator& hyper,
                                        const SpreadParams& params,
                                        std::span<const double> anchor,
                                        double tol, int max_iters) {
    params.validate(true);
    const int64_t n = g.n;
    FixedPointRun run;
    run.f.assign(anchor.begin(), anchor.end());
    std::vector<double> sf(static_cast<size_t>(n)), hf(static_cast<size_t>(n)),
        u(static_cast<size_t>(n)), next(static_cast<size_t>(n));
    const double blowup = 1e12;
    for (int it = 0; it < max_iters; ++it) {
        apply_normalized_adjacency(g, run.f, sf);
        if (params.alpha > 0.0)
            hyper.apply(run.f, hf, u);
        else
            std::fill(hf.begin(), hf.end(), 0.0);
        double diff = 0.0, scale = 0.0;
        // Tensor term weighted alpha/2 as in the spreading step; dividing by
        // the coefficient sum 1 - alpha/2 keeps the map a convex combination,
        // so its fixed point is exactly the stationary point of theta~ with
        // lambda = beta/gamma, mu = alpha/(2 gamma).
        const double inv_total = 1.0 / (1.0 - 0.5 * params.alpha);
        for (int64_t i = 0; i < n; ++i) {
            next[static_cast<size_t>(i)] =
                inv_total * (0.5 * params.alpha * hf[static_cast<size_t>(i)] +
                             params.beta * sf[static_cast<size_t>(i)] +
                             params.gamma * anchor[i]);
            diff = std::max(diff, std::abs(next[static_cast<size_t>(i)] -
                                           run.f[static_cast<size_t>(i)]));
            scale = std::max(scale, std::abs(next[static_cast<size_t>(i)]));
        }
        run.f.swap(next);
        run.iterations = it + 1;
        run.residual_inf = diff;
        if (scale > blowup) break;  // expanding regime: no positive fixed point
        if (diff <= tol * std::max(1.0, scale)) {
            run.converged = true;
            break;
        }
    }
    return run;
}

}  // namespace nhols
