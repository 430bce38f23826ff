#include "nhols/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "nhols/datasets.hpp"
#include "nhols/objective.hpp"
#include "nhols/rng.hpp"

namespace nhols {

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

const MixingKind kNamed[5] = {MixingKind::arithmetic, MixingKind::harmonic,
                              MixingKind::l2, MixingKind::geometric,
                              MixingKind::maximum};

void add(ValidationReport& rep, std::string name, double tol, double observed,
         bool pass, std::string note = "") {
    rep.checks.push_back({std::move(name), tol, observed, pass, std::move(note)});
}

void add_leq(ValidationReport& rep, std::string name, double tol, double observed,
             std::string note = "") {
    add(rep, std::move(name), tol, observed, observed <= tol, std::move(note));
}

}  // namespace

int ValidationReport::failures() const {
    int f = 0;
    for (const auto& c : checks) f += !c.pass;
    return f;
}

ValidationReport run_validation_suite(uint64_t seed, int threads) {
    (void)threads;
    ValidationReport rep;
    Rng rng(seed);

    // ---- mixing-function properties -------------------------------------
    for (const MixingKind k : kNamed) {
        const MixingSpec spec = MixingSpec::named(k);
        const auto hom = check_one_homogeneity(spec, 1000, rng.next());
        add(rep, "mixing/" + spec.name() + "/one_homogeneity", 1e-10,
            hom.max_violation, hom.pass);
        const auto pos = check_positivity(spec, 1000, rng.next());
        add(rep, "mixing/" + spec.name() + "/positivity", 0.0, pos.max_violation,
            pos.pass);
        const auto sym = check_symmetry(spec, 1000, rng.next());
        add(rep, "mixing/" + spec.name() + "/symmetry", 1e-12, sym.max_violation,
            sym.pass);
        const auto ord = check_order_preservation(spec, 1000, rng.next());
        add(rep, "mixing/" + spec.name() + "/order_preservation", 0.0,
            ord.max_violation, ord.pass);
    }
    {
        // Diagonal normalization sigma(a, a) = 2a.
        double worst = 0.0;
        for (int s = 0; s < 200; ++s) {
            const double a = rng.log_uniform(1e-3, 1e3);
            for (const MixingKind k : kNamed)
                worst = std::max(worst,
                                 rel_err(sigma_eval(MixingSpec::named(k), a, a), 2 * a));
        }
        add_leq(rep, "mixing/diagonal_sigma_aa_eq_2a", 1e-14, worst);
    }
    {
        // Strict monotonicity in p at a != b.
        bool ok = true;
        for (int s = 0; s < 200 && ok; ++s) {
            const double a = rng.log_uniform(1e-2, 1e2);
            double b = rng.log_uniform(1e-2, 1e2);
            if (a == b) b *= 1.5;
            double prev = -1.0;
            for (const MixingKind k :
                 {MixingKind::harmonic, MixingKind::geometric, MixingKind::arithmetic,
                  MixingKind::l2, MixingKind::maximum}) {
                const double v = sigma_eval(MixingSpec::named(k), a, b);
                if (v <= prev) ok = false;
                prev = v;
            }
        }
        add(rep, "mixing/monotone_in_p", 0.0, ok ? 0.0 : 1.0, ok);
    }
    {
        // Limit p -> 0 matches the geometric closed form.
        double worst = 0.0;
        for (int s = 0; s < 200; ++s) {
            const double a = rng.log_uniform(1e-2, 1e2);
            const double b = rng.log_uniform(1e-2, 1e2);
            const double g = sigma_eval(MixingSpec::named(MixingKind::geometric), a, b);
            worst = std::max(worst, rel_err(sigma_eval(MixingSpec::power(1e-6), a, b), g));
            worst = std::max(worst, rel_err(sigma_eval(MixingSpec::power(-1e-6), a, b), g));
        }
        add_leq(rep, "mixing/p_to_0_matches_geometric", 1e-4, worst);
    }
    {
        // p = 50 against the maximum. The uniform gap over positive pairs is
        // 1 - 2^(-1/50) ~ 1.376e-2, so the 1e-2 target is unattainable; the
        // check reports the observed sup honestly.
        double worst = 0.0;
        for (int s = 0; s < 500; ++s) {
            const double a = rng.log_uniform(1e-2, 1e2);
            const double b = rng.log_uniform(1e-2, 1e2);
            const double mx = sigma_eval(MixingSpec::named(MixingKind::maximum), a, b);
            worst = std::max(worst, rel_err(sigma_eval(MixingSpec::power(50.0), a, b), mx));
        }
        add_leq(rep, "mixing/p50_approaches_max", 1e-2, worst,
                "sup gap over positive pairs is 1 - 2^(-1/50) ~ 1.376e-2");
    }
    {
        // Adversarial custom maps get rejected by the samplers.
        const auto affine = MixingSpec::user([](double a, double b) { return a + b + 1.0; });
        add(rep, "mixing/custom_affine_fails_homogeneity", 0.0, 0.0,
            !check_one_homogeneity(affine, 200, rng.next()).pass);
        const auto diff = MixingSpec::user([](double a, double b) { return a - b; });
        add(rep, "mixing/custom_difference_fails_positivity", 0.0, 0.0,
            !check_positivity(diff, 200, rng.next()).pass);
    }

    // ---- Jensen-type log inequality (contraction lemma ingredient) ------
    {
        double worst = -1.0;
        bool ok = true;
        for (int s = 0; s < 100000; ++s) {
            double a = rng.log_uniform(1e-6, 1e6);
            double b = rng.log_uniform(1e-6, 1e6);
            const double c = rng.log_uniform(1e-6, 1e6);
            if (a < b) std::swap(a, b);
            const double lhs = std::log((a + c) / (b + c));
            const double rhs = (a / (a + c)) * std::log(a / b);
            if (lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) ok = false;
            worst = std::max(worst, lhs - rhs);
        }
        add(rep, "contraction/log_jensen_inequality", 0.0, std::max(worst, 0.0), ok);
    }

    // ---- instance-based checks ------------------------------------------
    std::vector<RandomInstance> instances;
    instances.push_back(make_random_instance(18, 40, rng.next()));
    instances.push_back(make_random_instance(40, 120, rng.next()));
    instances.push_back(make_random_instance(80, 260, rng.next()));

    // Energy/phi identity over the symmetrized tensor.
    {
        double worst = 0.0;
        for (const auto& inst : instances) {
            for (const MixingKind k : kNamed) {
                const MixingSpec mix = MixingSpec::named(k);
                HyperOperator hyper(inst.tensor, mix);
                std::vector<double> f(static_cast<size_t>(inst.tensor.n));
                for (auto& v : f) v = rng.log_uniform(0.1, 10.0);
                // lhs = f'(D_H f - A_sigma(f)) in unnormalized coordinates.
                std::vector<double> g(f.size());
                for (size_t i = 0; i < f.size(); ++i)
                    g[i] = f[i] * std::sqrt(inst.tensor.hyper_degrees[i]);
                const auto sg = hyper.apply(g);
                double lhs = 0.0;
                for (size_t i = 0; i < f.size(); ++i) {
                    const double af =
                        sg[i] * std::sqrt(inst.tensor.hyper_degrees[i]);  // A sigma(f)
                    lhs += f[i] * (inst.tensor.hyper_degrees[i] * f[i] - af);
                }
                const double e2 = energy_E2(inst.tensor, mix, g);
                const double ph = hyper.phi(g);
                worst = std::max(worst, rel_err(e2 - ph * ph, lhs));
            }
        }
        add_leq(rep, "identity/e2_minus_phi_sq", 1e-9, worst);
    }

    // Clique-expansion equivalence for the arithmetic mixing.
    {
        double worst = 0.0;
        for (const auto& inst : instances) {
            HyperOperator hyper(inst.tensor, MixingSpec::named(MixingKind::arithmetic));
            const CsrMatrix theta = clique_expansion_matrix(inst.tensor);
            std::vector<double> f(static_cast<size_t>(inst.tensor.n));
            for (auto& v : f) v = rng.log_uniform(0.1, 10.0);
            const auto s = hyper.apply(f);
            std::vector<double> tf(f.size());
            csr_apply(theta, f, tf);
            double scale = 0.0, diff = 0.0;
            for (size_t i = 0; i < f.size(); ++i) {
                scale = std::max(scale, std::abs(tf[i]));
                diff = std::max(diff, std::abs(tf[i] - s[i]));
            }
            worst = std::max(worst, diff / scale);
        }
        add_leq(rep, "identity/clique_expansion_arith", 1e-12, worst);
    }

    // Hilbert metric sanity: scale invariance, symmetry, triangle inequality.
    {
        double worst = 0.0;
        bool ok = true;
        for (int s = 0; s < 500; ++s) {
            std::vector<double> u(12), v(12), w(12);
            for (auto& x : u) x = rng.log_uniform(0.01, 100.0);
            for (auto& x : v) x = rng.log_uniform(0.01, 100.0);
            for (auto& x : w) x = rng.log_uniform(0.01, 100.0);
            const double c = rng.log_uniform(0.01, 100.0);
            std::vector<double> cu(u);
            for (auto& x : cu) x *= c;
            worst = std::max(worst, hilbert_distance(u, cu));
            const double duv = hilbert_distance(u, v);
            worst = std::max(worst, std::abs(duv - hilbert_distance(v, u)));
            if (duv > hilbert_distance(u, w) + hilbert_distance(w, v) + 1e-12) ok = false;
        }
        add(rep, "hilbert/metric_axioms", 1e-12, worst, ok && worst <= 1e-12);
    }

    // Contraction of the normalized step, all kinds.
    {
        double worst_ratio = 0.0;
        bool ok = true;
        SpreadParams params;
        params.alpha = 0.5;
        params.beta = 0.3;
        params.gamma = 0.2;
        for (const auto& inst : instances) {
            std::vector<double> y(static_cast<size_t>(inst.graph.n), 0.01);
            y[0] = 1.0;
            for (const MixingKind k : kNamed) {
                HyperOperator hyper(inst.tensor, MixingSpec::named(k));
                const auto audit =
                    contraction_audit(inst.graph, hyper, params, y, 200, rng.next());
                worst_ratio = std::max(worst_ratio, audit.max_ratio);
                ok = ok && audit.pass;
            }
        }
        add(rep, "contraction/step_ratio_below_1", 1.0, worst_ratio,
            ok && worst_ratio < 1.0);
    }

    // Uniqueness: two positive starts agree after convergence.
    {
        double worst = 0.0;
        const auto& inst = instances[1];
        std::vector<double> y(static_cast<size_t>(inst.graph.n), 0.01);
        y[1] = 1.0;
        SpreadParams params;
        params.alpha = 0.4;
        params.beta = 0.4;
        params.gamma = 0.2;
        params.tol = 1e-12;
        params.max_iters = 500;
        for (const MixingKind k : kNamed) {
            HyperOperator hyper(inst.tensor, MixingSpec::named(k));
            const auto r1 = nhols_run(inst.graph, hyper, params, y);
            // A different positive start: run one step from a random vector.
            std::vector<double> f0(y.size());
            for (auto& v : f0) v = rng.log_uniform(0.05, 5.0);
            std::vector<double> f1(y.size());
            nhols_step(inst.graph, hyper, params, y, f0, f1);
            SpreadParams p2 = params;
            ClassRun r2;
            {
                // iterate manually from f1
                r2.f = f1;
                std::vector<double> next(f1.size());
                for (int it = 0; it < p2.max_iters; ++it) {
                    nhols_step(inst.graph, hyper, p2, y, r2.f, next);
                    double dn = 0, nn = 0;
                    for (size_t q = 0; q < next.size(); ++q) {
                        const double d = next[q] - r2.f[q];
                        dn += d * d;
                        nn += next[q] * next[q];
                    }
                    r2.f.swap(next);
                    if (std::sqrt(dn / nn) < p2.tol) break;
                }
            }
            for (size_t q = 0; q < r1.f.size(); ++q)
                worst = std::max(worst, rel_err(r2.f[q], r1.f[q]));
        }
        add_leq(rep, "fixed_point/uniqueness_two_starts", 1e-6, worst);
    }

    // Gradient consistency of the tensor energy against the closed form
    // D_H f - A sigma(f). Exact only for the arithmetic mixing, whose
    // contraction map is a gradient field; the nonlinear kinds report their
    // true deviation.
    {
        const auto& inst = instances[0];
        for (const MixingKind k :
             {MixingKind::arithmetic, MixingKind::harmonic, MixingKind::l2,
              MixingKind::geometric}) {
            const MixingSpec mix = MixingSpec::named(k);
            HyperOperator hyper(inst.tensor, mix);
            std::vector<double> f(static_cast<size_t>(inst.tensor.n));
            for (auto& v : f) v = rng.log_uniform(0.2, 5.0);
            // A sigma(x) = D_H^{1/2} S_H(D_H^{1/2} x).
            auto a_sigma = [&](std::span<const double> x) {
                std::vector<double> lifted(x.size());
                for (size_t i = 0; i < x.size(); ++i)
                    lifted[i] = x[i] * std::sqrt(inst.tensor.hyper_degrees[i]);
                auto s = hyper.apply(lifted);
                for (size_t i = 0; i < x.size(); ++i)
                    s[i] *= std::sqrt(inst.tensor.hyper_degrees[i]);
                return s;
            };
            auto energy = [&](std::span<const double> x) {
                const auto af = a_sigma(x);
                double acc = 0.0;
                for (size_t i = 0; i < x.size(); ++i)
                    acc += x[i] * (inst.tensor.hyper_degrees[i] * x[i] - af[i]);
                return 0.5 * acc;
            };
            const auto fd = finite_diff_gradient(energy, f);
            const auto s = a_sigma(f);
            double worst = 0.0, scale = 0.0;
            for (size_t i = 0; i < f.size(); ++i) {
                const double an = inst.tensor.hyper_degrees[i] * f[i] - s[i];
                scale = std::max(scale, std::abs(an));
                worst = std::max(worst, std::abs(fd[i] - an));
            }
            add_leq(rep, "gradient/tensor_energy_closed_form/" + mix.name(), 1e-5,
                    worst / scale,
                    k == MixingKind::arithmetic
                        ? ""
                        : "closed form assumes a symmetric Jacobian; only the "
                          "arithmetic mixing has one");
        }
    }

    // Stationarity and slice optimality at the gradient-flow fixed point
    // (needs alpha < 2 gamma so the stationarity equation has a positive
    // solution).
    {
        const auto& inst = instances[1];
        SpreadParams params;
        params.alpha = 0.3;
        params.beta = 0.3;
        params.gamma = 0.4;
        std::vector<double> yeps(static_cast<size_t>(inst.graph.n), 0.01);
        yeps[0] = yeps[3] = 1.0;
        for (const MixingKind k :
             {MixingKind::arithmetic, MixingKind::harmonic, MixingKind::l2,
              MixingKind::geometric}) {
            const MixingSpec mix = MixingSpec::named(k);
            HyperOperator hyper(inst.tensor, mix);
            const LossParams lp = make_loss_params(params, hyper, yeps);
            const auto fp = gradient_flow_fixed_point(inst.graph, hyper, params,
                                                      lp.y_tilde, 1e-13, 20000);
            auto tt = [&](std::span<const double> x) {
                return loss_theta_tilde(inst.graph, hyper, lp, x);
            };
            const auto grad = finite_diff_gradient(tt, fp.f);
            double gmax = 0.0, fmax = 0.0;
            for (size_t i = 0; i < grad.size(); ++i) {
                gmax = std::max(gmax, std::abs(grad[i]));
                fmax = std::max(fmax, std::abs(fp.f[i]));
            }
            add_leq(rep, "fixed_point/theta_tilde_stationarity/" + mix.name(), 1e-4,
                    gmax / fmax,
                    k == MixingKind::arithmetic
                        ? ""
                        : "nonlinear mixings: the spreading map is not a gradient "
                          "field, so the flow fixed point is not stationary");

            // Slice optimality of the phi-normalized fixed point.
            std::vector<double> fsl = fp.f;
            const double pf = hyper.phi(fsl);
            for (auto& v : fsl) v /= pf;
            const double theta_star = loss_theta(inst.graph, hyper, lp, fsl);
            int wins = 0;
            const int samples = 300;
            std::vector<double> cand(fsl.size());
            for (int s = 0; s < samples; ++s) {
                for (auto& v : cand) v = rng.log_uniform(0.05, 2.0);
                const double pc = hyper.phi(cand);
                for (auto& v : cand) v /= pc;
                wins += theta_star < loss_theta(inst.graph, hyper, lp, cand);
            }
            add(rep, "fixed_point/slice_optimality/" + mix.name(), 1.0,
                static_cast<double>(wins) / samples, wins == samples);
        }
    }

    // Projected-gradient step identity: f - h grad(theta_tilde) equals the
    // unnormalized spreading step with h = gamma (arithmetic mixing).
    {
        const auto& inst = instances[0];
        SpreadParams params;
        params.alpha = 0.3;
        params.beta = 0.3;
        params.gamma = 0.4;
        std::vector<double> yeps(static_cast<size_t>(inst.graph.n), 0.01);
        yeps[2] = 1.0;
        HyperOperator hyper(inst.tensor, MixingSpec::named(MixingKind::arithmetic));
        const LossParams lp = make_loss_params(params, hyper, yeps);
        std::vector<double> f(yeps.size());
        for (auto& v : f) v = rng.log_uniform(0.2, 4.0);
        auto tt = [&](std::span<const double> x) {
            return loss_theta_tilde(inst.graph, hyper, lp, x);
        };
        const auto grad = finite_diff_gradient(tt, f);
        const double h = params.gamma;  // (1 - h)/h = lambda + mu
        const auto sf = apply_normalized_adjacency(inst.graph, f);
        const auto hf = hyper.apply(f);
        double worst = 0.0, scale = 0.0;
        for (size_t i = 0; i < f.size(); ++i) {
            const double euler = f[i] - h * grad[i];
            const double step = 0.5 * params.alpha * hf[i] + params.beta * sf[i] +
                                params.gamma * lp.y_tilde[i];
            scale = std::max(scale, std::abs(step));
            worst = std::max(worst, std::abs(euler - step));
        }
        add_leq(rep, "identity/euler_step_equals_spread_step_arith", 1e-5,
                worst / scale);
    }

    // Standard LS: gradient vanishes at the iterative solution; residual of
    // the linear system is within tolerance.
    {
        const auto& inst = instances[2];
        const double beta = 0.7, gamma = 0.3;
        std::vector<double> y(static_cast<size_t>(inst.graph.n), 0.0);
        for (int q = 0; q < 8; ++q)
            y[static_cast<size_t>(rng.uniform_int(static_cast<uint64_t>(inst.graph.n)))] = 1.0;
        const auto run = standard_ls_run(inst.graph, beta, gamma, y, 1e-12, 4000);
        const auto sf = apply_normalized_adjacency(inst.graph, run.f);
        double resid = 0.0;
        for (size_t i = 0; i < y.size(); ++i)
            resid = std::max(resid, std::abs(run.f[i] - beta * sf[i] - gamma * y[i]));
        add_leq(rep, "standard_ls/linear_system_residual", 1e-10, resid);
        const auto grad =
            standard_ls_loss_gradient(inst.graph, run.f, y, beta / gamma);
        double gmax = 0.0;
        for (const double g : grad) gmax = std::max(gmax, std::abs(g));
        // grad psi = (1 + lambda) f - lambda S f - y vanishes at the solve up
        // to the 1/gamma scaling of the fixed-point residual.
        add_leq(rep, "standard_ls/loss_gradient_at_solution", 1e-9, gmax);
    }

    return rep;
}

std::string validation_to_json(const ValidationReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json j;
        j["name"] = c.name;
        j["tolerance"] = c.tolerance;
        j["observed"] = c.observed;
        j["pass"] = c.pass;
        if (!c.note.empty()) j["note"] = c.note;
        checks.push_back(j);
    }
    nlohmann::json root;
    root["checks"] = checks;
    root["failures"] = report.failures();
    return root.dump(2) + "\n";
}

}  // namespace nhols
