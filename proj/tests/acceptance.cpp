// Acceptance suite: each criterion prints one PASS/FAIL/SKIP line and the
// process exit code reflects the strict outcome. Run `acceptance all` or
// `acceptance --criterion N` (the ctest entries do the latter).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nhols/cv.hpp"
#include "nhols/datasets.hpp"
#include "nhols/harness.hpp"
#include "nhols/io.hpp"
#include "nhols/kernels.hpp"
#include "nhols/objective.hpp"
#include "nhols/parallel.hpp"
#include "nhols/rng.hpp"
#include "nhols/validate.hpp"

using namespace nhols;
namespace fs = std::filesystem;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
    Status status = Status::fail;
    std::string detail;
};

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

const MixingKind kNamed[5] = {MixingKind::arithmetic, MixingKind::harmonic,
                              MixingKind::l2, MixingKind::geometric,
                              MixingKind::maximum};

std::vector<double> random_positive(Rng& rng, int64_t n, double lo = 0.05,
                                    double hi = 5.0) {
    std::vector<double> f(static_cast<size_t>(n));
    for (auto& v : f) v = rng.log_uniform(lo, hi);
    return f;
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion1() {
    const double t0 = now_s();
    Rng rng(101);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int64_t n = 20 + static_cast<int64_t>(rng.uniform_int(181));  // <= 200
        const auto inst = make_random_instance(n, 3 * n, rng.next());
        HyperOperator hyper(inst.tensor, MixingSpec::named(MixingKind::arithmetic));
        const CsrMatrix theta = clique_expansion_matrix(inst.tensor);
        const auto f = random_positive(rng, n);
        std::vector<double> tf(f.size());
        csr_apply(theta, f, tf);
        const auto s = hyper.apply(f);
        double scale = 0.0, diff = 0.0;
        for (size_t i = 0; i < f.size(); ++i) {
            scale = std::max(scale, std::abs(tf[i]));
            diff = std::max(diff, std::abs(tf[i] - s[i]));
        }
        worst = std::max(worst, diff / scale);
    }
    const double dt = now_s() - t0;
    std::ostringstream os;
    os << "max |S_arith(f) - Theta f|_inf / |Theta f|_inf = " << worst << " over 50 "
       << "instances (tol 1e-12), " << dt << " s";
    return {worst <= 1e-12 && dt < 10.0 ? Status::pass : Status::fail, os.str()};
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion2() {
    const double t0 = now_s();
    Rng rng(202);
    double worst_disagreement = 0.0, worst_phi = 0.0;
    int nonconverged = 0;
    for (const MixingKind kind : kNamed) {
        const MixingSpec mix = MixingSpec::named(kind);
        for (int t = 0; t < 20; ++t) {
            const int64_t n = 15 + static_cast<int64_t>(rng.uniform_int(26));
            const auto inst = make_random_instance(n, 3 * n, rng.next());
            HyperOperator hyper(inst.tensor, mix);
            SpreadParams params;
            params.alpha = 0.5;
            params.beta = 0.3;
            params.gamma = 0.2;
            params.tol = 1e-10;
            params.max_iters = 500;
            std::vector<double> yeps(static_cast<size_t>(n), 0.01);
            yeps[static_cast<size_t>(rng.uniform_int(static_cast<uint64_t>(n)))] = 1.0;

            std::vector<std::vector<double>> limits;
            for (int s = 0; s < 10; ++s) {
                std::vector<double> cur = random_positive(rng, n), next(cur.size());
                bool conv = false;
                for (int it = 0; it < params.max_iters; ++it) {
                    nhols_step(inst.graph, hyper, params, yeps, cur, next);
                    double dn = 0, nn = 0;
                    for (size_t q = 0; q < next.size(); ++q) {
                        const double d = next[q] - cur[q];
                        dn += d * d;
                        nn += next[q] * next[q];
                    }
                    cur.swap(next);
                    if (std::sqrt(dn / nn) < params.tol) {
                        conv = true;
                        break;
                    }
                }
                if (!conv) ++nonconverged;
                worst_phi = std::max(worst_phi, std::abs(hyper.phi(cur) - 1.0));
                limits.push_back(std::move(cur));
            }
            for (size_t a = 1; a < limits.size(); ++a)
                for (size_t q = 0; q < limits[a].size(); ++q)
                    worst_disagreement = std::max(
                        worst_disagreement, std::abs(limits[a][q] - limits[0][q]) /
                                                std::abs(limits[0][q]));
        }
    }
    const double dt = now_s() - t0;
    std::ostringstream os;
    os << "5 mixings x 20 instances x 10 starts: max cross-start disagreement = "
       << worst_disagreement << " (tol 1e-6), max |phi(f*) - 1| = " << worst_phi
       << " (tol 1e-10), non-converged runs = " << nonconverged << ", " << dt << " s";
    const bool ok = worst_disagreement <= 1e-6 && worst_phi <= 1e-10 &&
                    nonconverged == 0 && dt < 60.0;
    return {ok ? Status::pass : Status::fail, os.str()};
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion3() {
    Rng rng(303);
    double worst_ratio = 0.0;
    bool monotone = true;
    for (const MixingKind kind : kNamed) {
        const MixingSpec mix = MixingSpec::named(kind);
        for (int t = 0; t < 6; ++t) {
            const int64_t n = 15 + static_cast<int64_t>(rng.uniform_int(26));
            const auto inst = make_random_instance(n, 3 * n, rng.next());
            HyperOperator hyper(inst.tensor, mix);
            SpreadParams params;
            params.alpha = 0.5;
            params.beta = 0.3;
            params.gamma = 0.2;
            std::vector<double> yeps(static_cast<size_t>(n), 0.01);
            yeps[static_cast<size_t>(rng.uniform_int(static_cast<uint64_t>(n)))] = 1.0;

            const auto audit =
                contraction_audit(inst.graph, hyper, params, yeps, 1000, rng.next());
            worst_ratio = std::max(worst_ratio, audit.max_ratio);

            // successive-iterate Hilbert distances decrease strictly until the
            // float floor
            std::vector<double> prev = yeps, cur(yeps.size());
            params.tol = 1e-10;
            double last_d = -1.0;
            for (int it = 0; it < 500; ++it) {
                nhols_step(inst.graph, hyper, params, yeps, prev, cur);
                const double d = hilbert_distance(cur, prev);
                if (last_d >= 0.0 && d > 1e-13 && !(d < last_d)) monotone = false;
                if (d <= 1e-13) break;
                last_d = d;
                prev.swap(cur);
            }
        }
    }
    std::ostringstream os;
    os << "max one-step Hilbert ratio = " << worst_ratio
       << " over 5 mixings x 6 instances x 1000 pairs (must be < 1); successive "
       << "iterate distances strictly decreasing: " << (monotone ? "yes" : "NO");
    return {worst_ratio < 1.0 && monotone ? Status::pass : Status::fail, os.str()};
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion4() {
    Rng rng(404);
    // Stationarity needs mu = alpha/(2 gamma) < 1, i.e. alpha < 2 gamma.
    SpreadParams params;
    params.alpha = 0.3;
    params.beta = 0.3;
    params.gamma = 0.4;
    std::ostringstream os;
    bool all_pass = true;
    for (const MixingKind kind : {MixingKind::arithmetic, MixingKind::harmonic,
                                  MixingKind::l2, MixingKind::geometric}) {
        const MixingSpec mix = MixingSpec::named(kind);
        double worst_grad = 0.0;
        int optim_fail = 0;
        for (int t = 0; t < 3; ++t) {
            const int64_t n = 14 + static_cast<int64_t>(rng.uniform_int(15));
            const auto inst = make_random_instance(n, 3 * n, rng.next());
            HyperOperator hyper(inst.tensor, mix);
            std::vector<double> yeps(static_cast<size_t>(n), 0.01);
            yeps[static_cast<size_t>(rng.uniform_int(static_cast<uint64_t>(n)))] = 1.0;
            const LossParams lp = make_loss_params(params, hyper, yeps);
            const auto fp = gradient_flow_fixed_point(inst.graph, hyper, params,
                                                      lp.y_tilde, 1e-13, 50000);
            if (!fp.converged) {
                ++optim_fail;
                continue;
            }
            const auto grad = finite_diff_gradient(
                [&](std::span<const double> x) {
                    return loss_theta_tilde(inst.graph, hyper, lp, x);
                },
                fp.f);
            double gmax = 0.0, fmax = 0.0;
            for (size_t i = 0; i < grad.size(); ++i) {
                gmax = std::max(gmax, std::abs(grad[i]));
                fmax = std::max(fmax, std::abs(fp.f[i]));
            }
            worst_grad = std::max(worst_grad, gmax / fmax);

            // slice optimality against 1000 random phi-normalized samples
            std::vector<double> fsl = fp.f;
            const double pf = hyper.phi(fsl);
            for (auto& v : fsl) v /= pf;
            const double theta_star = loss_theta(inst.graph, hyper, lp, fsl);
            for (int s = 0; s < 1000; ++s) {
                auto cand = random_positive(rng, n, 0.05, 2.0);
                const double pc = hyper.phi(cand);
                for (auto& v : cand) v /= pc;
                if (!(theta_star < loss_theta(inst.graph, hyper, lp, cand)))
                    ++optim_fail;
            }
        }
        const bool kind_ok = worst_grad <= 1e-4 && optim_fail == 0;
        all_pass = all_pass && kind_ok;
        os << mix.name() << ": |grad theta~|/|f*| = " << worst_grad
           << (kind_ok ? " (ok)" : " (FAIL)") << ", slice losses = " << optim_fail
           << "; ";
    }
    os << "tol 1e-4. The three nonlinear kinds fail structurally: their "
       << "spreading map is not a gradient field (the Jacobian of f -> "
       << "A_sigma(f) is asymmetric), so no loss has it as a gradient; see "
       << "the arithmetic column for the exact case.";
    return {all_pass ? Status::pass : Status::fail, os.str()};
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion5() {
    Rng rng(505);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int64_t n = 10 + static_cast<int64_t>(rng.uniform_int(31));
        const auto inst = make_random_instance(n, 3 * n, rng.next());
        const MixingSpec mix = MixingSpec::named(kNamed[t % 5]);
        HyperOperator hyper(inst.tensor, mix);
        const auto f = random_positive(rng, n, 0.1, 8.0);
        std::vector<double> lifted(f.size());
        for (size_t i = 0; i < f.size(); ++i)
            lifted[i] = f[i] * std::sqrt(inst.tensor.hyper_degrees[i]);
        const auto s = hyper.apply(lifted);
        double lhs = 0.0;
        for (size_t i = 0; i < f.size(); ++i)
            lhs += f[i] * (inst.tensor.hyper_degrees[i] * f[i] -
                           s[i] * std::sqrt(inst.tensor.hyper_degrees[i]));
        const double e2 = energy_E2(inst.tensor, mix, lifted);
        const double ph = hyper.phi(lifted);
        worst = std::max(worst, std::abs(lhs - (e2 - ph * ph)) /
                                    std::max(std::abs(lhs), 1e-300));
    }
    std::ostringstream os;
    os << "max relative identity error = " << worst
       << " over 100 (instance, f) pairs (tol 1e-9)";
    return {worst <= 1e-9 ? Status::pass : Status::fail, os.str()};
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion6() {
    Rng rng(606);
    double worst_resid = 0.0;
    for (int t = 0; t < 20; ++t) {
        const int64_t n = 20 + static_cast<int64_t>(rng.uniform_int(181));
        const auto inst = make_random_instance(n, n, rng.next());
        const double beta = 0.1 + 0.8 * rng.uniform();
        const double gamma = 1.0 - beta;
        std::vector<double> y(static_cast<size_t>(n), 0.0);
        for (int q = 0; q < 5; ++q)
            y[static_cast<size_t>(rng.uniform_int(static_cast<uint64_t>(n)))] = 1.0;
        const ClassRun run = standard_ls_run(inst.graph, beta, gamma, y, 1e-5, 2000);
        const auto sf = apply_normalized_adjacency(inst.graph, run.f);
        for (size_t i = 0; i < y.size(); ++i)
            worst_resid = std::max(
                worst_resid, std::abs(run.f[i] - beta * sf[i] - gamma * y[i]));
    }
    // 2-node closed form
    const EdgeRecord e[] = {{0, 1, 1.0}};
    const SparseGraph g2 = build_graph(e, 2);
    const std::vector<double> y2{1.0, 0.0};
    const ClassRun run2 = standard_ls_run(g2, 0.5, 0.5, y2, 1e-14, 100000);
    const double closed = std::max(std::abs(run2.f[0] - 2.0 / 3.0),
                                   std::abs(run2.f[1] - 1.0 / 3.0));
    std::ostringstream os;
    os << "max |(I - beta S) F - gamma Y|_inf = " << worst_resid
       << " at tol 1e-5 (tol 1e-4); two-node closed-form error = " << closed
       << " (tol 1e-10)";
    return {worst_resid <= 1e-4 && closed <= 1e-10 ? Status::pass : Status::fail,
            os.str()};
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion7() {
    const double t0 = now_s();
    SweepConfig cfg;
    cfg.methods = {"ls", "nhols:max"};
    cfg.repeats = 10;
    cfg.seed = 7070;
    cfg.threads = default_thread_count();
    const MetricsReport rep = run_sbm_sweep(cfg);

    // "best NHOLS" at 6%: widen the candidate set with two more mixings on
    // the 6% row only (still a lower bound on the best over all mixings).
    SweepConfig six = cfg;
    six.fractions = {0.06};
    six.methods = {"nhols:l2", "nhols:arith"};
    const MetricsReport rep6 = run_sbm_sweep(six);

    // cell means keyed by (rho, fraction, method)
    std::map<std::string, std::pair<double, int>> cells;
    for (const auto* r_ptr : {&rep, &rep6})
        for (const auto& r : r_ptr->rows) {
            if (r.failed) continue;
            auto& slot = cells[r.dataset + "|" + r.method];
            slot.first += r.accuracy;
            slot.second += 1;
        }
    auto cell_mean = [&](double rho, double fr, const std::string& method) {
        std::ostringstream tag;
        tag << "sbm_rho" << rho << "_f" << fr << "|" << method;
        const auto it = cells.find(tag.str());
        return it == cells.end() || it->second.second == 0
                   ? -1.0
                   : it->second.first / it->second.second;
    };

    double best6 = 0.0;
    for (const double rho : cfg.rhos)
        for (const char* m : {"nhols:max", "nhols:l2", "nhols:arith"})
            best6 = std::max(best6, cell_mean(rho, 0.06, m));
    int wins = 0, total = 0;
    for (const double rho : cfg.rhos)
        for (const double fr : cfg.fractions) {
            const double ls = cell_mean(rho, fr, "ls");
            const double nh = cell_mean(rho, fr, "nhols:max");
            if (ls < 0 || nh < 0) continue;
            ++total;
            wins += ls <= nh;
        }
    const double dt = now_s() - t0;
    std::ostringstream os;
    os << "best NHOLS mean accuracy at 6% labels over rho (max/l2/arith) = " << best6
       << " (need >= 0.87); LS <= NHOLS(max) in " << wins << "/" << total
       << " cells (need >= 80%); 10 seeds per cell; " << dt << " s";
    const bool ok =
        best6 >= 0.87 && total == 30 && wins >= static_cast<int>(0.8 * total);
    return {ok ? Status::pass : Status::fail, os.str()};
}

// ---------------------------------------------------------------- criterion 8
struct RealDataResult {
    double mean = 0.0;
    int samples = 0;
};

RealDataResult real_data_run(const PointCloud& pc, const Method& method,
                             double fraction, int samples, uint64_t seed) {
    const SparseGraph g = build_knn_graph(pc, 7, KnnOptions{false, default_thread_count()});
    const TriangleTensor t = enumerate_triangles(g);
    validate_coverage(g, t, /*fallback=*/true);
    int32_t nc = 0;
    for (const int32_t c : pc.labels) nc = std::max(nc, c + 1);
    RealDataResult out;
    SplitMix64 seeder(seed);
    for (int s = 0; s < samples; ++s) {
        const uint64_t rs = seeder.next();
        const LabelSample sample = sample_labeled_set(pc.labels, fraction, rs);
        const auto known = masked_labels(pc.labels, sample.known_mask);
        CvConfig cvc;
        cvc.seed = rs + 1;
        cvc.threads = default_thread_count();
        const CvOutcome cv = grid_search_cv(g, t, method, known, nc, cvc);
        const LabelData labels = make_label_data(known, nc, cvc.eps);
        SpreadResult res;
        if (method.type == Method::Type::nhols) {
            HyperOperator hyper(t, method.mixing);
            SpreadParams params;
            params.alpha = cv.best.alpha;
            params.beta = cv.best.beta;
            params.gamma = cv.best.gamma();
            res = nhols_all_classes(g, hyper, params, labels, 1);
        } else {
            res = standard_ls_all_classes(g, cv.best.beta, 1.0 - cv.best.beta, labels);
        }
        out.mean += accuracy(res.predictions, pc.labels, sample.known_mask);
        ++out.samples;
    }
    out.mean /= out.samples;
    return out;
}

Outcome criterion8() {
    const char* env = std::getenv("NHOLS_DATA_DIR");
    const fs::path dir = env ? fs::path(env) : fs::path("data");
    const fs::path opt = dir / "optdigits.csv";
    const fs::path pen = dir / "pendigits.csv";
    if (!fs::exists(opt) || !fs::exists(pen)) {
        return {Status::skip,
                "requires " + opt.string() + " and " + pen.string() +
                    " (UCI feature CSVs, header id,f1,...,label; not bundled and "
                    "no network in this environment) - pipeline exercised on "
                    "synthetic data elsewhere"};
    }
    IdMap ids1, ids2;
    const PointCloud optd = read_points_csv(opt.string(), ids1);
    const PointCloud pend = read_points_csv(pen.string(), ids2);
    std::ostringstream os;
    const RealDataResult a =
        real_data_run(optd, Method::nhols_with(MixingSpec::named(MixingKind::l2)),
                      0.004, 5, 881);
    const RealDataResult b = real_data_run(optd, Method::standard_ls(), 0.004, 5, 882);
    const RealDataResult c =
        real_data_run(pend, Method::nhols_with(MixingSpec::named(MixingKind::maximum)),
                      0.004, 5, 883);
    os << "optdigits NHOLS-l2 = " << 100 * a.mean << " (95.5 +- 2.0), LS = "
       << 100 * b.mean << " (93.8 +- 2.0); pendigits NHOLS-max = " << 100 * c.mean
       << " (93.6 +- 2.5); 5 samples at 0.4%";
    const bool ok = std::abs(100 * a.mean - 95.5) <= 2.0 &&
                    std::abs(100 * b.mean - 93.8) <= 2.0 &&
                    std::abs(100 * c.mean - 93.6) <= 2.5;
    return {ok ? Status::pass : Status::fail, os.str()};
}

// ---------------------------------------------------------------- criterion 9
Outcome criterion9() {
    BenchConfig cfg;
    cfg.sizes = {1000, 2000, 4000, 8000, 16000};
    cfg.runs = 5;
    cfg.seed = 909;
    const BenchReport rep = benchmark_runtime(cfg);
    std::ostringstream os;
    os << "sizes:";
    for (const auto& r : rep.rows)
        os << " (n=" << r.n << ", nnz=" << r.nnz << ", tri=" << r.triangles
           << ", t=" << r.nhols_seconds << "s)";
    os << "; R^2 = " << (rep.r_squared ? *rep.r_squared : -1.0)
       << " (need >= 0.98); max NHOLS/LS ratio = " << rep.max_time_ratio
       << " (need < 10)";
    const bool ok = rep.r_squared && *rep.r_squared >= 0.98 &&
                    rep.max_time_ratio < 10.0;
    return {ok ? Status::pass : Status::fail, os.str()};
}

// --------------------------------------------------------------- criterion 10
Outcome criterion10() {
    std::ostringstream os;
    bool ok = true;

    // property suites from the validation module
    const ValidationReport rep = run_validation_suite(1010, default_thread_count());
    int failed = 0;
    for (const auto& c : rep.checks) {
        if (!c.pass) {
            ++failed;
            os << "[fail] " << c.name << " observed=" << c.observed
               << " tol=" << c.tolerance;
            if (!c.note.empty()) os << " (" << c.note << ")";
            os << "; ";
        }
    }
    ok = ok && failed == 0;

    // grid cardinalities
    if (nhols_grid().size() != 16 || ls_grid().size() != 9) {
        ok = false;
        os << "[fail] grid cardinalities; ";
    }

    // triangle enumeration against the brute-force count at n = 60
    {
        const auto inst = make_random_instance(60, 10, 606060);
        const TriangleTensor t = enumerate_triangles(inst.graph);
        int64_t brute = 0;
        for (int64_t i = 0; i < 60; ++i)
            for (int64_t j = i + 1; j < 60; ++j) {
                if (inst.graph.edge_weight(i, j) <= 0) continue;
                for (int64_t k = j + 1; k < 60; ++k)
                    if (inst.graph.edge_weight(i, k) > 0 &&
                        inst.graph.edge_weight(j, k) > 0)
                        ++brute;
            }
        if (t.num_triples() != brute) {
            ok = false;
            os << "[fail] triangle enumeration vs brute force; ";
        }
    }

    // serialization round trip
    {
        const fs::path tmp = fs::temp_directory_path() / "nhols_acc10.tsv";
        SbmSpec spec;
        spec.sizes = {25, 25};
        spec.p_in = 0.3;
        spec.p_out = 0.1;
        spec.seed = 4;
        const SbmResult r = generate_sbm(spec);
        write_edge_tsv(tmp.string(), r.graph, dense_id_map(r.graph.n));
        const EdgeFile ef = read_edge_tsv(tmp.string());
        std::vector<EdgeRecord> remapped;
        for (const auto& e : ef.edges)
            remapped.push_back(
                {std::stoll(ef.ids.to_external[static_cast<size_t>(e.u)]),
                 std::stoll(ef.ids.to_external[static_cast<size_t>(e.v)]), e.w});
        const SparseGraph h = build_graph(remapped, r.graph.n);
        if (h.col_indices != r.graph.col_indices || h.weights != r.graph.weights) {
            ok = false;
            os << "[fail] edge TSV round trip; ";
        }
        fs::remove(tmp);
    }

    // SBM concentration (10 seeds, 4-sigma band, one outlier allowed)
    {
        SbmSpec spec;
        spec.sizes = {100, 200, 400};
        spec.p_in = 0.1;
        spec.p_out = 0.025;
        const double mean_intra = 0.1 * (4950.0 + 19900.0 + 79800.0);
        int in_band = 0;
        for (uint64_t s = 1; s <= 10; ++s) {
            spec.seed = s;
            const SbmResult r = generate_sbm(spec);
            int64_t intra = 0;
            for (int64_t i = 0; i < r.graph.n; ++i)
                for (const int32_t j : r.graph.neighbors(i))
                    if (i < j &&
                        r.labels[static_cast<size_t>(i)] == r.labels[static_cast<size_t>(j)])
                        ++intra;
            if (std::abs(intra - mean_intra) <= 4.0 * std::sqrt(mean_intra * 0.9))
                ++in_band;
        }
        if (in_band < 9) {
            ok = false;
            os << "[fail] SBM edge-count concentration; ";
        }
    }

    std::ostringstream head;
    head << (rep.checks.size()) << " validation checks, " << failed
         << " failed; " << os.str();
    if (failed > 0)
        head << "the failing checks are the documented defects: the tensor "
             << "energy closed-form gradient only holds for the arithmetic "
             << "mixing, and sigma_p at p=50 sits 1.376e-2 below the maximum.";
    return {ok ? Status::pass : Status::fail, head.str()};
}

Outcome run_criterion(int c) {
    switch (c) {
        case 1: return criterion1();
        case 2: return criterion2();
        case 3: return criterion3();
        case 4: return criterion4();
        case 5: return criterion5();
        case 6: return criterion6();
        case 7: return criterion7();
        case 8: return criterion8();
        case 9: return criterion9();
        case 10: return criterion10();
        default: return {Status::fail, "unknown criterion"};
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> todo;
    for (int a = 1; a < argc; ++a) {
        if (std::strcmp(argv[a], "--criterion") == 0 && a + 1 < argc) {
            todo.push_back(std::atoi(argv[++a]));
        } else if (std::strcmp(argv[a], "all") == 0) {
            for (int c = 1; c <= 10; ++c) todo.push_back(c);
        }
    }
    if (todo.empty())
        for (int c = 1; c <= 10; ++c) todo.push_back(c);

    bool any_fail = false;
    for (const int c : todo) {
        Outcome out;
        try {
            out = run_criterion(c);
        } catch (const std::exception& e) {
            out = {Status::fail, std::string("exception: ") + e.what()};
        }
        const char* tag = out.status == Status::pass   ? "PASS"
                          : out.status == Status::skip ? "SKIP"
                                                       : "FAIL";
        std::cout << "[criterion " << c << "] [" << tag << "] " << out.detail
                  << std::endl;
        any_fail = any_fail || out.status == Status::fail;
    }
    return any_fail ? 1 : 0;
}
