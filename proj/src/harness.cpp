#include "nhols/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nhols/error.hpp"
#include "nhols/objective.hpp"
#include "nhols/parallel.hpp"
#include "nhols/rng.hpp"

namespace nhols {

using nlohmann::json;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

int max_iterations(const SpreadResult& r) {
    int m = 0;
    for (const auto& c : r.per_class) m = std::max(m, c.iterations);
    return m;
}

struct FinalRun {
    SpreadResult result;
    GridPoint point;
    double seconds = 0.0;
};

FinalRun cv_and_spread(const SparseGraph& g, const TriangleTensor& tensor,
                       const Method& method, std::span<const int32_t> known,
                       int32_t num_classes, const CvConfig& cvc, bool skip_cv,
                       GridPoint fixed) {
    GridPoint chosen = fixed;
    if (!skip_cv) {
        const CvOutcome cv = grid_search_cv(g, tensor, method, known, num_classes, cvc);
        chosen = cv.best;
    }
    const LabelData labels = make_label_data(known, num_classes, cvc.eps);
    FinalRun out;
    out.point = chosen;
    const double t0 = now_seconds();
    if (method.type == Method::Type::nhols) {
        HyperOperator hyper(tensor, method.mixing);
        SpreadParams params;
        params.alpha = chosen.alpha;
        params.beta = chosen.beta;
        params.gamma = chosen.gamma();
        params.eps = cvc.eps;
        params.tol = cvc.tol;
        params.max_iters = cvc.max_iters;
        out.result = nhols_all_classes(g, hyper, params, labels, cvc.threads);
    } else {
        out.result = standard_ls_all_classes(g, chosen.beta, 1.0 - chosen.beta, labels,
                                             cvc.tol, cvc.max_iters, cvc.threads);
    }
    out.seconds = now_seconds() - t0;
    return out;
}

}  // namespace

double MetricsReport::mean_accuracy(const std::string& method, double fraction) const {
    double sum = 0.0;
    int64_t cnt = 0;
    for (const auto& r : rows) {
        if (r.failed || r.method != method ||
            std::abs(r.fraction - fraction) > 1e-12)
            continue;
        sum += r.accuracy;
        ++cnt;
    }
    return cnt ? sum / static_cast<double>(cnt)
               : std::numeric_limits<double>::quiet_NaN();
}

MetricsReport run_sbm_sweep(const SweepConfig& cfg) {
    MetricsReport report;
    std::vector<Method> methods;
    for (const auto& m : cfg.methods) methods.push_back(parse_method(m));

    struct Cell {
        double rho, fraction;
        int repeat;
    };
    std::vector<Cell> cells;
    for (const double rho : cfg.rhos)
        for (const double fr : cfg.fractions)
            for (int r = 0; r < cfg.repeats; ++r) cells.push_back({rho, fr, r});

    report.rows.resize(cells.size() * methods.size());
    // Cells are independent jobs; methods within a cell share the instance.
    parallel_for(static_cast<int64_t>(cells.size()), cfg.threads, [&](int64_t ci) {
        const Cell& cell = cells[static_cast<size_t>(ci)];
        const size_t row0 = static_cast<size_t>(ci) * methods.size();
        SplitMix64 mix(cfg.seed);
        // Distinct deterministic seed per (rho, fraction, repeat).
        const uint64_t cell_seed =
            mix.next() ^ (0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(ci + 1));
        std::ostringstream tag;
        tag << "sbm_rho" << cell.rho << "_f" << cell.fraction;
        try {
            SbmSpec spec;
            spec.sizes = cfg.sizes;
            spec.p_in = cfg.p_in;
            spec.p_out = cfg.p_in / cell.rho;
            spec.seed = cell_seed;
            const SbmResult sbm = generate_sbm(spec);
            const TriangleTensor tensor = enumerate_triangles(sbm.graph);
            const LabelSample sample =
                sample_labeled_set(sbm.labels, cell.fraction, cell_seed + 1);
            const auto known = masked_labels(sbm.labels, sample.known_mask);
            const int32_t nc = static_cast<int32_t>(cfg.sizes.size());
            for (size_t mi = 0; mi < methods.size(); ++mi) {
                MetricsRow& row = report.rows[row0 + mi];
                row.dataset = tag.str();
                row.method = methods[mi].name();
                row.fraction = cell.fraction;
                row.seed = cell_seed;
                try {
                    CvConfig cvc;
                    cvc.folds = cfg.folds;
                    cvc.seed = cell_seed + 2;
                    cvc.eps = cfg.eps;
                    cvc.tol = cfg.tol;
                    cvc.max_iters = cfg.max_iters;
                    cvc.threads = 1;
                    const FinalRun fr = cv_and_spread(sbm.graph, tensor, methods[mi],
                                                      known, nc, cvc, false, {});
                    row.accuracy =
                        accuracy(fr.result.predictions, sbm.labels, sample.known_mask);
                    row.alpha = fr.point.alpha;
                    row.beta = fr.point.beta;
                    row.iterations = max_iterations(fr.result);
                    row.wall_seconds = fr.seconds;
                } catch (const std::exception& e) {
                    row.failed = true;
                    row.error = e.what();
                }
            }
        } catch (const std::exception& e) {
            for (size_t mi = 0; mi < methods.size(); ++mi) {
                MetricsRow& row = report.rows[row0 + mi];
                row.dataset = tag.str();
                row.method = methods[mi].name();
                row.fraction = cell.fraction;
                row.seed = cell_seed;
                row.failed = true;
                row.error = e.what();
            }
        }
    });
    return report;
}

BenchReport benchmark_runtime(const BenchConfig& cfg) {
    BenchReport report;
    const MixingSpec mix = parse_mixing(cfg.mixing);
    for (const int64_t n : cfg.sizes) {
        SbmSpec spec;
        const int64_t third = n / 3;
        spec.sizes = {third, third, n - 2 * third};
        const double logn = std::log(static_cast<double>(n));
        spec.p_in = std::min(1.0, logn * logn / static_cast<double>(n));
        spec.p_out = spec.p_in / 3.0;
        spec.seed = cfg.seed + static_cast<uint64_t>(n);
        const SbmResult sbm = generate_sbm(spec);
        const TriangleTensor tensor = enumerate_triangles(sbm.graph);
        // Timing needs every node covered; fall back rather than reject.
        validate_coverage(sbm.graph, tensor, /*fallback=*/true);
        HyperOperator hyper(tensor, mix);

        const LabelSample sample = sample_labeled_set(sbm.labels, 0.06, spec.seed + 1);
        const auto known = masked_labels(sbm.labels, sample.known_mask);
        const LabelData labels = make_label_data(known, 3, 0.01);

        SpreadParams params;
        params.alpha = cfg.alpha;
        params.beta = cfg.beta;
        params.gamma = 1.0 - cfg.alpha - cfg.beta;
        params.tol = cfg.tol;
        params.max_iters = cfg.max_iters;

        BenchRow row;
        row.n = n;
        row.nnz = sbm.graph.nnz();
        row.triangles = tensor.num_triples();

        std::vector<double> tn, tl;
        for (int r = 0; r <= cfg.runs; ++r) {  // first run is warmup
            double t0 = now_seconds();
            const SpreadResult rn = nhols_all_classes(sbm.graph, hyper, params, labels, 1);
            const double dn = now_seconds() - t0;
            t0 = now_seconds();
            const SpreadResult rl = standard_ls_all_classes(
                sbm.graph, cfg.ls_beta, 1.0 - cfg.ls_beta, labels, cfg.tol,
                cfg.max_iters, 1);
            const double dl = now_seconds() - t0;
            if (r == 0) {
                row.nhols_iterations = max_iterations(rn);
                row.ls_iterations = max_iterations(rl);
                continue;
            }
            tn.push_back(dn);
            tl.push_back(dl);
        }
        std::sort(tn.begin(), tn.end());
        std::sort(tl.begin(), tl.end());
        row.nhols_seconds = tn[tn.size() / 2];
        row.ls_seconds = tl[tl.size() / 2];
        report.max_time_ratio =
            std::max(report.max_time_ratio, row.nhols_seconds / row.ls_seconds);
        report.rows.push_back(row);
    }

    if (report.rows.size() >= 2) {
        // R^2 of time ~ a + b * (nnz + 3 * triangles).
        const size_t m = report.rows.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& r : report.rows) {
            const double x = static_cast<double>(r.nnz + 3 * r.triangles);
            sx += x;
            sy += r.nhols_seconds;
            sxx += x * x;
            sxy += x * r.nhols_seconds;
        }
        const double mx = sx / m, my = sy / m;
        const double b = (sxy - m * mx * my) / (sxx - m * mx * mx);
        const double a = my - b * mx;
        double ss_res = 0, ss_tot = 0;
        for (const auto& r : report.rows) {
            const double x = static_cast<double>(r.nnz + 3 * r.triangles);
            const double e = r.nhols_seconds - (a + b * x);
            ss_res += e * e;
            const double d = r.nhols_seconds - my;
            ss_tot += d * d;
        }
        report.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
    return report;
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("manifest '" + path + "': " + e.what());
    }
    Manifest m;
    auto get = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("name", m.name);
    get("points_csv", m.points_csv);
    get("edges_tsv", m.edges_tsv);
    get("triangles_tsv", m.triangles_tsv);
    get("labels_csv", m.labels_csv);
    get("k", m.k);
    get("seed", m.seed);
    get("fractions", m.fractions);
    get("methods", m.methods);
    get("repeats", m.repeats);
    get("folds", m.folds);
    get("eps", m.eps);
    get("tol", m.tol);
    get("max_iters", m.max_iters);
    get("fallback_dangling", m.fallback_dangling);
    get("skip_cv", m.skip_cv);
    get("alpha", m.alpha);
    get("beta", m.beta);
    get("threads", m.threads);
    get("out_dir", m.out_dir);
    if (m.points_csv.empty() == m.edges_tsv.empty())
        throw ConfigError("manifest must set exactly one of points_csv | edges_tsv");
    if (!m.edges_tsv.empty() && m.labels_csv.empty())
        throw ConfigError("edges_tsv input requires labels_csv");
    for (const auto& p : {m.points_csv, m.edges_tsv, m.triangles_tsv, m.labels_csv})
        if (!p.empty() && !std::filesystem::exists(p))
            throw ConfigError("manifest input file not found: " + p);
    return m;
}

MetricsReport run_experiment(const Manifest& m) {
    namespace fs = std::filesystem;
    fs::create_directories(m.out_dir);

    IdMap ids;
    SparseGraph graph;
    TriangleTensor tensor;
    std::vector<int32_t> truth;

    if (!m.points_csv.empty()) {
        const PointCloud pc = read_points_csv(m.points_csv, ids);
        if (!pc.has_labels()) {
            if (m.labels_csv.empty())
                throw ConfigError("point cloud without labels needs labels_csv");
        }
        GraphOptions gopt;
        KnnOptions kopt;
        kopt.threads = m.threads;
        graph = build_knn_graph(pc, m.k, kopt);
        truth = pc.has_labels() ? pc.labels : read_labels_csv(m.labels_csv, ids).labels;
    } else {
        EdgeFile ef = read_edge_tsv(m.edges_tsv);
        ids = ef.ids;
        if (!m.triangles_tsv.empty()) {
            // triangles may reference only ids present in the edge file
            TriangleFile tf = read_triangle_tsv(m.triangles_tsv, ids);
            graph = build_graph(ef.edges, ids.size());
            tensor = build_triangle_tensor(tf.triples, ids.size());
        } else {
            graph = build_graph(ef.edges, ids.size());
        }
        truth = read_labels_csv(m.labels_csv, ids).labels;
    }
    if (tensor.n == 0) tensor = enumerate_triangles(graph);
    if (static_cast<int64_t>(truth.size()) != graph.n)
        throw ShapeError("label file does not cover the node set");
    for (const int32_t c : truth)
        if (c < 0) throw InvalidLabels("experiment needs ground truth for every node");

    validate_coverage(graph, tensor, m.fallback_dangling);

    int32_t num_classes = 0;
    for (const int32_t c : truth) num_classes = std::max(num_classes, c + 1);

    std::vector<Method> methods;
    for (const auto& s : m.methods) methods.push_back(parse_method(s));

    MetricsReport report;
    SplitMix64 seeder(m.seed);
    bool first_diag = true;
    for (const double fraction : m.fractions) {
        for (int rep = 0; rep < m.repeats; ++rep) {
            const uint64_t rep_seed = seeder.next();
            const LabelSample sample = sample_labeled_set(truth, fraction, rep_seed);
            const auto known = masked_labels(truth, sample.known_mask);
            for (const Method& method : methods) {
                MetricsRow row;
                row.dataset = m.name;
                row.method = method.name();
                row.fraction = fraction;
                row.seed = rep_seed;
                try {
                    CvConfig cvc;
                    cvc.folds = m.folds;
                    cvc.seed = rep_seed + 1;
                    cvc.eps = m.eps;
                    cvc.tol = m.tol;
                    cvc.max_iters = m.max_iters;
                    cvc.threads = m.threads;
                    const FinalRun fr =
                        cv_and_spread(graph, tensor, method, known, num_classes, cvc,
                                      m.skip_cv, {m.alpha, m.beta});
                    row.accuracy =
                        accuracy(fr.result.predictions, truth, sample.known_mask);
                    row.alpha = fr.point.alpha;
                    row.beta = fr.point.beta;
                    row.iterations = max_iterations(fr.result);
                    row.wall_seconds = fr.seconds;
                    if (first_diag) {
                        write_predictions_csv(
                            (fs::path(m.out_dir) / "predictions.csv").string(),
                            fr.result.predictions, ids);
                        write_diagnostics_csv(
                            (fs::path(m.out_dir) / "diagnostics.csv").string(),
                            fr.result);
                        first_diag = false;
                    }
                } catch (const std::exception& e) {
                    row.failed = true;
                    row.error = std::string("spread stage: ") + e.what();
                }
                report.rows.push_back(row);
            }
        }
    }
    write_id_map_csv((fs::path(m.out_dir) / "id_map.csv").string(), ids);
    write_metrics_json((fs::path(m.out_dir) / "metrics.json").string(), report);
    write_timings_csv((fs::path(m.out_dir) / "timings.csv").string(), report);
    return report;
}

std::string metrics_to_json(const MetricsReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json row;
        row["dataset"] = r.dataset;
        row["method"] = r.method;
        row["fraction"] = r.fraction;
        row["seed"] = r.seed;
        if (r.failed) {
            row["error"] = r.error;
        } else {
            row["accuracy"] = r.accuracy;
            row["alpha"] = r.alpha;
            row["beta"] = r.beta;
            row["iterations"] = r.iterations;
        }
        rows.push_back(row);
    }
    // Wall times live in timings.csv; metrics stay byte-identical across
    // reruns of the same manifest.
    json root;
    root["rows"] = rows;
    return root.dump(2) + "\n";
}

void write_metrics_json(const std::string& path, const MetricsReport& report) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << metrics_to_json(report);
}

void write_timings_csv(const std::string& path, const MetricsReport& report) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << "dataset,method,fraction,seed,wall_seconds\n";
    out.precision(6);
    for (const auto& r : report.rows)
        out << r.dataset << ',' << r.method << ',' << r.fraction << ',' << r.seed
            << ',' << r.wall_seconds << '\n';
}

void write_diagnostics_csv(const std::string& path, const SpreadResult& result) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << "class,iter,rel_change,phi_g\n";
    out.precision(17);
    for (size_t c = 0; c < result.per_class.size(); ++c) {
        const auto& run = result.per_class[c];
        for (size_t it = 0; it < run.rel_change_history.size(); ++it) {
            out << c << ',' << (it + 1) << ',' << run.rel_change_history[it] << ',';
            if (it < run.phi_history.size())
                out << run.phi_history[it];
            else
                out << "";  // standard LS has no phi
            out << '\n';
        }
    }
}

}  // namespace nhols
