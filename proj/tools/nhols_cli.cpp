// Command-line front end: dataset generation, graph building, triangle
// enumeration, spreading, cross-validation, the SBM sweep, the runtime
// benchmark, and the numerical validation suite.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>
#include <json.hpp>

#include "nhols/datasets.hpp"
#include "nhols/harness.hpp"
#include "nhols/io.hpp"
#include "nhols/kernels.hpp"
#include "nhols/objective.hpp"
#include "nhols/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string mixing = "arith";
    double alpha = 0.5, beta = 0.3, gamma = 0.2;
    double eps = 0.01;
    double tol = 1e-5;
    int max_iters = 40;
    uint64_t seed = 1;
    bool fallback_dangling = false;
    int threads = 1;
    std::string kernel = "auto";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_params = true) {
    cmd->add_option("--mixing", o.mixing, "arith|harm|l2|geom|max|pmean:<p>");
    if (with_params) {
        cmd->add_option("--alpha", o.alpha, "tensor weight");
        cmd->add_option("--beta", o.beta, "graph weight");
        cmd->add_option("--gamma", o.gamma, "anchor weight");
    }
    cmd->add_option("--eps", o.eps, "label smoothing (default 0.01)");
    cmd->add_option("--tol", o.tol, "stopping tolerance (default 1e-5)");
    cmd->add_option("--max-iters", o.max_iters, "iteration cap (default 40)");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_flag("--fallback-dangling", o.fallback_dangling,
                  "zero-contribution fallback for nodes outside every triangle");
    cmd->add_option("--threads", o.threads, "worker threads (default 1)");
    cmd->add_option("--kernel", o.kernel, "scalar|avx2|auto kernel backend");
}

void apply_kernel_choice(const std::string& kernel) {
    if (kernel == "auto" || kernel.empty()) return;
    if (kernel == "scalar")
        nhols::kernels::set_backend(nhols::kernels::Backend::scalar);
    else if (kernel == "avx2")
        nhols::kernels::set_backend(nhols::kernels::Backend::avx2);
    else
        throw nhols::InvalidParam("--kernel must be scalar|avx2|auto");
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::string cur;
    std::istringstream iss(csv);
    while (std::getline(iss, cur, ',')) out.push_back(std::stod(cur));
    return out;
}

std::vector<int64_t> parse_int_list(const std::string& csv) {
    std::vector<int64_t> out;
    for (const double v : parse_list(csv)) out.push_back(static_cast<int64_t>(v));
    return out;
}

struct LoadedDataset {
    nhols::IdMap ids;
    nhols::SparseGraph graph;
    nhols::TriangleTensor tensor;
    std::vector<int32_t> truth;
};

LoadedDataset load_graph_dataset(const std::string& edges, const std::string& triangles,
                                 const std::string& labels, bool need_tensor) {
    LoadedDataset ds;
    nhols::EdgeFile ef = nhols::read_edge_tsv(edges);
    ds.ids = ef.ids;
    std::vector<nhols::TripleRecord> triples;
    if (!triangles.empty())
        triples = nhols::read_triangle_tsv(triangles, ds.ids).triples;
    ds.graph = nhols::build_graph(ef.edges, ds.ids.size());
    if (!triangles.empty())
        ds.tensor = nhols::build_triangle_tensor(triples, ds.ids.size());
    else if (need_tensor)
        ds.tensor = nhols::enumerate_triangles(ds.graph);
    if (!labels.empty()) ds.truth = nhols::read_labels_csv(labels, ds.ids).labels;
    return ds;
}

int cmd_generate_sbm(const std::string& sizes_csv, double p_in, double p_out,
                     double rho, uint64_t seed, const std::string& out_edges,
                     const std::string& out_labels) {
    nhols::SbmSpec spec;
    spec.sizes = parse_int_list(sizes_csv);
    spec.p_in = p_in;
    spec.p_out = rho > 0 ? p_in / rho : p_out;
    spec.seed = seed;
    const nhols::SbmResult r = nhols::generate_sbm(spec);
    const nhols::IdMap ids = nhols::dense_id_map(r.graph.n);
    nhols::write_edge_tsv(out_edges, r.graph, ids);
    if (!out_labels.empty()) nhols::write_labels_csv(out_labels, r.labels, ids);
    std::cout << "n=" << r.graph.n << " edges=" << r.graph.nnz() / 2
              << " seed_used=" << r.seed_used << (r.resampled ? " (resampled)" : "")
              << "\n";
    return 0;
}

int cmd_build_knn(const std::string& points, int k, bool mutual, int threads,
                  const std::string& out_edges, const std::string& out_labels,
                  const std::string& out_idmap) {
    nhols::IdMap ids;
    const nhols::PointCloud pc = nhols::read_points_csv(points, ids);
    nhols::KnnOptions opt;
    opt.mutual = mutual;
    opt.threads = threads;
    const nhols::SparseGraph g = nhols::build_knn_graph(pc, k, opt);
    nhols::write_edge_tsv(out_edges, g, ids);
    if (!out_labels.empty() && pc.has_labels())
        nhols::write_labels_csv(out_labels, pc.labels, ids);
    if (!out_idmap.empty()) nhols::write_id_map_csv(out_idmap, ids);
    std::cout << "n=" << g.n << " edges=" << g.nnz() / 2 << "\n";
    return 0;
}

int cmd_triangles(const std::string& edges, const std::string& weighting,
                  const std::string& out_triangles) {
    LoadedDataset ds = load_graph_dataset(edges, "", "", false);
    nhols::TriangleWeighting w = nhols::TriangleWeighting::unit;
    if (weighting == "product") w = nhols::TriangleWeighting::edge_product;
    else if (weighting == "min") w = nhols::TriangleWeighting::edge_min;
    else if (weighting != "unit")
        throw nhols::InvalidParam("--weighting must be unit|product|min");
    const nhols::TriangleTensor t = nhols::enumerate_triangles(ds.graph, w);
    nhols::write_triangle_tsv(out_triangles, t, ds.ids);
    std::cout << "triangles=" << t.num_triples() << "\n";
    return 0;
}

int cmd_spread(const CommonOpts& o, const std::string& edges,
               const std::string& triangles, const std::string& labels,
               const std::string& known, double fraction, const std::string& method,
               const std::string& out_pred, const std::string& out_metrics,
               const std::string& out_diag) {
    const nhols::Method m = nhols::parse_method(method);
    LoadedDataset ds = load_graph_dataset(edges, triangles, labels,
                                          m.type == nhols::Method::Type::nhols);
    if (ds.truth.empty()) throw nhols::ConfigError("spread requires --labels");

    int32_t num_classes = 0;
    for (const int32_t c : ds.truth) num_classes = std::max(num_classes, c + 1);

    std::vector<int32_t> known_class;
    std::vector<uint8_t> mask;
    if (!known.empty()) {
        known_class = nhols::read_labels_csv(known, ds.ids).labels;
        mask.assign(known_class.size(), 0);
        for (size_t i = 0; i < known_class.size(); ++i) mask[i] = known_class[i] >= 0;
    } else {
        const auto sample = nhols::sample_labeled_set(ds.truth, fraction, o.seed);
        mask = sample.known_mask;
        known_class = nhols::masked_labels(ds.truth, mask);
    }

    if (m.type == nhols::Method::Type::nhols)
        nhols::validate_coverage(ds.graph, ds.tensor, o.fallback_dangling);

    const nhols::LabelData ld = nhols::make_label_data(known_class, num_classes, o.eps);
    nhols::SpreadResult res;
    if (m.type == nhols::Method::Type::nhols) {
        nhols::HyperOperator hyper(ds.tensor, m.mixing);
        nhols::SpreadParams params;
        params.alpha = o.alpha;
        params.beta = o.beta;
        params.gamma = o.gamma;
        params.eps = o.eps;
        params.tol = o.tol;
        params.max_iters = o.max_iters;
        res = nhols::nhols_all_classes(ds.graph, hyper, params, ld, o.threads);
    } else {
        res = nhols::standard_ls_all_classes(ds.graph, o.beta, 1.0 - o.beta, ld, o.tol,
                                             o.max_iters, o.threads);
    }
    if (!out_pred.empty()) nhols::write_predictions_csv(out_pred, res.predictions, ds.ids);
    if (!out_diag.empty()) nhols::write_diagnostics_csv(out_diag, res);

    bool have_unlabeled_truth = false;
    for (size_t i = 0; i < ds.truth.size(); ++i)
        if (!mask[i] && ds.truth[i] >= 0) have_unlabeled_truth = true;
    json metrics;
    metrics["method"] = m.name();
    metrics["n"] = ds.graph.n;
    metrics["classes"] = num_classes;
    if (have_unlabeled_truth) {
        metrics["accuracy"] = nhols::accuracy(res.predictions, ds.truth, mask);
    }
    int iters = 0;
    bool conv = true;
    for (const auto& c : res.per_class) {
        iters = std::max(iters, c.iterations);
        conv = conv && c.converged;
    }
    metrics["iterations"] = iters;
    metrics["converged"] = conv;
    const std::string text = metrics.dump(2) + "\n";
    if (!out_metrics.empty()) {
        std::ofstream f(out_metrics);
        f << text;
    }
    std::cout << text;
    return 0;
}

int cmd_cv(const CommonOpts& o, const std::string& edges, const std::string& triangles,
           const std::string& labels, double fraction, const std::string& method,
           int folds, const std::string& out_table) {
    const nhols::Method m = nhols::parse_method(method);
    LoadedDataset ds = load_graph_dataset(edges, triangles, labels, true);
    if (ds.truth.empty()) throw nhols::ConfigError("cv requires --labels");
    int32_t num_classes = 0;
    for (const int32_t c : ds.truth) num_classes = std::max(num_classes, c + 1);
    const auto sample = nhols::sample_labeled_set(ds.truth, fraction, o.seed);
    const auto known = nhols::masked_labels(ds.truth, sample.known_mask);

    nhols::CvConfig cfg;
    cfg.folds = folds;
    cfg.seed = o.seed + 1;
    cfg.eps = o.eps;
    cfg.tol = o.tol;
    cfg.max_iters = o.max_iters;
    cfg.threads = o.threads;
    const nhols::CvOutcome cv =
        nhols::grid_search_cv(ds.graph, ds.tensor, m, known, num_classes, cfg);

    json table = json::array();
    for (const auto& row : cv.table) {
        json r;
        r["alpha"] = row.point.alpha;
        r["beta"] = row.point.beta;
        r["mean_accuracy"] = row.mean_accuracy;
        table.push_back(r);
    }
    json out;
    out["method"] = m.name();
    out["best_alpha"] = cv.best.alpha;
    out["best_beta"] = cv.best.beta;
    out["best_mean_accuracy"] = cv.best_mean_accuracy;
    out["table"] = table;
    const std::string text = out.dump(2) + "\n";
    if (!out_table.empty()) {
        std::ofstream f(out_table);
        f << text;
    }
    std::cout << text;
    return 0;
}

int cmd_sbm_sweep(const CommonOpts& o, const std::string& rhos,
                  const std::string& fractions, const std::string& methods_csv,
                  int repeats, const std::string& out_dir) {
    nhols::SweepConfig cfg;
    if (!rhos.empty()) cfg.rhos = parse_list(rhos);
    if (!fractions.empty()) cfg.fractions = parse_list(fractions);
    if (!methods_csv.empty()) {
        cfg.methods.clear();
        std::string cur;
        std::istringstream iss(methods_csv);
        while (std::getline(iss, cur, ',')) cfg.methods.push_back(cur);
    }
    cfg.repeats = repeats;
    cfg.seed = o.seed;
    cfg.eps = o.eps;
    cfg.tol = o.tol;
    cfg.max_iters = o.max_iters;
    cfg.threads = o.threads;
    const nhols::MetricsReport report = nhols::run_sbm_sweep(cfg);
    fs::create_directories(out_dir);
    nhols::write_metrics_json((fs::path(out_dir) / "metrics.json").string(), report);
    nhols::write_timings_csv((fs::path(out_dir) / "timings.csv").string(), report);

    // Cell means to stdout.
    for (const auto& m : cfg.methods) {
        std::cout << m << ":\n";
        for (const double rho : cfg.rhos) {
            std::cout << "  rho=" << rho << " :";
            for (const double fr : cfg.fractions) {
                double sum = 0;
                int cnt = 0;
                for (const auto& r : report.rows) {
                    if (r.failed || r.method != m) continue;
                    if (r.dataset.find("rho") == std::string::npos) continue;
                    std::ostringstream tag;
                    tag << "sbm_rho" << rho << "_f" << fr;
                    if (r.dataset == tag.str()) {
                        sum += r.accuracy;
                        ++cnt;
                    }
                }
                std::cout << ' ' << (cnt ? sum / cnt : 0.0);
            }
            std::cout << '\n';
        }
    }
    return 0;
}

int cmd_bench(const CommonOpts& o, const std::string& sizes, int runs,
              const std::string& out_csv) {
    nhols::BenchConfig cfg;
    if (!sizes.empty()) cfg.sizes = parse_int_list(sizes);
    cfg.seed = o.seed;
    cfg.runs = runs;
    cfg.mixing = o.mixing;
    cfg.tol = o.tol;
    cfg.max_iters = o.max_iters;
    const nhols::BenchReport rep = nhols::benchmark_runtime(cfg);
    std::ostringstream csv;
    csv << "n,nnz,triangles,nhols_seconds,ls_seconds,nhols_iters,ls_iters\n";
    for (const auto& r : rep.rows)
        csv << r.n << ',' << r.nnz << ',' << r.triangles << ',' << r.nhols_seconds
            << ',' << r.ls_seconds << ',' << r.nhols_iterations << ','
            << r.ls_iterations << '\n';
    if (!out_csv.empty()) {
        std::ofstream f(out_csv);
        f << csv.str();
    }
    std::cout << csv.str();
    if (rep.r_squared)
        std::cout << "r_squared=" << *rep.r_squared << "\n";
    else
        std::cout << "r_squared omitted (need >= 2 sizes)\n";
    std::cout << "max_time_ratio=" << rep.max_time_ratio << "\n";
    return 0;
}

int cmd_validate(const CommonOpts& o, const std::string& out_json) {
    const nhols::ValidationReport rep = nhols::run_validation_suite(o.seed, o.threads);
    const std::string text = nhols::validation_to_json(rep);
    if (!out_json.empty()) {
        std::ofstream f(out_json);
        f << text;
    }
    std::cout << text;
    std::cerr << rep.failures() << " of " << rep.checks.size() << " checks failed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlinear higher-order label spreading"};
    app.require_subcommand(1);

    CommonOpts o;

    // generate-sbm
    std::string sizes_csv = "100,200,400", out_edges = "sbm_edges.tsv",
                out_labels = "sbm_labels.csv";
    double p_in = 0.1, p_out = 0.025, rho = 0.0;
    auto* gen = app.add_subcommand("generate-sbm", "draw a stochastic block model graph");
    gen->add_option("--sizes", sizes_csv, "class sizes, comma separated");
    gen->add_option("--p-in", p_in, "intra-class edge probability");
    gen->add_option("--p-out", p_out, "inter-class edge probability");
    gen->add_option("--rho", rho, "set p_out = p_in / rho");
    gen->add_option("--out-edges", out_edges, "edge TSV output");
    gen->add_option("--out-labels", out_labels, "labels CSV output");
    add_common(gen, o, false);

    // build-knn
    std::string points_csv, knn_out_edges = "knn_edges.tsv", knn_out_labels,
                knn_out_idmap;
    int k = 7;
    bool mutual = false;
    auto* knn = app.add_subcommand("build-knn", "k-nearest-neighbor graph from points");
    knn->add_option("--points", points_csv, "point CSV (header id,f1,...[,label])")
        ->required();
    knn->add_option("--k", k, "neighbors per point (default 7)");
    knn->add_flag("--mutual", mutual, "intersect instead of union symmetrization");
    knn->add_option("--out-edges", knn_out_edges, "edge TSV output");
    knn->add_option("--out-labels", knn_out_labels, "labels CSV output");
    knn->add_option("--out-idmap", knn_out_idmap, "id map CSV output");
    add_common(knn, o, false);

    // triangles
    std::string tri_edges, tri_weighting = "unit", out_triangles = "triangles.tsv";
    auto* tri = app.add_subcommand("triangles", "enumerate 3-cliques");
    tri->add_option("--edges", tri_edges, "edge TSV input")->required();
    tri->add_option("--weighting", tri_weighting, "unit|product|min");
    tri->add_option("--out-triangles", out_triangles, "triangle TSV output");

    // spread
    std::string sp_edges, sp_triangles, sp_labels, sp_known, sp_method = "nhols:arith";
    std::string out_pred = "predictions.csv", out_metrics, out_diag;
    double sp_fraction = 0.06;
    auto* sp = app.add_subcommand("spread", "run label spreading");
    sp->add_option("--edges", sp_edges, "edge TSV input")->required();
    sp->add_option("--triangles", sp_triangles, "triangle TSV (else enumerated)");
    sp->add_option("--labels", sp_labels, "ground-truth labels CSV")->required();
    sp->add_option("--known", sp_known, "known-labels CSV (else sampled)");
    sp->add_option("--fraction", sp_fraction, "known-label fraction when sampling");
    sp->add_option("--method", sp_method, "ls | nhols:<mixing>");
    sp->add_option("--out-pred", out_pred, "predictions CSV");
    sp->add_option("--out-metrics", out_metrics, "metrics JSON");
    sp->add_option("--out-diagnostics", out_diag, "per-iteration diagnostics CSV");
    add_common(sp, o);

    // cv
    std::string cv_edges, cv_triangles, cv_labels, cv_method = "nhols:arith", cv_out;
    double cv_fraction = 0.06;
    int folds = 5;
    auto* cv = app.add_subcommand("cv", "cross-validated grid search");
    cv->add_option("--edges", cv_edges, "edge TSV input")->required();
    cv->add_option("--triangles", cv_triangles, "triangle TSV (else enumerated)");
    cv->add_option("--labels", cv_labels, "ground-truth labels CSV")->required();
    cv->add_option("--fraction", cv_fraction, "known-label fraction");
    cv->add_option("--method", cv_method, "ls | nhols:<mixing>");
    cv->add_option("--folds", folds, "number of 50/50 splits (default 5)");
    cv->add_option("--out", cv_out, "JSON output");
    add_common(cv, o);

    // sbm-sweep
    std::string rhos, fractions, methods_csv, sweep_out = "sweep_out";
    int repeats = 10;
    auto* sweep = app.add_subcommand("sbm-sweep", "accuracy sweep over SBM settings");
    sweep->add_option("--rhos", rhos, "rho values, comma separated");
    sweep->add_option("--fractions", fractions, "label fractions, comma separated");
    sweep->add_option("--methods", methods_csv, "methods, comma separated");
    sweep->add_option("--repeats", repeats, "instances per cell (default 10)");
    sweep->add_option("--out", sweep_out, "output directory");
    add_common(sweep, o);

    // bench
    std::string bench_sizes, bench_out;
    int bench_runs = 5;
    auto* bench = app.add_subcommand("bench", "runtime scaling benchmark");
    bench->add_option("--sizes", bench_sizes, "node counts, comma separated");
    bench->add_option("--runs", bench_runs, "timed runs per size (median)");
    bench->add_option("--out", bench_out, "CSV output");
    add_common(bench, o);

    // validate
    std::string val_out;
    auto* val = app.add_subcommand("validate", "numerical validation suite");
    val->add_option("--out", val_out, "JSON output");
    add_common(val, o, false);

    // run (manifest experiment)
    std::string manifest_path;
    auto* runx = app.add_subcommand("run", "manifest-driven experiment");
    runx->add_option("--manifest", manifest_path, "experiment manifest JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        apply_kernel_choice(o.kernel);
        if (gen->parsed())
            return cmd_generate_sbm(sizes_csv, p_in, p_out, rho, o.seed, out_edges,
                                    out_labels);
        if (knn->parsed())
            return cmd_build_knn(points_csv, k, mutual, o.threads, knn_out_edges,
                                 knn_out_labels, knn_out_idmap);
        if (tri->parsed()) return cmd_triangles(tri_edges, tri_weighting, out_triangles);
        if (sp->parsed())
            return cmd_spread(o, sp_edges, sp_triangles, sp_labels, sp_known,
                              sp_fraction, sp_method, out_pred, out_metrics, out_diag);
        if (cv->parsed())
            return cmd_cv(o, cv_edges, cv_triangles, cv_labels, cv_fraction, cv_method,
                          folds, cv_out);
        if (sweep->parsed())
            return cmd_sbm_sweep(o, rhos, fractions, methods_csv, repeats, sweep_out);
        if (bench->parsed()) return cmd_bench(o, bench_sizes, bench_runs, bench_out);
        if (val->parsed()) return cmd_validate(o, val_out);
        if (runx->parsed()) {
            const nhols::Manifest m = nhols::read_manifest(manifest_path);
            const nhols::MetricsReport rep = nhols::run_experiment(m);
            for (const double fr : m.fractions)
                for (const auto& method : m.methods)
                    std::cout << method << " @" << fr
                              << " mean_accuracy=" << rep.mean_accuracy(method, fr)
                              << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
