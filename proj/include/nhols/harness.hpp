#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nhols/cv.hpp"
#include "nhols/datasets.hpp"
#include "nhols/io.hpp"

namespace nhols {

struct MetricsRow {
    std::string dataset;
    std::string method;
    double fraction = 0.0;
    uint64_t seed = 0;
    double accuracy = 0.0;
    double alpha = 0.0, beta = 0.0;  // chosen hyperparameters (alpha 0 for LS)
    int iterations = 0;              // max per-class iterations of the final spread
    double wall_seconds = 0.0;       // excluded from metrics JSON (kept byte-stable)
    bool failed = false;
    std::string error;
};

struct MetricsReport {
    std::vector<MetricsRow> rows;

    // Mean accuracy over the rows matching (method, fraction); NaN if none.
    double mean_accuracy(const std::string& method, double fraction) const;
};

struct SweepConfig {
    std::vector<double> rhos = {2.0, 2.5, 3.0, 3.5, 4.0};
    std::vector<double> fractions = {0.06, 0.09, 0.12, 0.15, 0.18, 0.21};
    std::vector<std::string> methods = {"ls", "nhols:max"};
    std::vector<int64_t> sizes = {100, 200, 400};
    double p_in = 0.1;
    int repeats = 10;
    uint64_t seed = 1;
    int folds = 5;
    double eps = 0.01;
    double tol = 1e-5;
    int max_iters = 40;
    int threads = 1;
};

// For each (rho, fraction, repeat): generate the SBM instance, enumerate
// triangles, CV-select hyperparameters per method, spread with the full known
// set, and score on the unlabeled complement. Per-cell failures are recorded
// and the sweep continues.
MetricsReport run_sbm_sweep(const SweepConfig& cfg);

struct BenchRow {
    int64_t n = 0;
    int64_t nnz = 0;
    int64_t triangles = 0;
    double nhols_seconds = 0.0;  // median over runs
    double ls_seconds = 0.0;
    int nhols_iterations = 0;
    int ls_iterations = 0;
};

struct BenchConfig {
    std::vector<int64_t> sizes = {1000, 2000, 4000, 8000, 16000};
    uint64_t seed = 7;
    int runs = 5;  // median of this many, after one warmup
    std::string mixing = "l2";
    double alpha = 0.5, beta = 0.3;
    double ls_beta = 0.8;
    double tol = 1e-5;
    int max_iters = 40;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    // Least-squares fit of nhols_seconds against nnz + 3 * triangles.
    std::optional<double> r_squared;
    double max_time_ratio = 0.0;  // max over sizes of nhols/ls
};

// SBM timing setup: three equal classes, p_in = log(n)^2 / n, p_out = p_in/3.
BenchReport benchmark_runtime(const BenchConfig& cfg);

struct Manifest {
    std::string name = "experiment";
    // Either points_csv (kNN pipeline) or edges_tsv (+ optional triangles_tsv).
    std::string points_csv;
    std::string edges_tsv;
    std::string triangles_tsv;
    std::string labels_csv;  // required with edges_tsv; optional with points
    int k = 7;
    uint64_t seed = 1;
    std::vector<double> fractions = {0.004};
    std::vector<std::string> methods = {"nhols:l2", "ls"};
    int repeats = 5;
    int folds = 5;
    double eps = 0.01;
    double tol = 1e-5;
    int max_iters = 40;
    bool fallback_dangling = true;
    bool skip_cv = false;          // spread with fixed (alpha, beta) instead
    double alpha = 0.5, beta = 0.3;
    int threads = 1;
    std::string out_dir = "out";
};

Manifest read_manifest(const std::string& path);

// End-to-end pipeline: ingest -> graph/tensor -> CV -> spread -> score.
// Writes predictions CSV, metrics JSON, diagnostics CSV and the id map under
// out_dir; rerunning the same manifest produces byte-identical metrics JSON.
MetricsReport run_experiment(const Manifest& m);

// Serialization helpers shared by the CLI and tests (deterministic output).
std::string metrics_to_json(const MetricsReport& report);
void write_metrics_json(const std::string& path, const MetricsReport& report);
void write_timings_csv(const std::string& path, const MetricsReport& report);
void write_diagnostics_csv(const std::string& path, const SpreadResult& result);

}  // namespace nhols
