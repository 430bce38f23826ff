#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nhols/spreading.hpp"

namespace nhols {

// Hyperparameter grids. NHOLS: alpha in {0.3..0.8 step 0.1} x beta in
// {0.1, 0.25, 0.40, 0.55} subject to alpha + beta < 1 (16 points);
// standard LS: beta in {0.1..0.9 step 0.1} (9 points).
struct GridPoint {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma() const { return 1.0 - alpha - beta; }
};

std::vector<GridPoint> nhols_grid();
std::vector<double> ls_grid();

struct Method {
    enum class Type { nhols, standard_ls } type = Type::nhols;
    MixingSpec mixing;  // meaningful for nhols

    static Method nhols_with(MixingSpec m) { return {Type::nhols, std::move(m)}; }
    static Method standard_ls() { return {Type::standard_ls, {}}; }
    std::string name() const;
};

Method parse_method(const std::string& name);  // "ls" or "nhols:<mixing>"

struct CvConfig {
    int folds = 5;  // independent label-balanced 50/50 splits
    uint64_t seed = 0;
    double eps = 0.01;
    double tol = 1e-5;
    int max_iters = 40;
    int threads = 1;
};

// Fraction of unlabeled nodes (known_mask == 0) predicted correctly.
double accuracy(std::span<const int32_t> pred, std::span<const int32_t> truth,
                std::span<const uint8_t> known_mask);
// Accuracy over an explicit node subset.
double accuracy_on(std::span<const int32_t> pred, std::span<const int32_t> truth,
                   std::span<const int64_t> eval_nodes);

struct CvRow {
    GridPoint point;          // beta-only for LS (alpha = 0)
    double mean_accuracy = 0.0;
    std::vector<double> fold_accuracy;
};

struct CvOutcome {
    GridPoint best;
    double best_mean_accuracy = 0.0;
    std::vector<CvRow> table;
    // Largest number of anchored labels any fold's spreader saw; lets callers
    // assert validation labels never leaked into the spreading input.
    int64_t max_train_labels_seen = 0;
};

// Per grid point: mean validation accuracy across `folds` label-balanced
// 50/50 train/validation splits of the known labels (the train half is the
// only labeled input to the spreader; the validation half only scores).
// Ties break to the lowest alpha, then the lowest beta.
CvOutcome grid_search_cv(const SparseGraph& g, const TriangleTensor& tensor,
                         const Method& method,
                         std::span<const int32_t> known_class, int32_t num_classes,
                         const CvConfig& config);

}  // namespace nhols
