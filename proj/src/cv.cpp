#include "nhols/cv.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "nhols/error.hpp"
#include "nhols/parallel.hpp"
#include "nhols/rng.hpp"

namespace nhols {

std::vector<GridPoint> nhols_grid() {
    std::vector<GridPoint> pts;
    const double betas[] = {0.10, 0.25, 0.40, 0.55};
    for (int a = 3; a <= 8; ++a) {
        const double alpha = a / 10.0;
        for (const double beta : betas)
            if (alpha + beta < 1.0 - 1e-12) pts.push_back({alpha, beta});
    }
    return pts;
}

std::vector<double> ls_grid() {
    std::vector<double> betas;
    for (int b = 1; b <= 9; ++b) betas.push_back(b / 10.0);
    return betas;
}

std::string Method::name() const {
    return type == Type::standard_ls ? "ls" : "nhols:" + mixing.name();
}

Method parse_method(const std::string& name) {
    if (name == "ls") return Method::standard_ls();
    if (name.rfind("nhols:", 0) == 0)
        return Method::nhols_with(parse_mixing(name.substr(6)));
    throw InvalidParam("unknown method '" + name + "' (expected ls|nhols:<mixing>)");
}

double accuracy(std::span<const int32_t> pred, std::span<const int32_t> truth,
                std::span<const uint8_t> known_mask) {
    if (pred.size() != truth.size() || pred.size() != known_mask.size())
        throw ShapeError("accuracy: length mismatch");
    int64_t total = 0, hit = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (known_mask[i]) continue;
        ++total;
        hit += pred[i] == truth[i];
    }
    if (total == 0) throw InvalidEval("no unlabeled nodes to evaluate");
    return static_cast<double>(hit) / static_cast<double>(total);
}

double accuracy_on(std::span<const int32_t> pred, std::span<const int32_t> truth,
                   std::span<const int64_t> eval_nodes) {
    if (pred.size() != truth.size()) throw ShapeError("accuracy: length mismatch");
    if (eval_nodes.empty()) throw InvalidEval("empty evaluation set");
    int64_t hit = 0;
    for (const int64_t i : eval_nodes) hit += pred[i] == truth[i];
    return static_cast<double>(hit) / static_cast<double>(eval_nodes.size());
}

namespace {

struct Fold {
    std::vector<int32_t> train_class;  // -1 off the train half
    std::vector<int64_t> val_nodes;
    int64_t train_count = 0;
};

// Label-balanced 50/50 split of the known labels; train gets ceil(m/2) per
// class so the two halves differ by at most one.
std::vector<Fold> make_folds(std::span<const int32_t> known_class, int32_t num_classes,
                             const CvConfig& cfg) {
    std::vector<std::vector<int64_t>> members(static_cast<size_t>(num_classes));
    for (size_t i = 0; i < known_class.size(); ++i)
        if (known_class[i] >= 0)
            members[static_cast<size_t>(known_class[i])].push_back(static_cast<int64_t>(i));
    for (int32_t c = 0; c < num_classes; ++c)
        if (members[static_cast<size_t>(c)].size() < 2)
            throw InvalidEval("class " + std::to_string(c) +
                              " needs at least 2 known labels for 50/50 splits");

    Rng base(cfg.seed);
    std::vector<Fold> folds(static_cast<size_t>(cfg.folds));
    for (int f = 0; f < cfg.folds; ++f) {
        Rng rng = base.fork(static_cast<uint64_t>(f));
        Fold& fold = folds[static_cast<size_t>(f)];
        fold.train_class.assign(known_class.size(), -1);
        for (int32_t c = 0; c < num_classes; ++c) {
            auto m = members[static_cast<size_t>(c)];
            rng.shuffle(std::span<int64_t>(m));
            const size_t take = (m.size() + 1) / 2;
            for (size_t q = 0; q < m.size(); ++q) {
                if (q < take) {
                    fold.train_class[static_cast<size_t>(m[q])] = c;
                    ++fold.train_count;
                } else {
                    fold.val_nodes.push_back(m[q]);
                }
            }
        }
        std::sort(fold.val_nodes.begin(), fold.val_nodes.end());
    }
    return folds;
}

}  // namespace

CvOutcome grid_search_cv(const SparseGraph& g, const TriangleTensor& tensor,
                         const Method& method,
                         std::span<const int32_t> known_class, int32_t num_classes,
                         const CvConfig& config) {
    if (config.folds < 1) throw InvalidParam("folds must be >= 1");
    const auto folds = make_folds(known_class, num_classes, config);

    std::vector<GridPoint> points;
    if (method.type == Method::Type::nhols) {
        points = nhols_grid();
    } else {
        for (const double b : ls_grid()) points.push_back({0.0, b});
    }

    // Per-fold label data is shared across grid points.
    std::vector<LabelData> fold_labels;
    fold_labels.reserve(folds.size());
    for (const auto& f : folds)
        fold_labels.push_back(make_label_data(f.train_class, num_classes, config.eps));

    std::optional<HyperOperator> hyper;
    if (method.type == Method::Type::nhols)
        hyper.emplace(tensor, method.mixing);

    CvOutcome out;
    out.table.resize(points.size());
    const int64_t jobs = static_cast<int64_t>(points.size()) *
                         static_cast<int64_t>(folds.size());
    std::vector<double> acc(static_cast<size_t>(jobs), 0.0);
    std::vector<int32_t> truth(known_class.begin(), known_class.end());
    parallel_for(jobs, config.threads, [&](int64_t job) {
        const size_t pi = static_cast<size_t>(job) / folds.size();
        const size_t fi = static_cast<size_t>(job) % folds.size();
        const GridPoint& pt = points[pi];
        SpreadResult res;
        if (method.type == Method::Type::nhols) {
            SpreadParams params;
            params.alpha = pt.alpha;
            params.beta = pt.beta;
            params.gamma = pt.gamma();
            params.eps = config.eps;
            params.tol = config.tol;
            params.max_iters = config.max_iters;
            res = nhols_all_classes(g, *hyper, params, fold_labels[fi], 1);
        } else {
            res = standard_ls_all_classes(g, pt.beta, 1.0 - pt.beta, fold_labels[fi],
                                          config.tol, config.max_iters, 1);
        }
        acc[static_cast<size_t>(job)] =
            accuracy_on(res.predictions, truth, folds[fi].val_nodes);
    });

    for (size_t pi = 0; pi < points.size(); ++pi) {
        CvRow& row = out.table[pi];
        row.point = points[pi];
        double mean = 0.0;
        for (size_t fi = 0; fi < folds.size(); ++fi) {
            const double a = acc[pi * folds.size() + fi];
            row.fold_accuracy.push_back(a);
            mean += a;
        }
        row.mean_accuracy = mean / static_cast<double>(folds.size());
    }

    // Best mean accuracy; ties to lowest alpha then lowest beta.
    size_t best = 0;
    for (size_t pi = 1; pi < out.table.size(); ++pi) {
        const auto& cand = out.table[pi];
        const auto& cur = out.table[best];
        if (cand.mean_accuracy > cur.mean_accuracy + 1e-15) {
            best = pi;
        } else if (std::abs(cand.mean_accuracy - cur.mean_accuracy) <= 1e-15) {
            if (cand.point.alpha < cur.point.alpha - 1e-15 ||
                (std::abs(cand.point.alpha - cur.point.alpha) <= 1e-15 &&
                 cand.point.beta < cur.point.beta - 1e-15))
                best = pi;
        }
    }
    out.best = out.table[best].point;
    out.best_mean_accuracy = out.table[best].mean_accuracy;
    for (const auto& f : folds)
        out.max_train_labels_seen = std::max(out.max_train_labels_seen, f.train_count);
    return out;
}

}  // namespace nhols
