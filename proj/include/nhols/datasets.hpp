#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nhols/sparse_graph.hpp"

namespace nhols {

struct PointCloud {
    int64_t n = 0;
    int d = 0;
    std::vector<double> x;  // row-major n x d
    std::vector<int32_t> labels;  // empty when absent
    bool has_labels() const { return !labels.empty(); }
    const double* row(int64_t i) const { return x.data() + i * d; }
};

struct SbmSpec {
    std::vector<int64_t> sizes;  // class sizes
    double p_in = 0.1;
    double p_out = 0.025;
    uint64_t seed = 0;
};

struct SbmResult {
    SparseGraph graph;
    std::vector<int32_t> labels;
    uint64_t seed_used = 0;
    bool resampled = false;  // first draw had an isolated node
};

// Undirected simple graph, unit weights, deterministic under seed. An
// isolated node triggers one deterministic resample, then IsolatedNode.
SbmResult generate_sbm(const SbmSpec& spec);

struct KnnOptions {
    bool mutual = false;  // intersect instead of union when symmetrizing
    int threads = 1;
};

// Euclidean k-nearest-neighbor graph, symmetrized by union (or intersection),
// unit weights. Distance ties break to the lower index.
SparseGraph build_knn_graph(const PointCloud& pts, int k, const KnnOptions& opt = {});

enum class TriangleWeighting {
    unit,          // tau = 1  (default; matches unweighted pipelines)
    edge_product,  // tau = product of the three edge weights
    edge_min,      // tau = min of the three edge weights
};

// All 3-cliques, each listed once as i < j < k, forward (degree-ordered)
// enumeration.
TriangleTensor enumerate_triangles(const SparseGraph& g,
                                   TriangleWeighting weighting = TriangleWeighting::unit);

struct LabelSample {
    double fraction = 0.0;
    uint64_t seed = 0;
    std::vector<uint8_t> known_mask;
    std::vector<int64_t> per_class_count;
};

// Uniform without-replacement per-class sample of round(fraction * size)
// nodes (at least 1 per class); deterministic under seed.
LabelSample sample_labeled_set(std::span<const int32_t> labels, double fraction,
                               uint64_t seed);

// known_class vector (-1 for unknown) from truth + mask.
std::vector<int32_t> masked_labels(std::span<const int32_t> truth,
                                   std::span<const uint8_t> known_mask);

struct RandomInstance {
    SparseGraph graph;
    TriangleTensor tensor;
};

// Random weighted graph (ring backbone plus random chords) together with a
// random triangle set covering every node. Used by the validation and
// property suites; deterministic under seed.
RandomInstance make_random_instance(int64_t n, int64_t num_triangles, uint64_t seed,
                                    bool weighted = true);

}  // namespace nhols
