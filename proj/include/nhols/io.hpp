#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nhols/datasets.hpp"
#include "nhols/sparse_graph.hpp"

namespace nhols {

// Maps arbitrary external node ids onto dense 0-based internal ids in first-
// seen order. Written alongside outputs as `external_id,internal_id`.
struct IdMap {
    std::vector<std::string> to_external;
    std::unordered_map<std::string, int64_t> to_internal;

    int64_t intern(const std::string& ext);
    std::optional<int64_t> lookup(const std::string& ext) const;
    int64_t size() const { return static_cast<int64_t>(to_external.size()); }
    bool empty() const { return to_external.empty(); }
};

struct EdgeFile {
    std::vector<EdgeRecord> edges;
    IdMap ids;
};
struct TriangleFile {
    std::vector<TripleRecord> triples;
};
struct LabelFile {
    std::vector<int32_t> labels;  // aligned with ids, -1 where absent
};

// Edge TSV: `i<TAB>j<TAB>w`, w optional (default 1.0).
EdgeFile read_edge_tsv(const std::string& path);
// Triangle TSV: `i<TAB>j<TAB>k<TAB>w`, w optional; ids resolved against
// (and extending) the given map.
TriangleFile read_triangle_tsv(const std::string& path, IdMap& ids);
// Labels CSV: `id,label`; every id must already be in the map.
LabelFile read_labels_csv(const std::string& path, const IdMap& ids);
// Point CSV with header `id,f1,...,fd[,label]`; builds the id map.
PointCloud read_points_csv(const std::string& path, IdMap& ids);

void write_edge_tsv(const std::string& path, const SparseGraph& g, const IdMap& ids);
void write_triangle_tsv(const std::string& path, const TriangleTensor& t,
                        const IdMap& ids);
void write_labels_csv(const std::string& path, std::span<const int32_t> labels,
                      const IdMap& ids);
void write_id_map_csv(const std::string& path, const IdMap& ids);
void write_predictions_csv(const std::string& path, std::span<const int32_t> pred,
                           const IdMap& ids);

// Identity map over [0, n) for data that is already dense-indexed.
IdMap dense_id_map(int64_t n);

}  // namespace nhols
