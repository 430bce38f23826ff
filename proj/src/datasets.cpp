#include "nhols/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nhols/error.hpp"
#include "nhols/parallel.hpp"
#include "nhols/rng.hpp"

namespace nhols {

namespace {

// Bernoulli(p) subset of [0, count) via geometric skips; O(expected hits).
template <typename Fn>
void sample_pairs(Rng& rng, int64_t count, double p, Fn&& hit) {
    if (p <= 0.0 || count <= 0) return;
    if (p >= 1.0) {
        for (int64_t i = 0; i < count; ++i) hit(i);
        return;
    }
    const double denom = std::log1p(-p);
    double idx = -1.0;
    while (true) {
        const double u = rng.uniform();
        idx += 1.0 + std::floor(std::log1p(-u) / denom);
        if (idx >= static_cast<double>(count)) break;
        hit(static_cast<int64_t>(idx));
    }
}

std::vector<EdgeRecord> sbm_edges(const SbmSpec& spec, uint64_t seed,
                                  const std::vector<int64_t>& starts) {
    Rng rng(seed);
    std::vector<EdgeRecord> edges;
    const size_t nb = spec.sizes.size();
    for (size_t a = 0; a < nb; ++a) {
        // Intra-block: linear index over pairs i < j of block a. Hits arrive
        // in increasing order, so a monotone row cursor decodes each in O(1)
        // amortized.
        const int64_t s = spec.sizes[a];
        const int64_t pairs = s * (s - 1) / 2;
        int64_t row = 0;
        int64_t row_start = 0;  // index of pair (row, row+1)
        sample_pairs(rng, pairs, spec.p_in, [&](int64_t idx) {
            while (idx >= row_start + (s - 1 - row)) {
                row_start += s - 1 - row;
                ++row;
            }
            const int64_t i = row;
            const int64_t j = row + 1 + (idx - row_start);
            edges.push_back({starts[a] + i, starts[a] + j, 1.0});
        });
        // Inter-block rectangles.
        for (size_t b = a + 1; b < nb; ++b) {
            const int64_t sb = spec.sizes[b];
            sample_pairs(rng, s * sb, spec.p_out, [&](int64_t idx) {
                edges.push_back({starts[a] + idx / sb, starts[b] + idx % sb, 1.0});
            });
        }
    }
    return edges;
}

}  // namespace

SbmResult generate_sbm(const SbmSpec& spec) {
    if (spec.sizes.empty()) throw InvalidParam("SBM needs at least one class");
    for (const int64_t s : spec.sizes)
        if (s <= 0) throw InvalidParam("SBM class sizes must be positive");
    if (spec.p_in < 0.0 || spec.p_in > 1.0 || spec.p_out < 0.0 || spec.p_out > 1.0)
        throw InvalidParam("SBM probabilities must lie in [0, 1]");

    std::vector<int64_t> starts(spec.sizes.size() + 1, 0);
    for (size_t a = 0; a < spec.sizes.size(); ++a)
        starts[a + 1] = starts[a] + spec.sizes[a];
    const int64_t n = starts.back();

    SbmResult out;
    out.labels.resize(static_cast<size_t>(n));
    for (size_t a = 0; a < spec.sizes.size(); ++a)
        std::fill(out.labels.begin() + starts[a], out.labels.begin() + starts[a + 1],
                  static_cast<int32_t>(a));

    uint64_t seed = spec.seed;
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto edges = sbm_edges(spec, seed, starts);
        try {
            out.graph = build_graph(edges, n);
            out.seed_used = seed;
            out.resampled = attempt > 0;
            return out;
        } catch (const IsolatedNode&) {
            if (attempt == 1) throw;
            seed = SplitMix64(spec.seed).next();  // one deterministic retry
            out.resampled = true;
        }
    }
    throw IsolatedNode("unreachable");
}

SparseGraph build_knn_graph(const PointCloud& pts, int k, const KnnOptions& opt) {
    const int64_t n = pts.n;
    if (k < 1 || k >= n) throw InvalidParam("k must satisfy 1 <= k < n");
    if (static_cast<int64_t>(pts.x.size()) != n * pts.d)
        throw ShapeError("point cloud buffer does not match n*d");

    // Per-query k smallest (distance², index), ties to the lower index.
    std::vector<int32_t> nbr(static_cast<size_t>(n) * k);
    parallel_for(n, opt.threads, [&](int64_t i) {
        const double* xi = pts.row(i);
        // max-heap on (d2, idx): top is the current worst candidate
        std::vector<std::pair<double, int32_t>> heap;
        heap.reserve(static_cast<size_t>(k) + 1);
        for (int64_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double* xj = pts.row(j);
            double d2 = 0.0;
            for (int f = 0; f < pts.d; ++f) {
                const double d = xi[f] - xj[f];
                d2 += d * d;
            }
            const std::pair<double, int32_t> cand{d2, static_cast<int32_t>(j)};
            if (static_cast<int>(heap.size()) < k) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end());
            } else if (cand < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end());
            }
        }
        std::sort(heap.begin(), heap.end());
        for (int q = 0; q < k; ++q) nbr[static_cast<size_t>(i) * k + q] = heap[q].second;
    });

    std::vector<EdgeRecord> edges;
    edges.reserve(static_cast<size_t>(n) * k);
    if (!opt.mutual) {
        // Union symmetrization: emit each directed pick once per unordered
        // pair; build_graph dedups the two orientations.
        for (int64_t i = 0; i < n; ++i)
            for (int q = 0; q < k; ++q) {
                const int64_t j = nbr[static_cast<size_t>(i) * k + q];
                if (i < j)
                    edges.push_back({i, j, 1.0});
                else {
                    // keep {j,i} only if j did not already pick i
                    const auto* row = nbr.data() + static_cast<size_t>(j) * k;
                    if (std::find(row, row + k, static_cast<int32_t>(i)) == row + k)
                        edges.push_back({j, i, 1.0});
                }
            }
    } else {
        for (int64_t i = 0; i < n; ++i)
            for (int q = 0; q < k; ++q) {
                const int64_t j = nbr[static_cast<size_t>(i) * k + q];
                if (j <= i) continue;
                const auto* row = nbr.data() + static_cast<size_t>(j) * k;
                if (std::find(row, row + k, static_cast<int32_t>(i)) != row + k)
                    edges.push_back({i, j, 1.0});
            }
    }
    GraphOptions gopt;
    gopt.self_loop_fallback = opt.mutual;  // union output has degree >= k
    return build_graph(edges, n, gopt);
}

TriangleTensor enumerate_triangles(const SparseGraph& g, TriangleWeighting weighting) {
    const int64_t n = g.n;
    // Rank nodes by (degree, id); orient edges toward higher rank.
    std::vector<int64_t> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), int64_t{0});
    std::vector<int64_t> deg(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i)
        deg[static_cast<size_t>(i)] =
            g.row_offsets[static_cast<size_t>(i) + 1] - g.row_offsets[static_cast<size_t>(i)];
    std::sort(order.begin(), order.end(), [&](int64_t a, int64_t b) {
        return deg[static_cast<size_t>(a)] != deg[static_cast<size_t>(b)]
                   ? deg[static_cast<size_t>(a)] < deg[static_cast<size_t>(b)]
                   : a < b;
    });
    std::vector<int64_t> rank(static_cast<size_t>(n));
    for (int64_t r = 0; r < n; ++r) rank[static_cast<size_t>(order[static_cast<size_t>(r)])] = r;

    // Forward adjacency sorted by rank.
    std::vector<int64_t> fwd_off(static_cast<size_t>(n) + 1, 0);
    for (int64_t i = 0; i < n; ++i) {
        int64_t c = 0;
        for (const int32_t j : g.neighbors(i))
            if (rank[static_cast<size_t>(j)] > rank[static_cast<size_t>(i)] && j != i) ++c;
        fwd_off[static_cast<size_t>(i) + 1] = fwd_off[static_cast<size_t>(i)] + c;
    }
    std::vector<int32_t> fwd(static_cast<size_t>(fwd_off.back()));
    std::vector<double> fwd_w(fwd.size());
    {
        std::vector<int64_t> cur(fwd_off.begin(), fwd_off.end() - 1);
        for (int64_t i = 0; i < n; ++i) {
            const auto cols = g.neighbors(i);
            const auto ws = g.neighbor_weights(i);
            for (size_t q = 0; q < cols.size(); ++q) {
                const int32_t j = cols[q];
                if (j == i || rank[static_cast<size_t>(j)] <= rank[static_cast<size_t>(i)])
                    continue;
                const int64_t at = cur[static_cast<size_t>(i)]++;
                fwd[static_cast<size_t>(at)] = j;
                fwd_w[static_cast<size_t>(at)] = ws[q];
            }
        }
        for (int64_t i = 0; i < n; ++i) {
            const int64_t b = fwd_off[static_cast<size_t>(i)];
            const int64_t e = fwd_off[static_cast<size_t>(i) + 1];
            std::vector<std::pair<int64_t, double>> row;
            row.reserve(static_cast<size_t>(e - b));
            for (int64_t q = b; q < e; ++q)
                row.emplace_back(rank[static_cast<size_t>(fwd[static_cast<size_t>(q)])],
                                 fwd_w[static_cast<size_t>(q)]);
            std::vector<int32_t> ids(fwd.begin() + b, fwd.begin() + e);
            std::vector<size_t> perm(row.size());
            std::iota(perm.begin(), perm.end(), size_t{0});
            std::sort(perm.begin(), perm.end(),
                      [&](size_t x, size_t y) { return row[x].first < row[y].first; });
            for (size_t q = 0; q < perm.size(); ++q) {
                fwd[static_cast<size_t>(b) + q] = ids[perm[q]];
                fwd_w[static_cast<size_t>(b) + q] = row[perm[q]].second;
            }
        }
    }

    std::vector<TripleRecord> triples;
    // For each oriented edge (u, v): triangles are N+(u) ∩ N+(v) by rank.
    for (int64_t u = 0; u < n; ++u) {
        for (int64_t qu = fwd_off[static_cast<size_t>(u)];
             qu < fwd_off[static_cast<size_t>(u) + 1]; ++qu) {
            const int32_t v = fwd[static_cast<size_t>(qu)];
            const double wuv = fwd_w[static_cast<size_t>(qu)];
            int64_t a = qu + 1;  // remaining higher-rank neighbors of u
            int64_t b = fwd_off[static_cast<size_t>(v)];
            const int64_t ae = fwd_off[static_cast<size_t>(u) + 1];
            const int64_t be = fwd_off[static_cast<size_t>(v) + 1];
            while (a < ae && b < be) {
                const int64_t ra = rank[static_cast<size_t>(fwd[static_cast<size_t>(a)])];
                const int64_t rb = rank[static_cast<size_t>(fwd[static_cast<size_t>(b)])];
                if (ra < rb)
                    ++a;
                else if (rb < ra)
                    ++b;
                else {
                    const int32_t w = fwd[static_cast<size_t>(a)];
                    double tau = 1.0;
                    if (weighting == TriangleWeighting::edge_product)
                        tau = wuv * fwd_w[static_cast<size_t>(a)] * fwd_w[static_cast<size_t>(b)];
                    else if (weighting == TriangleWeighting::edge_min)
                        tau = std::min({wuv, fwd_w[static_cast<size_t>(a)],
                                        fwd_w[static_cast<size_t>(b)]});
                    triples.push_back({u, static_cast<int64_t>(v), static_cast<int64_t>(w), tau});
                    ++a;
                    ++b;
                }
            }
        }
    }
    return build_triangle_tensor(triples, n);
}

LabelSample sample_labeled_set(std::span<const int32_t> labels, double fraction,
                               uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw InvalidParam("label fraction must lie in (0, 1]");
    int32_t num_classes = 0;
    for (const int32_t c : labels) {
        if (c < 0) throw InvalidLabels("ground-truth labels must be nonnegative");
        num_classes = std::max(num_classes, c + 1);
    }
    if (num_classes == 0) throw InvalidLabels("empty label vector");

    std::vector<std::vector<int64_t>> members(static_cast<size_t>(num_classes));
    for (size_t i = 0; i < labels.size(); ++i)
        members[static_cast<size_t>(labels[i])].push_back(static_cast<int64_t>(i));

    LabelSample out;
    out.fraction = fraction;
    out.seed = seed;
    out.known_mask.assign(labels.size(), 0);
    out.per_class_count.resize(static_cast<size_t>(num_classes));
    Rng rng(seed);
    for (int32_t c = 0; c < num_classes; ++c) {
        auto& m = members[static_cast<size_t>(c)];
        if (m.empty())
            throw InvalidLabels("class " + std::to_string(c) + " has no members");
        const int64_t want = std::max<int64_t>(
            1, std::llround(fraction * static_cast<double>(m.size())));
        if (want > static_cast<int64_t>(m.size()))
            throw InvalidLabels("class " + std::to_string(c) + " smaller than request");
        rng.shuffle(std::span<int64_t>(m));
        for (int64_t q = 0; q < want; ++q) out.known_mask[static_cast<size_t>(m[q])] = 1;
        out.per_class_count[static_cast<size_t>(c)] = want;
    }
    return out;
}

std::vector<int32_t> masked_labels(std::span<const int32_t> truth,
                                   std::span<const uint8_t> known_mask) {
    if (truth.size() != known_mask.size())
        throw ShapeError("labels and mask disagree in length");
    std::vector<int32_t> out(truth.size(), -1);
    for (size_t i = 0; i < truth.size(); ++i)
        if (known_mask[i]) out[i] = truth[i];
    return out;
}

RandomInstance make_random_instance(int64_t n, int64_t num_triangles, uint64_t seed,
                                    bool weighted) {
    if (n < 3) throw InvalidParam("random instance needs n >= 3");
    Rng rng(seed);
    std::vector<EdgeRecord> edges;
    for (int64_t i = 0; i < n; ++i)  // ring keeps every degree positive
        edges.push_back({i, (i + 1) % n, weighted ? rng.log_uniform(0.5, 2.0) : 1.0});
    const int64_t extra = 2 * n;
    for (int64_t e = 0; e < extra; ++e) {
        const int64_t u = static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(n)));
        const int64_t v = static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(n)));
        if (u == v) continue;
        edges.push_back({u, v, weighted ? rng.log_uniform(0.5, 2.0) : 1.0});
    }
    // Both orientations of a chord may be drawn with different weights; make
    // duplicates same-orientation so they sum.
    for (auto& e : edges)
        if (e.u > e.v) std::swap(e.u, e.v);

    std::vector<TripleRecord> triples;
    std::vector<uint8_t> covered(static_cast<size_t>(n), 0);
    for (int64_t t = 0; t < num_triangles; ++t) {
        int64_t a = static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(n)));
        int64_t b = static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(n)));
        int64_t c = static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(n)));
        if (a == b || a == c || b == c) continue;
        triples.push_back({a, b, c, weighted ? rng.log_uniform(0.5, 2.0) : 1.0});
        covered[static_cast<size_t>(a)] = covered[static_cast<size_t>(b)] =
            covered[static_cast<size_t>(c)] = 1;
    }
    for (int64_t v = 0; v < n; ++v)
        if (!covered[static_cast<size_t>(v)])
            triples.push_back({v, (v + 1) % n, (v + 2) % n,
                               weighted ? rng.log_uniform(0.5, 2.0) : 1.0});

    RandomInstance inst;
    inst.graph = build_graph(edges, n);
    inst.tensor = build_triangle_tensor(triples, n);
    return inst;
}

}  // namespace nhols
