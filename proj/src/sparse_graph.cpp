#include "nhols/sparse_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nhols/error.hpp"

namespace nhols {

namespace {

void check_node(int64_t v, int64_t n) {
    if (v < 0 || v >= n)
        throw InvalidNode("node id " + std::to_string(v) + " outside [0, " +
                          std::to_string(n) + ")");
}

}  // namespace

double SparseGraph::edge_weight(int64_t i, int64_t j) const {
    const auto cols = neighbors(i);
    const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<int32_t>(j));
    if (it == cols.end() || *it != static_cast<int32_t>(j)) return 0.0;
    return weights[row_offsets[i] + (it - cols.begin())];
}

SparseGraph build_graph(std::span<const EdgeRecord> edges, int64_t n,
                        const GraphOptions& opt) {
    if (n <= 0) throw InvalidParam("node count must be positive");

    struct Rec {
        int64_t lo, hi;
        double fwd = 0.0, rev = 0.0;  // weight sums per orientation
        bool has_fwd = false, has_rev = false;
    };
    std::vector<Rec> recs;
    recs.reserve(edges.size());
    for (const auto& e : edges) {
        check_node(e.u, n);
        check_node(e.v, n);
        if (e.u == e.v)
            throw InvalidNode("self-loop on node " + std::to_string(e.u));
        if (!(e.w > 0.0))
            throw InvalidWeight("edge (" + std::to_string(e.u) + "," +
                                std::to_string(e.v) + ") has nonpositive weight");
        Rec r;
        r.lo = std::min(e.u, e.v);
        r.hi = std::max(e.u, e.v);
        if (e.u < e.v) {
            r.fwd = e.w;
            r.has_fwd = true;
        } else {
            r.rev = e.w;
            r.has_rev = true;
        }
        recs.push_back(r);
    }
    std::sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) {
        return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
    });

    // Merge per unordered pair. Same-orientation duplicates sum; when both
    // orientations appear they must agree and denote one undirected edge.
    std::vector<int64_t> pu, pv;
    std::vector<double> pw;
    for (size_t p = 0; p < recs.size();) {
        Rec acc = recs[p];
        ++p;
        while (p < recs.size() && recs[p].lo == acc.lo && recs[p].hi == acc.hi) {
            acc.fwd += recs[p].fwd;
            acc.rev += recs[p].rev;
            acc.has_fwd |= recs[p].has_fwd;
            acc.has_rev |= recs[p].has_rev;
            ++p;
        }
        double w;
        if (acc.has_fwd && acc.has_rev) {
            if (std::abs(acc.fwd - acc.rev) >
                1e-12 * std::max(std::abs(acc.fwd), std::abs(acc.rev)))
                throw InvalidWeight("edge {" + std::to_string(acc.lo) + "," +
                                    std::to_string(acc.hi) +
                                    "} listed with different weights per orientation");
            w = acc.fwd;
        } else {
            w = acc.has_fwd ? acc.fwd : acc.rev;
        }
        pu.push_back(acc.lo);
        pv.push_back(acc.hi);
        pw.push_back(w);
    }

    // Coverage before materializing CSR so the fallback can add self-loops.
    std::vector<uint8_t> touched(static_cast<size_t>(n), 0);
    for (size_t e = 0; e < pu.size(); ++e)
        touched[static_cast<size_t>(pu[e])] = touched[static_cast<size_t>(pv[e])] = 1;
    std::vector<int64_t> loops;
    for (int64_t i = 0; i < n; ++i) {
        if (!touched[static_cast<size_t>(i)]) {
            if (!opt.self_loop_fallback)
                throw IsolatedNode("node " + std::to_string(i) + " has no incident edge");
            loops.push_back(i);
        }
    }

    SparseGraph g;
    g.n = n;
    std::vector<int64_t> deg(static_cast<size_t>(n), 0);
    for (size_t e = 0; e < pu.size(); ++e) {
        ++deg[static_cast<size_t>(pu[e])];
        ++deg[static_cast<size_t>(pv[e])];
    }
    for (int64_t i : loops) ++deg[static_cast<size_t>(i)];

    g.row_offsets.assign(static_cast<size_t>(n) + 1, 0);
    for (int64_t i = 0; i < n; ++i)
        g.row_offsets[static_cast<size_t>(i) + 1] =
            g.row_offsets[static_cast<size_t>(i)] + deg[static_cast<size_t>(i)];
    const int64_t nnz = g.row_offsets.back();
    g.col_indices.resize(static_cast<size_t>(nnz));
    g.weights.resize(static_cast<size_t>(nnz));

    std::vector<int64_t> cursor(g.row_offsets.begin(), g.row_offsets.end() - 1);
    auto put = [&](int64_t r, int64_t c, double w) {
        const int64_t at = cursor[static_cast<size_t>(r)]++;
        g.col_indices[static_cast<size_t>(at)] = static_cast<int32_t>(c);
        g.weights[static_cast<size_t>(at)] = w;
    };
    // pu is sorted by (lo, hi): rows of the lower endpoint come out sorted;
    // rows of the upper endpoint need a per-row sort afterwards.
    for (size_t e = 0; e < pu.size(); ++e) {
        put(pu[e], pv[e], pw[e]);
        put(pv[e], pu[e], pw[e]);
    }
    for (int64_t i : loops) put(i, i, 1.0);
    for (int64_t i = 0; i < n; ++i) {
        const int64_t b = g.row_offsets[static_cast<size_t>(i)];
        const int64_t e = g.row_offsets[static_cast<size_t>(i) + 1];
        std::vector<std::pair<int32_t, double>> row;
        row.reserve(static_cast<size_t>(e - b));
        for (int64_t k = b; k < e; ++k)
            row.emplace_back(g.col_indices[static_cast<size_t>(k)],
                             g.weights[static_cast<size_t>(k)]);
        std::sort(row.begin(), row.end());
        for (int64_t k = b; k < e; ++k) {
            g.col_indices[static_cast<size_t>(k)] = row[static_cast<size_t>(k - b)].first;
            g.weights[static_cast<size_t>(k)] = row[static_cast<size_t>(k - b)].second;
        }
    }

    g.degrees.resize(static_cast<size_t>(n));
    g.inv_sqrt_degrees.resize(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int64_t k = g.row_offsets[static_cast<size_t>(i)];
             k < g.row_offsets[static_cast<size_t>(i) + 1]; ++k)
            s += g.weights[static_cast<size_t>(k)];
        g.degrees[static_cast<size_t>(i)] = s;
        g.inv_sqrt_degrees[static_cast<size_t>(i)] = 1.0 / std::sqrt(s);
    }
    g.norm_weights.resize(static_cast<size_t>(nnz));
    for (int64_t i = 0; i < n; ++i) {
        const double di = g.inv_sqrt_degrees[static_cast<size_t>(i)];
        for (int64_t k = g.row_offsets[static_cast<size_t>(i)];
             k < g.row_offsets[static_cast<size_t>(i) + 1]; ++k)
            g.norm_weights[static_cast<size_t>(k)] =
                g.weights[static_cast<size_t>(k)] * di *
                g.inv_sqrt_degrees[static_cast<size_t>(g.col_indices[static_cast<size_t>(k)])];
    }
    return g;
}

TriangleTensor build_triangle_tensor(std::span<const TripleRecord> triples,
                                     int64_t n) {
    if (n <= 0) throw InvalidParam("node count must be positive");

    struct T3 {
        int32_t a, b, c;
        double w;
    };
    std::vector<T3> ts;
    ts.reserve(triples.size());
    for (const auto& t : triples) {
        check_node(t.a, n);
        check_node(t.b, n);
        check_node(t.c, n);
        if (t.a == t.b || t.a == t.c || t.b == t.c)
            throw DegenerateTriple("repeated index in triple (" + std::to_string(t.a) +
                                   "," + std::to_string(t.b) + "," +
                                   std::to_string(t.c) + ")");
        if (!(t.w > 0.0))
            throw InvalidWeight("triple (" + std::to_string(t.a) + "," +
                                std::to_string(t.b) + "," + std::to_string(t.c) +
                                ") has nonpositive weight");
        int32_t v[3] = {static_cast<int32_t>(t.a), static_cast<int32_t>(t.b),
                        static_cast<int32_t>(t.c)};
        std::sort(v, v + 3);
        ts.push_back({v[0], v[1], v[2], t.w});
    }
    std::sort(ts.begin(), ts.end(), [](const T3& x, const T3& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.c < y.c;
    });

    TriangleTensor out;
    out.n = n;
    for (size_t p = 0; p < ts.size();) {
        T3 acc = ts[p];
        ++p;
        while (p < ts.size() && ts[p].a == acc.a && ts[p].b == acc.b && ts[p].c == acc.c) {
            acc.w += ts[p].w;
            ++p;
        }
        out.ti.push_back(acc.a);
        out.tj.push_back(acc.b);
        out.tk.push_back(acc.c);
        out.tau.push_back(acc.w);
        out.tau2.push_back(2.0 * acc.w);
    }

    out.hyper_degrees.assign(static_cast<size_t>(n), 0.0);
    for (size_t t = 0; t < out.tau.size(); ++t) {
        const double d = out.tau2[t];  // each incident node sees 2*tau
        out.hyper_degrees[static_cast<size_t>(out.ti[t])] += d;
        out.hyper_degrees[static_cast<size_t>(out.tj[t])] += d;
        out.hyper_degrees[static_cast<size_t>(out.tk[t])] += d;
    }
    out.inv_sqrt_hyper_degrees.resize(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) {
        const double d = out.hyper_degrees[static_cast<size_t>(i)];
        out.inv_sqrt_hyper_degrees[static_cast<size_t>(i)] =
            d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
    }

    // Incidence lists (node -> (triple, role)).
    std::vector<int64_t> cnt(static_cast<size_t>(n), 0);
    for (size_t t = 0; t < out.tau.size(); ++t) {
        ++cnt[static_cast<size_t>(out.ti[t])];
        ++cnt[static_cast<size_t>(out.tj[t])];
        ++cnt[static_cast<size_t>(out.tk[t])];
    }
    out.inc_offsets.assign(static_cast<size_t>(n) + 1, 0);
    for (int64_t i = 0; i < n; ++i)
        out.inc_offsets[static_cast<size_t>(i) + 1] =
            out.inc_offsets[static_cast<size_t>(i)] + cnt[static_cast<size_t>(i)];
    out.inc_triple.resize(static_cast<size_t>(out.inc_offsets.back()));
    out.inc_role.resize(out.inc_triple.size());
    std::vector<int64_t> cur(out.inc_offsets.begin(), out.inc_offsets.end() - 1);
    for (size_t t = 0; t < out.tau.size(); ++t) {
        const int32_t v[3] = {out.ti[t], out.tj[t], out.tk[t]};
        for (uint8_t role = 0; role < 3; ++role) {
            const int64_t at = cur[static_cast<size_t>(v[role])]++;
            out.inc_triple[static_cast<size_t>(at)] = static_cast<int32_t>(t);
            out.inc_role[static_cast<size_t>(at)] = role;
        }
    }
    return out;
}

PairWeightMatrix pair_weights(const TriangleTensor& t) {
    std::vector<int64_t> rows;
    std::vector<int32_t> cols;
    std::vector<double> vals;
    rows.reserve(6 * t.tau.size());
    cols.reserve(6 * t.tau.size());
    vals.reserve(6 * t.tau.size());
    for (size_t e = 0; e < t.tau.size(); ++e) {
        const int32_t a = t.ti[e], b = t.tj[e], c = t.tk[e];
        const double w = t.tau2[e];
        const int32_t pr[6][2] = {{a, b}, {b, a}, {a, c}, {c, a}, {b, c}, {c, b}};
        for (const auto& p : pr) {
            rows.push_back(p[0]);
            cols.push_back(p[1]);
            vals.push_back(w);
        }
    }
    return csr_from_coo(t.n, std::move(rows), std::move(cols), std::move(vals));
}

CoverageReport validate_coverage(const SparseGraph& g, const TriangleTensor& t,
                                 bool fallback) {
    if (g.n != t.n) throw ShapeError("graph and tensor disagree on node count");
    CoverageReport rep;
    rep.fallback = fallback;
    for (int64_t i = 0; i < g.n; ++i) {
        if (!(g.degrees[static_cast<size_t>(i)] > 0.0)) rep.zero_degree.push_back(i);
        if (!(t.hyper_degrees[static_cast<size_t>(i)] > 0.0))
            rep.zero_hyper_degree.push_back(i);
    }
    if (!fallback && !rep.clean()) {
        const int64_t who = rep.zero_degree.empty() ? rep.zero_hyper_degree.front()
                                                    : rep.zero_degree.front();
        throw IsolatedNode("node " + std::to_string(who) +
                           " has zero degree or hyper-degree (enable fallback to proceed)");
    }
    return rep;
}

}  // namespace nhols
