#include "nhols/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nhols/error.hpp"

namespace nhols {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int64_t line,
                             const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream iss(s);
    while (std::getline(iss, cur, sep)) out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& path, int64_t line) {
    double v = 0.0;
    const auto* b = s.data();
    const auto* e = s.data() + s.size();
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc{} || r.ptr != e || !std::isfinite(v))
        parse_fail(path, line, "bad number '" + s + "'");
    return v;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    return out;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

int64_t IdMap::intern(const std::string& ext) {
    const auto it = to_internal.find(ext);
    if (it != to_internal.end()) return it->second;
    const int64_t id = static_cast<int64_t>(to_external.size());
    to_external.push_back(ext);
    to_internal.emplace(ext, id);
    return id;
}

std::optional<int64_t> IdMap::lookup(const std::string& ext) const {
    const auto it = to_internal.find(ext);
    if (it == to_internal.end()) return std::nullopt;
    return it->second;
}

IdMap dense_id_map(int64_t n) {
    IdMap m;
    m.to_external.reserve(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) m.intern(std::to_string(i));
    return m;
}

EdgeFile read_edge_tsv(const std::string& path) {
    auto in = open_in(path);
    EdgeFile out;
    std::string line;
    int64_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto f = split(t, '\t');
        if (f.size() < 2 || f.size() > 3)
            parse_fail(path, ln, "expected `i<TAB>j[<TAB>w]`");
        EdgeRecord e;
        e.u = out.ids.intern(trim(f[0]));
        e.v = out.ids.intern(trim(f[1]));
        e.w = f.size() == 3 ? parse_double(trim(f[2]), path, ln) : 1.0;
        out.edges.push_back(e);
    }
    return out;
}

TriangleFile read_triangle_tsv(const std::string& path, IdMap& ids) {
    auto in = open_in(path);
    TriangleFile out;
    std::string line;
    int64_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto f = split(t, '\t');
        if (f.size() < 3 || f.size() > 4)
            parse_fail(path, ln, "expected `i<TAB>j<TAB>k[<TAB>w]`");
        TripleRecord r;
        r.a = ids.intern(trim(f[0]));
        r.b = ids.intern(trim(f[1]));
        r.c = ids.intern(trim(f[2]));
        r.w = f.size() == 4 ? parse_double(trim(f[3]), path, ln) : 1.0;
        out.triples.push_back(r);
    }
    return out;
}

LabelFile read_labels_csv(const std::string& path, const IdMap& ids) {
    auto in = open_in(path);
    LabelFile out;
    out.labels.assign(static_cast<size_t>(ids.size()), -1);
    std::string line;
    int64_t ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (ln == 1 && t.rfind("id,", 0) == 0) continue;  // optional header
        const auto f = split(t, ',');
        if (f.size() != 2) parse_fail(path, ln, "expected `id,label`");
        const auto id = ids.lookup(trim(f[0]));
        if (!id) parse_fail(path, ln, "unknown node id '" + trim(f[0]) + "'");
        const double lab = parse_double(trim(f[1]), path, ln);
        if (lab < 0 || lab != std::floor(lab))
            parse_fail(path, ln, "label must be a nonnegative integer");
        out.labels[static_cast<size_t>(*id)] = static_cast<int32_t>(lab);
    }
    return out;
}

PointCloud read_points_csv(const std::string& path, IdMap& ids) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    auto header = split(trim(line), ',');
    if (header.empty() || trim(header[0]) != "id")
        throw ParseError(path + ":1: header must start with `id`");
    bool has_label = !header.empty() && trim(header.back()) == "label";
    const int d = static_cast<int>(header.size()) - 1 - (has_label ? 1 : 0);
    if (d < 1) throw ParseError(path + ":1: no feature columns");

    PointCloud pc;
    pc.d = d;
    int64_t ln = 1;
    while (std::getline(in, line)) {
        ++ln;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto f = split(t, ',');
        if (static_cast<int>(f.size()) != static_cast<int>(header.size()))
            parse_fail(path, ln, "column count does not match header");
        const int64_t id = ids.intern(trim(f[0]));
        if (id != pc.n) parse_fail(path, ln, "duplicate node id '" + trim(f[0]) + "'");
        for (int q = 0; q < d; ++q)
            pc.x.push_back(parse_double(trim(f[static_cast<size_t>(q) + 1]), path, ln));
        if (has_label) {
            const double lab = parse_double(trim(f.back()), path, ln);
            if (lab < 0 || lab != std::floor(lab))
                parse_fail(path, ln, "label must be a nonnegative integer");
            pc.labels.push_back(static_cast<int32_t>(lab));
        }
        ++pc.n;
    }
    return pc;
}

void write_edge_tsv(const std::string& path, const SparseGraph& g, const IdMap& ids) {
    auto out = open_out(path);
    out.precision(17);
    for (int64_t i = 0; i < g.n; ++i) {
        const auto cols = g.neighbors(i);
        const auto ws = g.neighbor_weights(i);
        for (size_t q = 0; q < cols.size(); ++q) {
            if (cols[q] < i) continue;  // emit each undirected edge once
            out << ids.to_external[static_cast<size_t>(i)] << '\t'
                << ids.to_external[static_cast<size_t>(cols[q])] << '\t' << ws[q] << '\n';
        }
    }
}

void write_triangle_tsv(const std::string& path, const TriangleTensor& t,
                        const IdMap& ids) {
    auto out = open_out(path);
    out.precision(17);
    for (int64_t e = 0; e < t.num_triples(); ++e) {
        out << ids.to_external[static_cast<size_t>(t.ti[static_cast<size_t>(e)])] << '\t'
            << ids.to_external[static_cast<size_t>(t.tj[static_cast<size_t>(e)])] << '\t'
            << ids.to_external[static_cast<size_t>(t.tk[static_cast<size_t>(e)])] << '\t'
            << t.tau[static_cast<size_t>(e)] << '\n';
    }
}

void write_labels_csv(const std::string& path, std::span<const int32_t> labels,
                      const IdMap& ids) {
    auto out = open_out(path);
    out << "id,label\n";
    for (size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) continue;
        out << ids.to_external[i] << ',' << labels[i] << '\n';
    }
}

void write_id_map_csv(const std::string& path, const IdMap& ids) {
    auto out = open_out(path);
    out << "external_id,internal_id\n";
    for (size_t i = 0; i < ids.to_external.size(); ++i)
        out << ids.to_external[i] << ',' << i << '\n';
}

void write_predictions_csv(const std::string& path, std::span<const int32_t> pred,
                           const IdMap& ids) {
    auto out = open_out(path);
    out << "id,predicted_label\n";
    for (size_t i = 0; i < pred.size(); ++i)
        out << ids.to_external[i] << ',' << pred[i] << '\n';
}

}  // namespace nhols
