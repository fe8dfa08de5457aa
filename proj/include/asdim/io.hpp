#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "asdim/distortion.hpp"
#include "asdim/embed.hpp"
#include "asdim/experiments.hpp"
#include "asdim/generators.hpp"
#include "asdim/ladder.hpp"
#include "asdim/zero_dim.hpp"

namespace asdim::io {

using nlohmann::json;

inline json rat(const Rational& r) { return r.str(); }
inline json ext(const Extended& e) { return e.str(); }

inline Rational get_rat(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    throw BadParameters("expected a rational string, got " + j.dump());
}

inline Extended get_ext(const json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return Extended::inf();
    return Extended{false, get_rat(j)};
}

inline json rats(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(rat(r));
    return a;
}

inline std::vector<Rational> get_rats(const json& j) {
    std::vector<Rational> v;
    for (const auto& e : j) v.push_back(get_rat(e));
    return v;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadParameters("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw BadParameters(path + ": " + e.what());
    }
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw BadParameters("cannot write " + path);
    out << text;
}

// ---- spaces ----

inline json to_json(const GeneratorSpec& g) {
    json p = json::object();
    for (const auto& [k, v] : g.params) p[k] = v;
    return {{"kind", g.kind}, {"params", p}, {"table", g.table}, {"step", rat(g.step)}};
}

inline GeneratorSpec spec_from_json(const json& j) {
    GeneratorSpec g;
    g.kind = j.at("kind").get<std::string>();
    if (j.contains("params"))
        for (const auto& [k, v] : j.at("params").items()) g.params[k] = v.get<std::int64_t>();
    if (j.contains("table")) g.table = j.at("table").get<std::vector<std::int64_t>>();
    if (j.contains("step")) g.step = get_rat(j.at("step"));
    return g;
}

/// Generated spaces are stored by their spec; anything else as a full distance matrix.
inline json to_json(const FiniteMetricSpace& s) {
    json j = {{"label", s.label()}, {"basepoint", s.id(s.basepoint())}, {"points", s.ids()}};
    if (s.generator()) {
        j["metric"] = {{"kind", "generator"}, {"spec", to_json(*s.generator())}};
        return j;
    }
    json rows = json::array();
    for (PointIndex i = 0; i < s.size(); ++i) {
        json row = json::array();
        for (PointIndex k = 0; k < s.size(); ++k) row.push_back(rat(s.dist(i, k)));
        rows.push_back(std::move(row));
    }
    j["metric"] = {{"kind", "matrix"}, {"rows", rows}};
    return j;
}

inline FiniteMetricSpace space_from_json(const json& j, std::size_t cap = kDefaultPointCap) {
    const auto& m = j.at("metric");
    const auto kind = m.at("kind").get<std::string>();
    FiniteMetricSpace s;
    if (kind == "generator") {
        s = generate(spec_from_json(m.at("spec")), cap);
        if (j.contains("points") && j.at("points").get<std::vector<std::string>>() != s.ids())
            throw BadParameters("point list does not match the generator");
    } else if (kind == "matrix") {
        auto ids = j.at("points").get<std::vector<std::string>>();
        std::vector<std::vector<Rational>> rows;
        for (const auto& row : m.at("rows")) {
            if (row.size() != ids.size()) throw NotSquareError();
            rows.push_back(get_rats(row));
        }
        if (rows.size() != ids.size()) throw NotSquareError();
        s = validate_metric(rows, ids, j.value("label", std::string{}));
    } else {
        throw BadParameters("unknown metric kind: " + kind);
    }
    if (j.contains("label")) s.set_label(j.at("label").get<std::string>());
    if (j.contains("basepoint")) s.set_basepoint(s.index_of(j.at("basepoint").get<std::string>()));
    return s;
}

inline json ids_of(const FiniteMetricSpace& s, const PointSet& pts) {
    json a = json::array();
    for (auto p : pts) a.push_back(s.id(p));
    return a;
}

inline PointSet points_of(const FiniteMetricSpace& s, const json& j) {
    PointSet p;
    for (const auto& e : j) p.push_back(s.index_of(e.get<std::string>()));
    std::sort(p.begin(), p.end());
    return p;
}

// ---- covers ----

inline json to_json(const FiniteMetricSpace& s, const ColoredCover& c) {
    json blocks = json::array();
    for (const auto& b : c.blocks) blocks.push_back({{"color", b.color}, {"points", ids_of(s, b.points)}});
    return {{"space", s.label()}, {"D", rat(c.D)}, {"R", rat(c.R)}, {"colors", c.colors}, {"blocks", blocks}};
}

inline ColoredCover cover_from_json(const FiniteMetricSpace& s, const json& j) {
    ColoredCover c;
    c.D = get_rat(j.at("D"));
    c.R = get_rat(j.at("R"));
    c.colors = j.value("colors", std::size_t{1});
    for (const auto& b : j.at("blocks")) {
        CoverBlock blk{points_of(s, b.at("points")), b.at("color").get<std::size_t>()};
        if (blk.color >= c.colors) c.colors = blk.color + 1;
        c.blocks.push_back(std::move(blk));
    }
    return c;
}

inline json to_json(const FiniteMetricSpace& s, const CoverSequence& seq) {
    json levels = json::array();
    for (const auto& c : seq.levels) levels.push_back(to_json(s, c));
    json psi = json::array();
    for (std::size_t k = 0; k < seq.psi.size(); ++k)
        for (std::size_t b = 0; b < seq.psi[k].size(); ++b)
            if (seq.psi[k][b] >= 0) psi.push_back({seq.global_id(k, b), seq.psi[k][b]});
    json strict = json::array();
    for (bool b : seq.strict2star) strict.push_back(b);
    return {{"space", s.label()}, {"colors", seq.colors}, {"levels", levels}, {"d", rats(seq.d)},
            {"m", rats(seq.m)},  {"psi", psi},           {"strict2star", strict}};
}

inline CoverSequence sequence_from_json(const FiniteMetricSpace& s, const json& j) {
    CoverSequence seq;
    seq.colors = j.at("colors").get<std::size_t>();
    for (const auto& c : j.at("levels")) seq.levels.push_back(cover_from_json(s, c));
    seq.d = get_rats(j.at("d"));
    seq.m = get_rats(j.at("m"));
    if (seq.d.size() != seq.levels.size() || seq.m.size() != seq.levels.size())
        throw BadParameters("d and m need one entry per level");
    for (const auto& c : seq.levels) seq.psi.emplace_back(c.blocks.size(), -1);
    for (const auto& e : j.at("psi")) {
        auto [k, b] = seq.locate(e.at(0).get<std::int64_t>());
        (void)seq.locate(e.at(1).get<std::int64_t>());
        seq.psi[k][b] = e.at(1).get<std::int64_t>();
    }
    if (j.contains("strict2star"))
        for (const auto& b : j.at("strict2star")) seq.strict2star.push_back(b.get<bool>());
    return seq;
}

// ---- trees and embeddings ----

inline std::string vertex_id(const TreePoint& p) { return std::to_string(p.segment) + ":" + p.t.str(); }

/// Segments carry the structure; vertices and edges are the derived 1-skeleton of T_0.
inline json to_json(const FilteredTree& t) {
    json segs = json::array();
    for (const auto& g : t.segments())
        segs.push_back({{"block", g.block},
                        {"k", g.level},
                        {"length", rat(g.length)},
                        {"attach", {{"segment", g.parent}, {"t", rat(g.attach)}}},
                        {"spread", rat(g.spread)}});
    json vertices = json::array(), edges = json::array();
    for (const auto& [v, nb] : t.skeleton(0)) {
        vertices.push_back({{"id", vertex_id(v)}, {"level", t.level(v)}});
        for (const auto& [w, len] : nb)
            if (v < w) edges.push_back({{"u", vertex_id(v)}, {"v", vertex_id(w)}, {"len", rat(len)}});
    }
    return {{"color", t.color()}, {"root", t.root()}, {"vertices", vertices}, {"edges", edges}, {"segments", segs}};
}

inline FilteredTree tree_from_json(const json& j) {
    std::vector<TreeSegment> segs;
    for (const auto& g : j.at("segments")) {
        TreeSegment s;
        s.block = g.at("block").get<std::int64_t>();
        s.level = g.at("k").get<std::size_t>();
        s.length = get_rat(g.at("length"));
        s.parent = g.at("attach").at("segment").get<std::int64_t>();
        s.attach = get_rat(g.at("attach").at("t"));
        s.spread = get_rat(g.value("spread", json("0/1")));
        if (s.parent >= 0 && static_cast<std::size_t>(s.parent) >= j.at("segments").size())
            throw UnattachedSegment(segs.size());
        segs.push_back(s);
    }
    return FilteredTree(j.at("color").get<std::size_t>(), std::move(segs));
}

inline json to_json(const TreeFamily& trees) {
    json a = json::array();
    for (const auto& t : trees) a.push_back(to_json(t));
    return {{"trees", a}};
}

inline TreeFamily trees_from_json(const json& j) {
    TreeFamily t;
    for (const auto& e : j.at("trees")) t.push_back(tree_from_json(e));
    return t;
}

inline json to_json(const TreePoint& p) { return {{"segment", p.segment}, {"t", rat(p.t)}}; }

inline TreePoint tree_point_from_json(const json& j) {
    return {j.at("segment").get<std::size_t>(), get_rat(j.at("t"))};
}

inline json to_json(const ProductPoint& p) {
    json a = json::array();
    for (const auto& c : p.coords) a.push_back(to_json(c));
    return a;
}

inline ProductPoint product_point_from_json(const json& j) {
    ProductPoint p;
    for (const auto& c : j) p.coords.push_back(tree_point_from_json(c));
    return p;
}

inline json to_json(const FiniteMetricSpace& s, const EmbeddingMap& e) {
    json pts = json::array();
    for (PointIndex x = 0; x < s.size(); ++x) {
        json coords = json::array();
        for (std::size_t c = 0; c < e.images[x].coords.size(); ++c) {
            const auto& tp = e.images[x].coords[c];
            coords.push_back({{"segment", tp.segment},
                              {"t", rat(tp.t)},
                              {"level_k", e.source[x][c].level},
                              {"block", e.source[x][c].block}});
        }
        pts.push_back({{"id", s.id(x)}, {"coords", coords}});
    }
    return {{"space", s.label()}, {"points", pts}};
}

inline EmbeddingMap embedding_from_json(const FiniteMetricSpace& s, const json& j) {
    EmbeddingMap e;
    e.images.assign(s.size(), {});
    e.source.assign(s.size(), {});
    std::vector<char> seen(s.size(), 0);
    for (const auto& p : j.at("points")) {
        const auto x = s.index_of(p.at("id").get<std::string>());
        seen[x] = 1;
        for (const auto& c : p.at("coords")) {
            e.images[x].coords.push_back(tree_point_from_json(c));
            e.source[x].push_back({c.at("level_k").get<std::size_t>(), c.at("block").get<std::int64_t>()});
        }
    }
    for (PointIndex x = 0; x < s.size(); ++x)
        if (!seen[x]) throw UncoveredPoint(x, 0);
    return e;
}

// ---- zero-dimensional ladders ----

inline json to_json(const FiniteMetricSpace& s, const ZeroLadder& z) {
    json levels = json::array();
    for (const auto& lvl : z.levels) {
        json blocks = json::array();
        for (const auto& b : lvl) blocks.push_back(ids_of(s, b));
        levels.push_back(blocks);
    }
    json psi = json::array();
    for (std::size_t k = 0; k + 1 < z.parent.size(); ++k)
        for (std::size_t b = 0; b < z.parent[k].size(); ++b) psi.push_back({k, b, z.parent[k][b]});
    return {{"space", s.label()}, {"scales", rats(z.scales)}, {"levels", levels},
            {"psi", psi},         {"branching", z.branching}, {"whole_at_top", z.whole_at_top}};
}

inline ZeroLadder zero_ladder_from_json(const FiniteMetricSpace& s, const json& j) {
    ZeroLadder z;
    z.scales = get_rats(j.at("scales"));
    for (const auto& lvl : j.at("levels")) {
        std::vector<PointSet> blocks;
        for (const auto& b : lvl) blocks.push_back(points_of(s, b));
        z.levels.push_back(std::move(blocks));
    }
    if (z.levels.size() != z.scales.size() + 1) throw BadParameters("ladder needs one level per scale plus singletons");
    for (const auto& lvl : z.levels) z.parent.emplace_back(lvl.size(), 0);
    for (const auto& e : j.at("psi")) {
        const auto k = e.at(0).get<std::size_t>(), b = e.at(1).get<std::size_t>();
        if (k + 1 >= z.levels.size() || b >= z.levels[k].size()) throw BadParameters("psi entry out of range");
        z.parent[k][b] = e.at(2).get<std::size_t>();
    }
    z.branching = j.at("branching").get<std::vector<std::size_t>>();
    z.whole_at_top = j.at("whole_at_top").get<bool>();
    return z;
}

/// Shared embedding-report format: point id to integer image.
inline json to_json(const FiniteMetricSpace& s, const M0Embedding& e) {
    json img = json::object();
    for (PointIndex x = 0; x < s.size(); ++x) img[s.id(x)] = e.image[x];
    return {{"space", s.label()}, {"image", img}, {"strides", e.strides}, {"offset", e.offset}};
}

inline M0Embedding m0_embedding_from_json(const FiniteMetricSpace& s, const json& j) {
    M0Embedding e;
    e.image.assign(s.size(), 0);
    for (const auto& [id, v] : j.at("image").items()) e.image[s.index_of(id)] = v.get<std::int64_t>();
    e.strides = j.at("strides").get<std::vector<std::size_t>>();
    e.offset = j.at("offset").get<std::vector<std::size_t>>();
    return e;
}

// ---- reports ----

inline std::string envelope_csv(const DistortionReport& r) {
    std::ostringstream o;
    o << "bin_lo,bin_hi,count,min_img,max_img\n";
    for (const auto& b : r.bins)
        o << b.lo.str() << ',' << b.hi.str() << ',' << b.count << ',' << b.min_img.str() << ',' << b.max_img.str() << '\n';
    return o.str();
}

inline json to_json(const DistortionReport& r) {
    return {{"lambda", rat(r.fit.lambda)},
            {"s", rat(r.fit.s)},
            {"lipschitz", rat(r.fit.lipschitz)},
            {"pairs", r.pairs},
            {"bins", r.bins.size()},
            {"lipschitz_ok", r.lipschitz_ok},
            {"lower_envelope_monotone", r.lower_envelope_monotone},
            {"upper_envelope_monotone", r.upper_envelope_monotone},
            {"proper_proxy_ok", r.proper_proxy_ok}};
}

inline json to_json(const SequenceReport& r) {
    auto cond = [](const ConditionResult& c) { return json{{"pass", c.pass}, {"witness", c.witness}}; };
    json absorbed = json::array();
    for (const auto& e : r.absorbed_radius) absorbed.push_back(ext(e));
    return {{"lebesgue_depth", cond(r.lebesgue_depth)}, {"scale_growth", cond(r.scale_growth)},
            {"disjoint", cond(r.disjoint)},             {"basepoint", cond(r.basepoint)},
            {"nested", cond(r.nested)},                 {"absorbed_radius", absorbed},
            {"pass", r.all()}};
}

inline json to_json(const MuResult& r) {
    return {{"mu", r.mu}, {"lower", r.lower}, {"exact", r.exact}, {"nodes", r.nodes}};
}

}  // namespace asdim::io
