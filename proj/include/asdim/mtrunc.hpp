#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "asdim/embed.hpp"
#include "asdim/generators.hpp"

namespace asdim {

/// Finite sample of M(T^0, ..., T^n): step-grid product points passing membership at every level.
struct MTruncation {
    std::vector<ProductPoint> points;
    Rational step{1};
};

inline std::string point_id(const ProductPoint& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
        if (i) s += "|";
        s += std::to_string(p.coords[i].segment) + ":" + p.coords[i].t.str();
    }
    return s + ")";
}

/// Canonical step-grid points of one tree.
inline std::vector<TreePoint> tree_grid(const FilteredTree& t, const Rational& step) {
    std::set<TreePoint> pts;
    for (std::size_t s = 0; s < t.segments().size(); ++s) {
        const auto& g = t.segments()[s];
        for (Rational x{0}; x <= g.length; x += step) pts.insert(t.canonical({s, x}));
    }
    return {pts.begin(), pts.end()};
}

inline MTruncation build_m_truncation(const TreeFamily& trees, const Rational& step, std::size_t cap = kDefaultPointCap) {
    if (step <= Rational(0)) throw BadScale();
    std::vector<std::vector<TreePoint>> grids;
    std::size_t total = 1;
    for (const auto& t : trees) {
        grids.push_back(tree_grid(t, step));
        total *= grids.back().size();
        if (total > 100 * cap) throw CapExceeded(total, 100 * cap);
    }
    const auto top = top_level(trees);
    BaseIndex idx(trees);
    MTruncation m;
    m.step = step;
    for (std::size_t n = 0; n < total; ++n) {
        ProductPoint p;
        for (std::size_t i = 0, r = n; i < trees.size(); ++i) {
            p.coords.push_back(grids[i][r % grids[i].size()]);
            r /= grids[i].size();
        }
        if (m_membership(p, trees, idx, 1, top).member) {
            m.points.push_back(std::move(p));
            if (m.points.size() > cap) throw CapExceeded(m.points.size(), cap);
        }
    }
    std::sort(m.points.begin(), m.points.end());
    return m;
}

// The sup-metric space is stored as a full matrix.
inline constexpr std::size_t kDenseSpaceCap = 12000;

/// The truncation as a finite metric space with the sup metric.
inline FiniteMetricSpace truncation_space(const TreeFamily& trees, const std::vector<ProductPoint>& pts,
                                          const std::string& label = "M-truncation") {
    const std::size_t n = pts.size();
    if (n > kDenseSpaceCap) throw CapExceeded(n, kDenseSpaceCap);
    ChainedPoints cp(trees, pts);
    std::vector<std::int64_t> d(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) d[a * n + b] = d[b * n + a] = cp.units(a, b);
    std::vector<std::string> ids;
    for (const auto& p : pts) ids.push_back(point_id(p));
    return FiniteMetricSpace::dense(std::move(ids), std::move(d), cp.ticks(), label);
}

namespace detail {

/// Grid piece of a point of T_j: the closed interval of length g containing it, degenerate at grid vertices.
struct Piece {
    TreePoint u, v;
    friend auto operator<=>(const Piece&, const Piece&) = default;
    friend bool operator==(const Piece&, const Piece&) = default;
};

inline Piece piece_of(const FilteredTree& t, const TreePoint& q0, const Rational& g) {
    auto q = t.canonical(q0);
    auto lo = g * Rational((q.t / g).floor());
    if (lo == q.t) return {q, q};
    return {t.canonical({q.segment, lo}), t.canonical({q.segment, lo + g})};
}

inline Rational distance_to_piece(const FilteredTree& t, const TreePoint& x, const Piece& p) {
    return (t.distance(x, p.u) + t.distance(x, p.v) - t.distance(p.u, p.v)) / Rational(2);
}

inline Rational grid_of_level(std::size_t j) { return Rational::pow2(static_cast<int>(j) - 1); }

}  // namespace detail

struct SeparatorResult {
    std::vector<std::size_t> U, V, S;  // indices into the truncation
    std::size_t cells = 0;             // |U-hat|
    bool separates = false;
};

/// U = {d(p,A) <= d(p,B)/2}, V symmetric; U-hat = level-j grid cells of r_j(U);
/// S = points of the open 1/2-neighborhood of U-hat with a step-neighbor outside it.
inline SeparatorResult separator_candidate(const TreeFamily& trees, const MTruncation& m, const std::vector<std::size_t>& A,
                                           const std::vector<std::size_t>& B, std::size_t j) {
    if (A.empty() || B.empty()) throw DegenerateSides();
    if (j > top_level(trees)) throw LevelOutOfRange(static_cast<int>(j));
    const std::size_t n = m.points.size();
    for (auto a : A)
        if (a >= n) throw UnknownPoint(std::to_string(a));
    for (auto b : B)
        if (b >= n) throw UnknownPoint(std::to_string(b));
    ChainedPoints cp(trees, m.points);
    SeparatorResult r;
    for (std::size_t p = 0; p < n; ++p) {
        std::int64_t da = kInfUnits, db = kInfUnits;
        for (auto a : A) da = std::min(da, cp.units(p, a));
        for (auto b : B) db = std::min(db, cp.units(p, b));
        if (2 * da <= db) r.U.push_back(p);
        if (2 * db <= da) r.V.push_back(p);
    }
    const auto g = detail::grid_of_level(j);
    std::set<std::vector<detail::Piece>> cells;
    std::vector<ProductPoint> rj(n);
    for (std::size_t p = 0; p < n; ++p) rj[p] = retract(trees, j, m.points[p]);
    for (auto u : r.U) {
        std::vector<detail::Piece> c;
        for (std::size_t i = 0; i < trees.size(); ++i) c.push_back(detail::piece_of(trees[i], rj[u].coords[i], g));
        cells.insert(std::move(c));
    }
    r.cells = cells.size();
    const Rational half(1, 2);
    std::vector<char> inside(n, 0);
    for (std::size_t p = 0; p < n; ++p)
        for (const auto& c : cells) {
            bool near = true;
            for (std::size_t i = 0; i < trees.size() && near; ++i)
                near = detail::distance_to_piece(trees[i], rj[p].coords[i], c[i]) < half;
            if (near) {
                inside[p] = 1;
                break;
            }
        }
    const auto h = (m.step * Rational(cp.ticks())).floor();
    std::vector<char> in_s(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        if (!inside[p]) continue;
        for (std::size_t q = 0; q < n; ++q)
            if (!inside[q] && cp.units(p, q) <= h) {
                in_s[p] = 1;
                r.S.push_back(p);
                break;
            }
    }
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> queue;
    for (auto u : r.U)
        if (!in_s[u]) {
            seen[u] = 1;
            queue.push_back(u);
        }
    while (!queue.empty()) {
        auto p = queue.front();
        queue.pop_front();
        for (std::size_t q = 0; q < n; ++q)
            if (!seen[q] && !in_s[q] && cp.units(p, q) <= h) {
                seen[q] = 1;
                queue.push_back(q);
            }
    }
    r.separates = true;
    for (auto v : r.V)
        if (!in_s[v] && seen[v]) r.separates = false;
    return r;
}

/// Level-k cover of a truncation: the grid of T_k (spacing 2^{k-1}) classifies each
/// coordinate of r_k(p) as near a vertex (< g/3) or in the middle of an edge; blocks
/// are preimages of the classification, colored by the number of middle coordinates.
inline ColoredCover higson_cover(const TreeFamily& trees, const std::vector<ProductPoint>& pts, std::size_t k) {
    if (k < 1 || k > top_level(trees)) throw LevelOutOfRange(static_cast<int>(k));
    const auto g = detail::grid_of_level(k);
    const auto a = g / Rational(3);
    std::map<std::vector<detail::Piece>, std::size_t> key_of;
    ColoredCover c;
    c.colors = trees.size();
    c.D = a;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        auto q = retract(trees, k, pts[p]);
        std::vector<detail::Piece> key;
        std::size_t middle = 0;
        for (std::size_t i = 0; i < trees.size(); ++i) {
            auto x = trees[i].canonical(q.coords[i]);
            auto near = g * Rational((x.t / g + Rational(1, 2)).floor());
            if (abs(x.t - near) < a) {
                auto v = trees[i].canonical({x.segment, near});
                key.push_back({v, v});
            } else {
                key.push_back(detail::piece_of(trees[i], x, g));
                ++middle;
            }
        }
        auto [it, fresh] = key_of.emplace(std::move(key), c.blocks.size());
        if (fresh) c.blocks.push_back({{}, middle});
        c.blocks[it->second].points.push_back(p);
    }
    ChainedPoints cp(trees, pts);
    std::int64_t r = 0;
    for (const auto& b : c.blocks)
        for (std::size_t x = 0; x < b.points.size(); ++x)
            for (std::size_t y = x + 1; y < b.points.size(); ++y) r = std::max(r, cp.units(b.points[x], b.points[y]));
    c.R = Rational(r, cp.ticks());
    return c;
}

}  // namespace asdim
