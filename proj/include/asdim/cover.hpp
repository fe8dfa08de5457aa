#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "asdim/metric_ops.hpp"

namespace asdim {

struct CoverBlock {
    PointSet points;  // sorted
    std::size_t color = 0;
    friend bool operator==(const CoverBlock&, const CoverBlock&) = default;
};

/// Blocks with colors in {0, ..., colors-1}; same-color blocks D-disjoint, diameters <= R.
struct ColoredCover {
    std::vector<CoverBlock> blocks;
    Rational D{1};
    Rational R{0};
    std::size_t colors = 1;
    friend bool operator==(const ColoredCover&, const ColoredCover&) = default;
};

struct CoverCheck {
    bool covers = true;
    bool disjoint = true;
    bool bounded = true;
    std::string detail;
    [[nodiscard]] bool ok() const { return covers && disjoint && bounded; }
};

inline CoverCheck check_cover(const FiniteMetricSpace& s, const ColoredCover& c) {
    CoverCheck r;
    std::vector<char> hit(s.size(), 0);
    for (const auto& b : c.blocks)
        for (auto p : b.points) hit[p] = 1;
    for (PointIndex p = 0; p < s.size(); ++p)
        if (!hit[p]) {
            r.covers = false;
            r.detail = "point " + s.id(p) + " uncovered";
            break;
        }
    const auto du = s.ceil_units(c.D);
    const auto ru = s.floor_units(c.R);
    for (std::size_t i = 0; i < c.blocks.size(); ++i) {
        if (r.bounded && diameter_units(s, c.blocks[i].points) > ru) {
            r.bounded = false;
            r.detail = "block " + std::to_string(i) + " exceeds the diameter bound";
        }
        if (c.blocks[i].color >= c.colors) {
            r.disjoint = false;
            r.detail = "block " + std::to_string(i) + " has color out of range";
        }
        for (std::size_t j = i + 1; j < c.blocks.size() && r.disjoint; ++j)
            if (c.blocks[i].color == c.blocks[j].color &&
                set_distance_units(s, c.blocks[i].points, c.blocks[j].points) < du) {
                r.disjoint = false;
                r.detail = "blocks " + std::to_string(i) + " and " + std::to_string(j) + " are closer than D";
            }
    }
    return r;
}

/// Largest block diameter.
inline Rational mesh(const FiniteMetricSpace& s, const ColoredCover& c) {
    if (c.blocks.empty()) throw EmptyCover();
    std::int64_t m = 0;
    for (const auto& b : c.blocks) m = std::max(m, diameter_units(s, b.points));
    return s.from_units(m);
}

/// Depth of every point inside block U: d(x, X \ U), kInfUnits if U = X, 0 off U.
inline std::vector<std::int64_t> depth_units(const FiniteMetricSpace& s, const PointSet& U) {
    std::vector<char> in(s.size(), 0);
    for (auto p : U) in[p] = 1;
    std::vector<std::int64_t> d(s.size(), 0);
    for (auto x : U) {
        std::int64_t m = kInfUnits;
        for (PointIndex y = 0; y < s.size(); ++y)
            if (!in[y]) m = std::min(m, s.units(x, y));
        d[x] = m;
    }
    return d;
}

/// inf over x of sup over U of d(x, X \ U); infinite if some block is the whole space.
inline Extended lebesgue(const FiniteMetricSpace& s, const ColoredCover& c) {
    if (c.blocks.empty()) throw EmptyCover();
    std::vector<std::int64_t> best(s.size(), 0);
    for (const auto& b : c.blocks) {
        auto d = depth_units(s, b.points);
        for (PointIndex x = 0; x < s.size(); ++x) best[x] = std::max(best[x], d[x]);
    }
    std::int64_t m = kInfUnits;
    for (auto v : best) m = std::min(m, v);
    if (m >= kInfUnits) return Extended::inf();
    return {false, s.from_units(m)};
}

namespace detail {

/// Exact k-colorability by backtracking in largest-degree-first order.
inline bool color_with(const std::vector<std::vector<char>>& adj, std::size_t k, std::vector<std::size_t>& col) {
    const std::size_t n = adj.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::size_t> deg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) deg[i] += adj[i][j];
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return deg[a] > deg[b]; });
    col.assign(n, k);
    std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t idx, std::size_t used) {
        if (idx == n) return true;
        auto v = order[idx];
        for (std::size_t c = 0; c < std::min(k, used + 1); ++c) {
            bool ok = true;
            for (std::size_t u = 0; u < n && ok; ++u)
                if (adj[v][u] && col[u] == c) ok = false;
            if (!ok) continue;
            col[v] = c;
            if (go(idx + 1, std::max(used, c + 1))) return true;
            col[v] = k;
        }
        return false;
    };
    return go(0, 0);
}

/// DSATUR greedy coloring.
inline std::size_t dsatur(const std::vector<std::vector<char>>& adj, std::vector<std::size_t>& col) {
    const std::size_t n = adj.size();
    const std::size_t none = n + 1;
    col.assign(n, none);
    std::vector<std::vector<char>> seen(n, std::vector<char>(n + 1, 0));
    std::vector<std::size_t> sat(n, 0), deg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) deg[i] += adj[i][j];
    std::size_t used = 0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t v = none;
        for (std::size_t u = 0; u < n; ++u) {
            if (col[u] != none) continue;
            if (v == none || sat[u] > sat[v] || (sat[u] == sat[v] && deg[u] > deg[v])) v = u;
        }
        std::size_t c = 0;
        while (seen[v][c]) ++c;
        col[v] = c;
        used = std::max(used, c + 1);
        for (std::size_t u = 0; u < n; ++u)
            if (adj[v][u] && !seen[u][c]) {
                seen[u][c] = 1;
                ++sat[u];
            }
    }
    return used;
}

}  // namespace detail

inline constexpr std::size_t kExactColoringCap = 25;

struct DimAtScaleResult {
    std::size_t colors_used = 0;
    bool exact = true;  // coloring of the block conflict graph is optimal
    ColoredCover witness;
    std::size_t lower_bound = 1;
    [[nodiscard]] std::size_t dimension_bound() const { return colors_used - 1; }
};

/// Colors the conflict graph of `blocks` (edges at distance < D) and packs the cover.
inline DimAtScaleResult color_blocks(const FiniteMetricSpace& s, std::vector<PointSet> blocks, const Rational& D,
                                     const Rational& R) {
    const auto du = s.ceil_units(D);
    const std::size_t m = blocks.size();
    std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (set_distance_units(s, blocks[i], blocks[j]) < du) adj[i][j] = adj[j][i] = 1;
    std::vector<std::size_t> col;
    DimAtScaleResult res;
    std::size_t ub = m == 0 ? 0 : detail::dsatur(adj, col);
    res.exact = m <= kExactColoringCap;
    if (res.exact) {
        std::vector<std::size_t> trial;
        for (std::size_t k = 1; k < ub; ++k)
            if (detail::color_with(adj, k, trial)) {
                ub = k;
                col = trial;
                break;
            }
    }
    res.colors_used = std::max<std::size_t>(ub, 1);
    res.witness.D = D;
    res.witness.R = R;
    res.witness.colors = res.colors_used;
    for (std::size_t i = 0; i < m; ++i) res.witness.blocks.push_back({std::move(blocks[i]), col[i]});
    return res;
}

enum class Blocker { chain, grid };

namespace detail {

/// Chain components, with oversized components split by greedy R-diameter clustering in id order.
inline std::vector<PointSet> chain_blocks(const FiniteMetricSpace& s, const Rational& D, const Rational& R) {
    const auto du = s.ceil_units(D);
    const auto ru = s.floor_units(R);
    std::vector<PointSet> out;
    for (auto& comp : chain_components(s, all_points(s), du)) {
        if (diameter_units(s, comp) <= ru) {
            out.push_back(std::move(comp));
            continue;
        }
        std::vector<char> used(comp.size(), 0);
        for (std::size_t i = 0; i < comp.size(); ++i) {
            if (used[i]) continue;
            PointSet cl{comp[i]};
            used[i] = 1;
            for (std::size_t j = i + 1; j < comp.size(); ++j) {
                if (used[j]) continue;
                bool near = true;
                for (auto q : cl)
                    if (s.units(q, comp[j]) > ru) {
                        near = false;
                        break;
                    }
                if (near) {
                    cl.push_back(comp[j]);
                    used[j] = 1;
                }
            }
            for (auto& sub : chain_components(s, cl, du)) out.push_back(std::move(sub));
        }
    }
    std::sort(out.begin(), out.end(), [](const PointSet& a, const PointSet& b) { return a.front() < b.front(); });
    return out;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace detail

/// Brick-wall cover of an integer grid (dimension 1 or 2): bricks of height D and
/// width 2D, row r shifted by r*D, colored (c + 2r) mod 3. Dimension 1 uses
/// alternating intervals of length D.
inline ColoredCover brick_wall_cover(const FiniteMetricSpace& s, const Rational& D) {
    if (s.is_dense() || s.scale() != 1 || s.dimension() > 2) throw BadParameters("brick-wall blocker needs a 1- or 2-dimensional integer grid");
    if (!D.is_integer() || D < Rational(1)) throw BadParameters("brick-wall blocker needs an integer scale");
    const auto d = D.num();
    std::map<std::pair<std::int64_t, std::int64_t>, PointSet> cells;
    for (PointIndex p = 0; p < s.size(); ++p) {
        const auto* c = &s.coords()[p * s.dimension()];
        if (s.dimension() == 1) {
            cells[{detail::floor_div(c[0], d), 0}].push_back(p);
        } else {
            auto row = detail::floor_div(c[1], d);
            auto col = detail::floor_div(c[0] - row * d, 2 * d);
            cells[{col, row}].push_back(p);
        }
    }
    ColoredCover cv;
    cv.D = D;
    cv.colors = s.dimension() == 1 ? 2 : 3;
    std::int64_t diam = 0;
    for (auto& [key, pts] : cells) {
        auto [c, r] = key;
        std::int64_t color = s.dimension() == 1 ? c : c + 2 * r;
        color = ((color % static_cast<std::int64_t>(cv.colors)) + static_cast<std::int64_t>(cv.colors)) %
                static_cast<std::int64_t>(cv.colors);
        diam = std::max(diam, diameter_units(s, pts));
        cv.blocks.push_back({std::move(pts), static_cast<std::size_t>(color)});
    }
    std::sort(cv.blocks.begin(), cv.blocks.end(),
              [](const CoverBlock& a, const CoverBlock& b) { return a.points.front() < b.points.front(); });
    cv.R = Rational(diam);
    return cv;
}

/// Dimension-at-scale estimate: colors_used - 1 bounds the dimension at (D, R).
inline DimAtScaleResult color_cover_at_scale(const FiniteMetricSpace& s, const Rational& D, const Rational& R,
                                             Blocker blocker = Blocker::chain) {
    if (D <= Rational(0) || R <= Rational(0)) throw BadScale();
    if (blocker == Blocker::grid) {
        auto cv = brick_wall_cover(s, D);
        if (cv.R > R) throw BadParameters("brick diameter " + cv.R.str() + " exceeds R");
        DimAtScaleResult res;
        res.colors_used = cv.colors;
        res.exact = false;
        cv.R = R;
        res.witness = std::move(cv);
        return res;
    }
    return color_blocks(s, detail::chain_blocks(s, D, R), D, R);
}

inline constexpr std::size_t kOracleCap = 14;

namespace detail {

/// Exhaustive coloring search. For a fixed color class the blocks may be taken
/// to be its <D chain components, so only point colorings are enumerated.
class ScaleOracle {
public:
    ScaleOracle(const FiniteMetricSpace& s, std::int64_t du, std::int64_t ru) : s_(s), du_(du), ru_(ru) {}

    bool feasible(std::size_t k) {
        k_ = k;
        col_.assign(s_.size(), k);
        return go(0, 0);
    }

private:
    // Diameter of the chain component of p inside color class c among assigned points.
    bool component_ok(PointIndex p, std::size_t c) {
        std::vector<char> in(s_.size(), 0);
        PointSet stack{p}, comp;
        in[p] = 1;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (PointIndex v = 0; v < s_.size(); ++v)
                if (!in[v] && col_[v] == c && s_.units(u, v) < du_) {
                    in[v] = 1;
                    stack.push_back(v);
                }
        }
        return diameter_units(s_, comp) <= ru_;
    }

    bool go(PointIndex p, std::size_t used) {
        if (p == s_.size()) return true;
        for (std::size_t c = 0; c < std::min(k_, used + 1); ++c) {
            col_[p] = c;
            if (component_ok(p, c) && go(p + 1, std::max(used, c + 1))) return true;
        }
        col_[p] = k_;
        return false;
    }

    const FiniteMetricSpace& s_;
    std::int64_t du_, ru_;
    std::size_t k_ = 0;
    std::vector<std::size_t> col_;
};

}  // namespace detail

/// True minimum number of colors minus one, by exhaustive search.
inline std::size_t dim_at_scale_oracle(const FiniteMetricSpace& s, const Rational& D, const Rational& R) {
    if (s.size() > kOracleCap) throw TooLarge(s.size(), kOracleCap);
    if (D <= Rational(0) || R < Rational(0)) throw BadScale();
    if (s.size() == 0) return 0;
    detail::ScaleOracle o(s, s.ceil_units(D), s.floor_units(R));
    for (std::size_t k = 1;; ++k)
        if (o.feasible(k)) return k - 1;
}

}  // namespace asdim
