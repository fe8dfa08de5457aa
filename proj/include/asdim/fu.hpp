#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "asdim/ladder.hpp"

namespace asdim {

/// Rational values on a subset of a metric space's points.
struct ScalarMap {
    PointSet domain;
    std::vector<Rational> values;  // parallel to domain
    Rational lipschitz_bound{1};
};

struct Interval {
    Rational lo, hi;
};

/// Inf-convolution extension min_a (v(a) + lambda * d(x, a)) onto every point,
/// then clamped. Works with any metric exposing size(), units() and from_units().
template <typename Metric>
ScalarMap lipschitz_extend(const ScalarMap& map, const Metric& metric, const Rational& lambda,
                           std::optional<Interval> clamp = std::nullopt) {
    const auto& dom = map.domain;
    for (std::size_t a = 0; a < dom.size(); ++a)
        for (std::size_t b = a + 1; b < dom.size(); ++b)
            if (abs(map.values[a] - map.values[b]) > lambda * metric.from_units(metric.units(dom[a], dom[b])))
                throw InputNotLipschitz(dom[a], dom[b]);
    ScalarMap out;
    out.lipschitz_bound = lambda;
    const std::size_t n = metric.size();
    out.domain.resize(n);
    out.values.resize(n);
    for (PointIndex x = 0; x < n; ++x) {
        out.domain[x] = x;
        std::optional<Rational> best;
        for (std::size_t a = 0; a < dom.size(); ++a) {
            Rational v = map.values[a] + lambda * metric.from_units(metric.units(x, dom[a]));
            if (!best || v < *best) best = v;
        }
        if (!best) {
            if (!clamp) throw EmptyDomain();
            best = clamp->hi;
        }
        if (clamp) best = max(clamp->lo, min(clamp->hi, *best));
        out.values[x] = *best;
    }
    return out;
}

/// The map f_U on one ladder block together with its quotient data.
struct BlockMap {
    std::int64_t block = -1;
    std::size_t level = 0;
    std::size_t color = 0;
    PointSet points;                // global indices, sorted
    std::vector<Rational> values;   // parallel to points
    PointSet boundary;              // global indices
    std::vector<std::int64_t> children;
    std::vector<Rational> child_value;  // f_U on each child
    std::vector<Rational> child_spread; // max - min of f_U over each child

    [[nodiscard]] Rational at(PointIndex p) const {
        auto it = std::lower_bound(points.begin(), points.end(), p);
        if (it == points.end() || *it != p) throw UnknownPoint(std::to_string(p));
        return values[static_cast<std::size_t>(it - points.begin())];
    }
};

/// Quotient pseudometric of a block: points of U, with every child of U contracted.
struct BlockPseudometric {
    FiniteMetricSpace sub;
    Decomposition dec;
    std::vector<std::size_t> child_level;
    std::unordered_map<PointIndex, std::size_t> local;
    std::optional<QuotientPseudometric> rho;

    BlockPseudometric(const FiniteMetricSpace& s, const CoverSequence& seq, std::int64_t gid) {
        const auto& U = seq.block(gid).points;
        sub = subspace(s, U, "block");
        for (std::size_t i = 0; i < U.size(); ++i) local.emplace(U[i], i);
        for (auto c : seq.children(gid)) {
            PointSet lb;
            for (auto p : seq.block(c).points) lb.push_back(local.at(p));
            dec.blocks.push_back(std::move(lb));
            child_level.push_back(seq.locate(c).first);
        }
        rho.emplace(sub, dec);
    }
    BlockPseudometric(const BlockPseudometric&) = delete;
    BlockPseudometric& operator=(const BlockPseudometric&) = delete;
};

namespace detail {

inline PointSet block_boundary(const FiniteMetricSpace& s, const PointSet& U) {
    auto depth = depth_units(s, U);
    PointSet out;
    for (auto u : U)
        if (depth[u] <= 1) out.push_back(u);
    return out;
}

}  // namespace detail

/// f_U: descending rounding cascade theta_j / floor to multiples of 2^j with
/// Lipschitz extension over the block pseudometric, then a 1-Lipschitz
/// extension onto U clamped to [0, 2^k]. The whole space maps to 2^k.
inline BlockMap build_fU(const FiniteMetricSpace& s, const CoverSequence& seq, std::int64_t gid) {
    if (seq.psi.size() != seq.levels.size()) throw MissingParentTable();
    auto [k, b] = seq.locate(gid);
    const auto& blk = seq.levels[k].blocks[b];
    BlockMap out;
    out.block = gid;
    out.level = k;
    out.color = blk.color;
    out.points = blk.points;
    out.children = seq.children(gid);
    const Rational top = Rational::pow2(static_cast<int>(k));
    if (blk.points.size() == s.size()) {
        out.values.assign(out.points.size(), top);
    } else {
        out.boundary = detail::block_boundary(s, blk.points);
        BlockPseudometric bp(s, seq, gid);
        const auto& rho = *bp.rho;
        const std::size_t n = out.points.size();
        if (out.boundary.empty()) {
            out.values.assign(n, top);
        } else {
            std::vector<std::size_t> bl;
            for (auto p : out.boundary) bl.push_back(bp.local.at(p));
            // Domain D_j: boundary plus children of level >= j, in local indices.
            auto domain = [&](std::size_t j) {
                std::vector<char> in(n, 0);
                for (auto p : bl) in[p] = 1;
                for (std::size_t c = 0; c < bp.dec.blocks.size(); ++c)
                    if (bp.child_level[c] >= j)
                        for (auto p : bp.dec.blocks[c]) in[p] = 1;
                PointSet d;
                for (std::size_t p = 0; p < n; ++p)
                    if (in[p]) d.push_back(p);
                return d;
            };
            auto floor_to = [](Rational v, std::size_t j) {
                auto g = Rational::pow2(static_cast<int>(j));
                return g * Rational((v / g).floor());
            };
            ScalarMap cur;
            if (k == 0) {
                cur.domain = bl;
                cur.values.assign(bl.size(), Rational(0));
            } else {
                cur.domain = domain(k - 1);
                const Rational scale = Rational::pow2(-static_cast<int>(k));
                for (auto x : cur.domain) {
                    std::int64_t m = kInfUnits;
                    for (auto p : bl) m = std::min(m, rho.units(x, p));
                    cur.values.push_back(min(scale * rho.from_units(m), top));
                }
                for (auto& v : cur.values) v = floor_to(v, k - 1);
                for (std::size_t j = k - 1; j-- > 0;) {
                    auto next = domain(j);
                    auto ext = lipschitz_extend(cur, rho, Rational::pow2(-static_cast<int>(j)), Interval{Rational(0), top});
                    ScalarMap fl;
                    fl.domain = next;
                    for (auto x : next) fl.values.push_back(floor_to(ext.values[x], j));
                    cur = std::move(fl);
                }
            }
            auto fin = lipschitz_extend(cur, rho, Rational(1), Interval{Rational(0), top});
            out.values = std::move(fin.values);
        }
    }
    for (auto c : out.children) {
        std::optional<Rational> lo, hi;
        for (auto p : seq.block(c).points) {
            auto v = out.at(p);
            if (!lo || v < *lo) lo = v;
            if (!hi || v > *hi) hi = v;
        }
        // Attach at the minimum value; the spread is logged.
        out.child_value.push_back(*lo);
        out.child_spread.push_back(*hi - *lo);
    }
    return out;
}

struct BlockPropCheck {
    bool children_separated = true;  // children V (level j), W: rho(V, W) >= 2^{2j}
    bool deep_point = true;          // some x with rho(x, X \ U) >= 2^{2k}
    bool lipschitz = true;           // f_U is 1-Lipschitz for d
    bool zero_on_boundary = true;
    std::string witness;
};

/// Exact checks of the quotient bounds and of f_U's own contract.
inline BlockPropCheck check_block(const FiniteMetricSpace& s, const CoverSequence& seq, const BlockMap& f) {
    BlockPropCheck r;
    const auto k = f.level;
    const auto& U = f.points;
    for (std::size_t a = 0; a < U.size() && r.lipschitz; ++a)
        for (std::size_t b = a + 1; b < U.size(); ++b)
            if (abs(f.values[a] - f.values[b]) > s.dist(U[a], U[b])) {
                r.lipschitz = false;
                r.witness = "f_U not short on " + s.id(U[a]) + "," + s.id(U[b]);
                break;
            }
    for (auto p : f.boundary)
        if (f.at(p) != Rational(0)) {
            r.zero_on_boundary = false;
            r.witness = "f_U nonzero on boundary point " + s.id(p);
        }
    if (U.size() == s.size()) return r;  // whole space: rho(x, X \ U) is infinite
    BlockPseudometric bp(s, seq, f.block);
    const auto& rho = *bp.rho;
    const auto& dec = bp.dec.blocks;
    for (std::size_t v = 0; v < dec.size(); ++v)
        for (std::size_t w = v + 1; w < dec.size(); ++w) {
            auto j = std::min(bp.child_level[v], bp.child_level[w]);
            if (rho.dist(dec[v].front(), dec[w].front()) < Rational::pow2(static_cast<int>(2 * j))) {
                r.children_separated = false;
                r.witness = "children " + std::to_string(f.children[v]) + "," + std::to_string(f.children[w]);
            }
        }
    auto depth = depth_units(s, U);
    std::vector<std::int64_t> exit(U.size());
    for (std::size_t i = 0; i < U.size(); ++i) exit[i] = depth[U[i]];
    const Rational need = Rational::pow2(static_cast<int>(2 * k));
    bool found = false;
    for (std::size_t x = 0; x < U.size() && !found; ++x) {
        std::int64_t m = kInfUnits;
        for (std::size_t u = 0; u < U.size(); ++u) m = std::min(m, rho.units(x, u) + exit[u]);
        found = s.from_units(m) >= need;
    }
    if (!found) {
        r.deep_point = false;
        r.witness = "block " + std::to_string(f.block) + " has no point at quotient depth 2^{2k}";
    }
    return r;
}

}  // namespace asdim
