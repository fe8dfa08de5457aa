#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asdim/tree.hpp"

namespace asdim {

struct ProductPoint {
    std::vector<TreePoint> coords;
    friend bool operator==(const ProductPoint&, const ProductPoint&) = default;
    friend auto operator<=>(const ProductPoint&, const ProductPoint&) = default;
};

using TreeFamily = std::vector<FilteredTree>;

inline ProductPoint canonical(const TreeFamily& trees, ProductPoint p) {
    if (p.coords.size() != trees.size()) throw BadParameters("product point has the wrong number of coordinates");
    for (std::size_t i = 0; i < trees.size(); ++i) p.coords[i] = trees[i].canonical(p.coords[i]);
    return p;
}

inline ProductPoint retract(const TreeFamily& trees, std::size_t j, ProductPoint p) {
    for (std::size_t i = 0; i < trees.size(); ++i) p.coords[i] = trees[i].retract(j, p.coords[i]);
    return p;
}

/// Sup metric on the product of trees.
inline Rational product_distance(const TreeFamily& trees, const ProductPoint& a, const ProductPoint& b) {
    Rational m{0};
    for (std::size_t i = 0; i < trees.size(); ++i) m = max(m, trees[i].distance(a.coords[i], b.coords[i]));
    return m;
}

inline std::size_t top_level(const TreeFamily& trees) {
    if (trees.empty()) throw EmptyCover();
    std::size_t t = trees[0].top_level();
    for (const auto& tr : trees) t = std::min(t, tr.top_level());
    return t;
}

/// Points with their root chains precomputed, for bulk sup-distance scans.
class ChainedPoints {
public:
    ChainedPoints(const TreeFamily& trees, const std::vector<ProductPoint>& pts) {
        ticks_ = 1;
        for (const auto& t : trees) ticks_ = std::lcm(ticks_, t.ticks());
        for (const auto& t : trees) mult_.push_back(ticks_ / t.ticks());
        chains_.reserve(pts.size());
        for (const auto& p : pts) {
            std::vector<TreeChain> c;
            for (std::size_t i = 0; i < trees.size(); ++i) c.push_back(trees[i].chain(p.coords[i]));
            chains_.push_back(std::move(c));
        }
    }
    [[nodiscard]] std::size_t size() const { return chains_.size(); }
    [[nodiscard]] std::int64_t ticks() const { return ticks_; }
    [[nodiscard]] std::int64_t scale() const { return ticks_; }
    /// Sup distance in ticks.
    [[nodiscard]] std::int64_t units(std::size_t a, std::size_t b) const {
        std::int64_t m = 0;
        for (std::size_t i = 0; i < mult_.size(); ++i)
            m = std::max(m, mult_[i] * FilteredTree::chain_distance(chains_[a][i], chains_[b][i]));
        return m;
    }
    [[nodiscard]] Rational dist(std::size_t a, std::size_t b) const { return Rational(units(a, b), ticks_); }

private:
    std::int64_t ticks_ = 1;
    std::vector<std::int64_t> mult_;
    std::vector<std::vector<TreeChain>> chains_;
};

struct Provenance {
    std::size_t level = 0;
    std::int64_t block = -1;
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct EmbeddingMap {
    std::vector<ProductPoint> images;             // per space point
    std::vector<std::vector<Provenance>> source;  // [point][color]
    friend bool operator==(const EmbeddingMap&, const EmbeddingMap&) = default;
};

/// f^i(x) = f_U(x) on I_U for the minimal-level color-i block U containing x.
inline EmbeddingMap embed_product(const FiniteMetricSpace& s, const CoverSequence& seq, const std::vector<TreeBuild>& builds) {
    if (builds.size() != seq.colors) throw BadParameters("need one tree per color");
    EmbeddingMap e;
    e.images.assign(s.size(), ProductPoint{std::vector<TreePoint>(seq.colors)});
    e.source.assign(s.size(), std::vector<Provenance>(seq.colors));
    for (std::size_t c = 0; c < seq.colors; ++c) {
        const auto& tb = builds[c];
        std::vector<char> done(s.size(), 0);
        for (std::size_t k = 0; k < seq.levels.size(); ++k)
            for (std::size_t b = 0; b < seq.levels[k].blocks.size(); ++b) {
                const auto& blk = seq.levels[k].blocks[b];
                if (blk.color != c) continue;
                const auto gid = seq.global_id(k, b);
                const auto seg = tb.tree.segment_of_block(gid);
                const auto& map = tb.maps[seg];
                for (std::size_t i = 0; i < map.points.size(); ++i) {
                    auto x = map.points[i];
                    if (done[x]) continue;
                    done[x] = 1;
                    e.images[x].coords[c] = tb.tree.canonical({seg, map.values[i]});
                    e.source[x][c] = {k, gid};
                }
            }
        for (PointIndex x = 0; x < s.size(); ++x)
            if (!done[x]) throw UncoveredPoint(x, c);
    }
    return e;
}

inline TreeFamily trees_of(const std::vector<TreeBuild>& builds) {
    TreeFamily t;
    for (const auto& b : builds) t.push_back(b.tree);
    return t;
}

struct SeparationReport {
    bool pass = true;
    std::size_t level = 0;
    PointIndex x = 0, y = 0;
};

/// d(x, y) > m_k implies sup-distance of images >= 2^k, over all pairs and levels.
inline SeparationReport check_separation(const FiniteMetricSpace& s, const CoverSequence& seq, const TreeFamily& trees,
                                         const EmbeddingMap& e) {
    ChainedPoints cp(trees, e.images);
    std::vector<std::int64_t> m_units, need;
    for (std::size_t k = 0; k < seq.levels.size(); ++k) {
        m_units.push_back(s.floor_units(seq.m[k]));
        need.push_back((Rational::pow2(static_cast<int>(k)) * Rational(cp.ticks())).ceil());
    }
    SeparationReport r;
    for (PointIndex x = 0; x < s.size(); ++x)
        for (PointIndex y = x + 1; y < s.size(); ++y) {
            const auto d = s.units(x, y);
            std::int64_t img = -1;
            for (std::size_t k = 0; k < m_units.size(); ++k) {
                if (d <= m_units[k]) continue;
                if (img < 0) img = cp.units(x, y);
                if (img < need[k]) return {false, k, x, y};
            }
        }
    return r;
}

struct MembershipResult {
    bool member = true;
    std::vector<std::size_t> witness;  // coordinate per level, in order of the range
    std::optional<std::size_t> failing_level;
};

/// Base points of level-(j-1) segments, per tree and level.
class BaseIndex {
public:
    explicit BaseIndex(const TreeFamily& trees) {
        for (const auto& t : trees) {
            std::vector<std::set<TreePoint>> per;
            for (std::size_t k = 0; k <= t.top_level(); ++k) per.push_back(t.bases(k));
            bases_.push_back(std::move(per));
        }
    }
    [[nodiscard]] bool contains(std::size_t tree, std::size_t level, const TreePoint& p) const {
        return level < bases_[tree].size() && bases_[tree][level].count(p) > 0;
    }

private:
    std::vector<std::vector<std::set<TreePoint>>> bases_;
};

/// For each j in [lo, hi]: some coordinate i with r_j(p_i) a base point of a level-(j-1) segment.
inline MembershipResult m_membership(const ProductPoint& p, const TreeFamily& trees, const BaseIndex& idx, std::size_t lo,
                                     std::size_t hi) {
    MembershipResult r;
    if (lo > hi) return r;
    if (lo < 1 || hi > top_level(trees)) throw LevelOutOfRange(static_cast<int>(lo < 1 ? lo : hi));
    for (std::size_t j = lo; j <= hi; ++j) {
        std::optional<std::size_t> w;
        for (std::size_t i = 0; i < trees.size() && !w; ++i)
            if (idx.contains(i, j - 1, trees[i].retract(j, p.coords[i]))) w = i;
        if (!w) {
            r.member = false;
            r.failing_level = j;
            return r;
        }
        r.witness.push_back(*w);
    }
    return r;
}

inline MembershipResult m_membership(const ProductPoint& p, const TreeFamily& trees, std::size_t lo, std::size_t hi) {
    return m_membership(p, trees, BaseIndex(trees), lo, hi);
}

struct ArcPath {
    std::vector<ProductPoint> points;
    std::size_t merge_level = 0;
    Rational diameter{0};
};

/// Retraction zigzag x -> r_1(x) -> ... -> r_j(x) = r_j(y) <- ... <- y, one coordinate at a time.
/// Pieces are geodesics in a single factor, so the diameter is attained at the vertices.
inline ArcPath arcwise_path(const TreeFamily& trees, const ProductPoint& x0, const ProductPoint& y0) {
    auto x = canonical(trees, x0), y = canonical(trees, y0);
    const auto top = top_level(trees);
    std::optional<std::size_t> j;
    for (std::size_t l = 0; l <= top && !j; ++l)
        if (retract(trees, l, x) == retract(trees, l, y)) j = l;
    if (!j) throw NoMergingLevel();
    auto side = [&](ProductPoint cur) {
        std::vector<ProductPoint> v{cur};
        for (std::size_t l = 1; l <= *j; ++l) {
            auto target = retract(trees, l, cur);
            for (std::size_t i = 0; i < trees.size(); ++i)
                if (!(cur.coords[i] == target.coords[i])) {
                    cur.coords[i] = target.coords[i];
                    v.push_back(cur);
                }
        }
        return v;
    };
    auto a = side(x), b = side(y);
    ArcPath out;
    out.merge_level = *j;
    out.points = std::move(a);
    for (std::size_t i = b.size() - 1; i-- > 0;) out.points.push_back(b[i]);
    ChainedPoints cp(trees, out.points);
    std::int64_t m = 0;
    for (std::size_t u = 0; u < cp.size(); ++u)
        for (std::size_t v = u + 1; v < cp.size(); ++v) m = std::max(m, cp.units(u, v));
    out.diameter = Rational(m, cp.ticks());
    return out;
}

}  // namespace asdim
