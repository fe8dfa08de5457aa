#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "asdim/fu.hpp"

namespace asdim {

/// Glued segment I_U = [0, 2^k]; 0 is identified with `attach` on the parent segment.
struct TreeSegment {
    std::int64_t block = -1;
    std::size_t level = 0;
    Rational length{1};
    std::int64_t parent = -1;  // segment index, -1 for the root segment
    Rational attach{0};
    Rational spread{0};  // variation of the parent map over the block
    friend bool operator==(const TreeSegment&, const TreeSegment&) = default;
};

struct TreePoint {
    std::size_t segment = 0;
    Rational t{0};
    friend bool operator==(const TreePoint&, const TreePoint&) = default;
    friend auto operator<=>(const TreePoint& a, const TreePoint& b) {
        if (a.segment != b.segment) return a.segment <=> b.segment;
        return a.t <=> b.t;
    }
};

/// Climb from a point to the root: (segment, parameter) pairs, parameters in ticks.
using TreeChain = std::vector<std::pair<std::size_t, std::int64_t>>;

/// Finite filtered tree; T_j is the union of segments of level >= j.
class FilteredTree {
public:
    FilteredTree() = default;
    FilteredTree(std::size_t color, std::vector<TreeSegment> segs) : color_(color), segments_(std::move(segs)) {
        std::size_t roots = 0;
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            const auto& g = segments_[s];
            if (g.parent < 0) {
                root_ = s;
                ++roots;
                continue;
            }
            const auto& p = segments_[static_cast<std::size_t>(g.parent)];
            if (p.level <= g.level) throw CycleDetected("segment " + std::to_string(s) + " is glued to a segment of no higher level");
            if (g.attach < Rational(0) || g.attach > p.length) throw CycleDetected("attachment outside parent segment");
        }
        if (roots != 1) throw CycleDetected("tree must have exactly one root segment");
        ticks_ = 1;
        for (const auto& g : segments_) ticks_ = std::lcm(std::lcm(ticks_, g.length.den()), g.attach.den());
        for (std::size_t s = 0; s < segments_.size(); ++s) by_block_.emplace(segments_[s].block, s);
    }

    [[nodiscard]] std::size_t color() const { return color_; }
    [[nodiscard]] const std::vector<TreeSegment>& segments() const { return segments_; }
    [[nodiscard]] std::size_t root() const { return root_; }
    [[nodiscard]] std::size_t top_level() const { return segments_[root_].level; }
    [[nodiscard]] std::int64_t ticks() const { return ticks_; }
    [[nodiscard]] std::size_t segment_of_block(std::int64_t gid) const {
        auto it = by_block_.find(gid);
        if (it == by_block_.end()) throw UnattachedSegment(static_cast<std::size_t>(gid));
        return it->second;
    }

    /// 0 on a non-root segment is the parent's attachment point.
    [[nodiscard]] TreePoint canonical(TreePoint p) const {
        while (p.t == Rational(0) && segments_[p.segment].parent >= 0) {
            const auto& g = segments_[p.segment];
            p = {static_cast<std::size_t>(g.parent), g.attach};
        }
        return p;
    }
    [[nodiscard]] std::size_t level(const TreePoint& p) const { return segments_[canonical(p).segment].level; }

    /// Canonical retraction onto T_j.
    [[nodiscard]] TreePoint retract(std::size_t j, TreePoint p) const {
        if (j > top_level()) throw LevelOutOfRange(static_cast<int>(j));
        p = canonical(p);
        while (segments_[p.segment].level < j) {
            const auto& g = segments_[p.segment];
            p = canonical({static_cast<std::size_t>(g.parent), g.attach});
        }
        return p;
    }

    [[nodiscard]] TreeChain chain(TreePoint p) const {
        p = canonical(p);
        TreeChain c;
        c.emplace_back(p.segment, to_ticks(p.t));
        for (auto s = p.segment; segments_[s].parent >= 0;) {
            const auto& g = segments_[s];
            s = static_cast<std::size_t>(g.parent);
            c.emplace_back(s, to_ticks(g.attach));
        }
        return c;
    }

    /// Path length between chains, in ticks.
    static std::int64_t chain_distance(const TreeChain& a, const TreeChain& b) {
        // Chains end at the root; align from the top to find the lowest common segment.
        std::size_t ia = a.size(), ib = b.size();
        while (ia > 0 && ib > 0 && a[ia - 1].first == b[ib - 1].first) {
            --ia;
            --ib;
        }
        // a[ia], b[ib] is the lowest shared segment.
        std::int64_t d = 0;
        for (std::size_t m = 0; m < ia; ++m) d += a[m].second;
        for (std::size_t m = 0; m < ib; ++m) d += b[m].second;
        auto pa = a[ia].second, pb = b[ib].second;
        return d + (pa > pb ? pa - pb : pb - pa);
    }

    [[nodiscard]] Rational distance(const TreePoint& a, const TreePoint& b) const {
        return Rational(chain_distance(chain(a), chain(b)), ticks_);
    }

    /// Vertices of T_j with their incident edge lengths: segment ends and attachment points.
    [[nodiscard]] std::map<TreePoint, std::vector<std::pair<TreePoint, Rational>>> skeleton(std::size_t j) const {
        std::vector<std::vector<Rational>> cuts(segments_.size());
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            const auto& g = segments_[s];
            if (g.level < j) continue;
            cuts[s].push_back(Rational(0));
            cuts[s].push_back(g.length);
            if (g.parent >= 0) cuts[static_cast<std::size_t>(g.parent)].push_back(g.attach);
        }
        std::map<TreePoint, std::vector<std::pair<TreePoint, Rational>>> adj;
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            if (segments_[s].level < j) continue;
            auto& c = cuts[s];
            std::sort(c.begin(), c.end());
            c.erase(std::unique(c.begin(), c.end()), c.end());
            for (std::size_t i = 0; i + 1 < c.size(); ++i) {
                auto u = canonical({s, c[i]});
                auto v = canonical({s, c[i + 1]});
                adj[u].emplace_back(v, c[i + 1] - c[i]);
                adj[v].emplace_back(u, c[i + 1] - c[i]);
            }
            if (c.size() == 1) adj[canonical({s, c[0]})];
        }
        return adj;
    }

    /// Infimum of lengths of maximal free segments of T_j (edges after smoothing degree-2 vertices).
    [[nodiscard]] Rational mesh(std::size_t j) const {
        auto adj = skeleton(j);
        std::optional<Rational> best;
        std::set<std::pair<TreePoint, TreePoint>> used;
        for (const auto& [v, nb] : adj) {
            if (nb.size() == 2) continue;
            for (const auto& [w0, len0] : nb) {
                TreePoint prev = v, cur = w0;
                Rational len = len0;
                while (adj.at(cur).size() == 2) {
                    const auto& e = adj.at(cur);
                    auto nxt = e[0].first == prev ? e[1] : e[0];
                    prev = cur;
                    cur = nxt.first;
                    len += nxt.second;
                }
                if (!best || len < *best) best = len;
            }
        }
        if (!best) throw BadParameters("tree level " + std::to_string(j) + " is empty");
        return *best;
    }

    [[nodiscard]] std::size_t max_degree() const {
        std::size_t m = 0;
        for (const auto& [v, nb] : skeleton(0)) m = std::max(m, nb.size());
        return m;
    }

    /// Canonical base points of the segments of level k (the boundary of T_k \ T_{k+1} in T_k).
    [[nodiscard]] std::set<TreePoint> bases(std::size_t k) const {
        std::set<TreePoint> out;
        for (const auto& g : segments_)
            if (g.level == k && g.parent >= 0) out.insert(canonical({static_cast<std::size_t>(g.parent), g.attach}));
        return out;
    }

    friend bool operator==(const FilteredTree& a, const FilteredTree& b) {
        return a.color_ == b.color_ && a.segments_ == b.segments_;
    }

private:
    [[nodiscard]] std::int64_t to_ticks(const Rational& t) const { return (t * Rational(ticks_)).num(); }

    std::size_t color_ = 0;
    std::vector<TreeSegment> segments_;
    std::size_t root_ = 0;
    std::int64_t ticks_ = 1;
    std::unordered_map<std::int64_t, std::size_t> by_block_;
};

struct TreeBuild {
    FilteredTree tree;
    std::vector<BlockMap> maps;  // parallel to tree segments
};

/// Tree of one color: a segment per block, glued at the parent's f-value on the block.
inline TreeBuild build_tree(const FiniteMetricSpace& s, const CoverSequence& seq, std::size_t color) {
    if (seq.psi.size() != seq.levels.size()) throw MissingParentTable();
    std::vector<std::int64_t> gids;
    for (std::size_t k = 0; k < seq.levels.size(); ++k)
        for (std::size_t b = 0; b < seq.levels[k].blocks.size(); ++b)
            if (seq.levels[k].blocks[b].color == color) gids.push_back(seq.global_id(k, b));
    if (gids.empty()) throw EmptyCover();
    std::unordered_map<std::int64_t, std::size_t> seg_of;
    for (std::size_t i = 0; i < gids.size(); ++i) seg_of.emplace(gids[i], i);
    TreeBuild out;
    for (auto g : gids) out.maps.push_back(build_fU(s, seq, g));
    std::vector<TreeSegment> segs(gids.size());
    std::size_t top = 0;
    for (std::size_t i = 0; i < gids.size(); ++i) {
        auto [k, b] = seq.locate(gids[i]);
        segs[i].block = gids[i];
        segs[i].level = k;
        segs[i].length = Rational::pow2(static_cast<int>(k));
        top = std::max(top, k);
    }
    for (std::size_t i = 0; i < gids.size(); ++i) {
        const auto& m = out.maps[i];
        for (std::size_t c = 0; c < m.children.size(); ++c) {
            auto child = seg_of.at(m.children[c]);
            segs[child].parent = static_cast<std::int64_t>(i);
            segs[child].attach = m.child_value[c];
            segs[child].spread = m.child_spread[c];
        }
    }
    bool root_seen = false;
    for (std::size_t i = 0; i < gids.size(); ++i)
        if (segs[i].parent < 0) {
            if (segs[i].level != top || root_seen) throw UnattachedSegment(static_cast<std::size_t>(gids[i]));
            root_seen = true;
        }
    out.tree = FilteredTree(color, std::move(segs));
    return out;
}

}  // namespace asdim
