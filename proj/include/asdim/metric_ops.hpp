#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "asdim/bitset_mis.hpp"
#include "asdim/space.hpp"

namespace asdim {

inline constexpr std::int64_t kInfUnits = std::numeric_limits<std::int64_t>::max() / 4;

/// Disjoint blocks; points outside every block are implicit singletons.
struct Decomposition {
    std::vector<PointSet> blocks;

    void validate(const FiniteMetricSpace& s) const {
        std::vector<char> seen(s.size(), 0);
        for (const auto& b : blocks)
            for (auto p : b) {
                if (p >= s.size()) throw UnknownPoint(std::to_string(p));
                if (seen[p]) throw BadParameters("decomposition blocks overlap at point " + s.id(p));
                seen[p] = 1;
            }
    }
};

inline PointSet all_points(const FiniteMetricSpace& s) {
    PointSet v(s.size());
    std::iota(v.begin(), v.end(), PointIndex{0});
    return v;
}

/// Closed ball {y : d(center, y) <= r}.
inline PointSet ball(const FiniteMetricSpace& s, PointIndex center, const Rational& r) {
    if (center >= s.size()) throw UnknownPoint(std::to_string(center));
    const auto lim = s.floor_units(r);
    PointSet out;
    for (PointIndex y = 0; y < s.size(); ++y)
        if (s.units(center, y) <= lim) out.push_back(y);
    return out;
}

inline PointSet ball(const FiniteMetricSpace& s, const std::string& center, const Rational& r) {
    return ball(s, s.index_of(center), r);
}

/// d(A, B) in units; kInfUnits when either side is empty.
inline std::int64_t set_distance_units(const FiniteMetricSpace& s, const PointSet& a, const PointSet& b) {
    std::int64_t m = kInfUnits;
    for (auto x : a)
        for (auto y : b) m = std::min(m, s.units(x, y));
    return m;
}

inline std::int64_t diameter_units(const FiniteMetricSpace& s, const PointSet& a) {
    std::int64_t m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) m = std::max(m, s.units(a[i], a[j]));
    return m;
}

/// Ascending-index scan keeping each point at distance >= C from all kept points.
inline PointSet greedy_net(const FiniteMetricSpace& s, const Rational& C, const PointSet& among) {
    if (C <= Rational(0)) throw BadScale();
    const auto c = s.ceil_units(C);
    PointSet net;
    for (auto x : among) {
        bool far = true;
        for (auto y : net)
            if (s.units(x, y) < c) {
                far = false;
                break;
            }
        if (far) net.push_back(x);
    }
    return net;
}

inline PointSet greedy_net(const FiniteMetricSpace& s, const Rational& C) { return greedy_net(s, C, all_points(s)); }

struct CapacityResult {
    std::size_t value = 0;
    bool exact = true;
    PointSet witness;
};

inline constexpr std::size_t kCapacityExactCap = 40;

/// K_r(subset): largest r-discrete subset.
inline CapacityResult capacity(const FiniteMetricSpace& s, const PointSet& subset, const Rational& r,
                               std::size_t exact_cap = kCapacityExactCap) {
    if (subset.empty()) throw EmptySubset();
    if (r <= Rational(0)) throw BadScale();
    const auto ru = s.ceil_units(r);
    const std::size_t n = subset.size();
    bool all_far = true;
    for (std::size_t i = 0; i < n && all_far; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (s.units(subset[i], subset[j]) < ru) {
                all_far = false;
                break;
            }
    if (all_far) return {n, true, subset};
    if (n > exact_cap || n > 64) {
        auto w = greedy_net(s, r, subset);
        return {w.size(), false, w};
    }
    std::vector<detail::Bits<1>> adj(n);
    detail::Bits<1> cand;
    for (std::size_t i = 0; i < n; ++i) {
        cand.set(i);
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && s.units(subset[i], subset[j]) < ru) adj[i].set(j);
    }
    detail::MaxIndependentSet<1> mis(adj);
    CapacityResult out;
    out.value = static_cast<std::size_t>(mis.solve(cand));
    for (std::size_t i = 0; i < n; ++i)
        if (mis.witness().test(i)) out.witness.push_back(subset[i]);
    return out;
}

/// Components of the graph joining points of `subset` at distance < D.
/// Components are sorted by their smallest index.
inline std::vector<PointSet> chain_components(const FiniteMetricSpace& s, const PointSet& subset, std::int64_t d_units) {
    const std::size_t n = subset.size();
    std::vector<int> comp(n, -1);
    std::vector<PointSet> out;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (comp[i] >= 0) continue;
        const int c = static_cast<int>(out.size());
        out.emplace_back();
        comp[i] = c;
        stack.assign(1, i);
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            out.back().push_back(subset[u]);
            for (std::size_t v = 0; v < n; ++v)
                if (comp[v] < 0 && s.units(subset[u], subset[v]) < d_units) {
                    comp[v] = c;
                    stack.push_back(v);
                }
        }
        std::sort(out.back().begin(), out.back().end());
    }
    std::sort(out.begin(), out.end(), [](const PointSet& a, const PointSet& b) { return a.front() < b.front(); });
    return out;
}

/// Quotient pseudometric: chains whose hops inside a block are free.
///
/// Blocks are contracted to nodes; block-to-block values come from a
/// shortest-path pass over the nodes, so queries cost O(#blocks).
class QuotientPseudometric {
public:
    QuotientPseudometric(const FiniteMetricSpace& s, const Decomposition& dec) : s_(&s) {
        dec.validate(s);
        for (const auto& b : dec.blocks)
            if (!b.empty()) blocks_.push_back(b);
        const std::size_t m = blocks_.size();
        const std::size_t n = s.size();
        to_block_.assign(n * m, kInfUnits);
        for (std::size_t a = 0; a < m; ++a)
            for (PointIndex x = 0; x < n; ++x) {
                auto& v = to_block_[x * m + a];
                for (auto y : blocks_[a]) v = std::min(v, s.units(x, y));
            }
        std::vector<std::int64_t> node(m * m, kInfUnits);
        for (std::size_t a = 0; a < m; ++a) {
            node[a * m + a] = 0;
            for (std::size_t b = 0; b < m; ++b)
                if (a != b)
                    for (auto y : blocks_[b]) node[a * m + b] = std::min(node[a * m + b], to_block_[y * m + a]);
        }
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b)
                    node[a * m + b] = std::min(node[a * m + b], node[a * m + k] + node[k * m + b]);
        // enter[x][b]: cheapest chain from x that ends anywhere inside block b.
        enter_.assign(n * m, kInfUnits);
        for (PointIndex x = 0; x < n; ++x)
            for (std::size_t b = 0; b < m; ++b) {
                auto& v = enter_[x * m + b];
                for (std::size_t a = 0; a < m; ++a) v = std::min(v, to_block_[x * m + a] + node[a * m + b]);
            }
    }

    [[nodiscard]] std::int64_t units(PointIndex x, PointIndex y) const {
        const std::size_t m = blocks_.size();
        std::int64_t v = s_->units(x, y);
        for (std::size_t b = 0; b < m; ++b) v = std::min(v, enter_[x * m + b] + to_block_[y * m + b]);
        return v;
    }
    [[nodiscard]] Rational dist(PointIndex x, PointIndex y) const { return s_->from_units(units(x, y)); }
    [[nodiscard]] const FiniteMetricSpace& space() const { return *s_; }
    [[nodiscard]] std::size_t size() const { return s_->size(); }
    [[nodiscard]] std::int64_t scale() const { return s_->scale(); }
    [[nodiscard]] Rational from_units(std::int64_t u) const { return s_->from_units(u); }

private:
    const FiniteMetricSpace* s_;
    std::vector<PointSet> blocks_;
    std::vector<std::int64_t> to_block_;
    std::vector<std::int64_t> enter_;
};

/// Full table of the quotient pseudometric.
inline std::vector<std::vector<Rational>> quotient_pseudometric(const FiniteMetricSpace& s, const Decomposition& dec) {
    QuotientPseudometric q(s, dec);
    std::vector<std::vector<Rational>> t(s.size(), std::vector<Rational>(s.size()));
    for (PointIndex x = 0; x < s.size(); ++x)
        for (PointIndex y = 0; y < s.size(); ++y) t[x][y] = q.dist(x, y);
    return t;
}

/// Restriction of a space to a subset, keeping ids and the scale.
inline FiniteMetricSpace subspace(const FiniteMetricSpace& s, const PointSet& pts, const std::string& label) {
    const std::size_t n = pts.size();
    std::vector<std::string> ids;
    for (auto p : pts) ids.push_back(s.id(p));
    PointIndex base = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (pts[i] == s.basepoint()) base = i;
    if (!s.is_dense()) {
        std::vector<std::int64_t> c;
        const auto dim = s.dimension();
        for (auto p : pts) c.insert(c.end(), s.coords().begin() + static_cast<std::ptrdiff_t>(p * dim),
                                    s.coords().begin() + static_cast<std::ptrdiff_t>((p + 1) * dim));
        return FiniteMetricSpace::coordinates(std::move(ids), std::move(c), dim, s.scale(), label, base);
    }
    std::vector<std::int64_t> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = s.units(pts[i], pts[j]);
    return FiniteMetricSpace::dense(std::move(ids), std::move(d), s.scale(), label, base);
}

}  // namespace asdim
