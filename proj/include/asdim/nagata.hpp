#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "asdim/cover.hpp"

namespace asdim {

struct NagataVerdict {
    Rational r;
    bool holds = true;
    /// Center x and n+2 points near N_r(x) that are pairwise >= 2r apart.
    PointIndex center = 0;
    PointSet counterexample;
};

inline constexpr std::uint64_t kNagataNodeCap = 50'000'000;

namespace detail {

// Looks for `need` vertices pairwise joined in `far` among candidates.
inline bool find_far_tuple(const std::vector<std::vector<char>>& far, std::size_t need, PointSet& chosen,
                           std::vector<std::size_t>& cand, std::uint64_t& nodes, std::uint64_t cap) {
    if (chosen.size() == need) return true;
    if (chosen.size() + cand.size() < need) return false;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (++nodes > cap) throw ComplexityCap("tuple search exceeded " + std::to_string(cap) + " nodes");
        auto v = cand[i];
        std::vector<std::size_t> next;
        for (std::size_t j = i + 1; j < cand.size(); ++j)
            if (far[v][cand[j]]) next.push_back(cand[j]);
        chosen.push_back(v);
        if (find_far_tuple(far, need, chosen, next, nodes, cap)) return true;
        chosen.pop_back();
    }
    return false;
}

}  // namespace detail

/// Property (P_n) at each radius: among points y with d(y, N_r(x)) < 2r, no
/// n+2 of them are pairwise >= 2r apart. Such points all lie within 3r of x.
inline std::vector<NagataVerdict> nagata_check(const FiniteMetricSpace& s, std::size_t n,
                                               const std::vector<Rational>& radii,
                                               std::uint64_t node_cap = kNagataNodeCap) {
    std::vector<NagataVerdict> out;
    for (const auto& r : radii) {
        if (r <= Rational(0)) throw BadScale();
        NagataVerdict v;
        v.r = r;
        const auto ru = s.ceil_units(r);
        const auto r2 = s.ceil_units(Rational(2) * r);
        const auto r3 = s.ceil_units(Rational(3) * r);
        std::uint64_t nodes = 0;
        for (PointIndex x = 0; x < s.size() && v.holds; ++x) {
            PointSet inner, near;
            for (PointIndex z = 0; z < s.size(); ++z)
                if (s.units(x, z) < ru) inner.push_back(z);
            for (PointIndex y = 0; y < s.size(); ++y) {
                if (s.units(x, y) >= r3) continue;
                for (auto z : inner)
                    if (s.units(y, z) < r2) {
                        near.push_back(y);
                        break;
                    }
            }
            if (near.size() < n + 2) continue;
            std::vector<std::vector<char>> far(s.size());
            for (auto a : near) {
                far[a].assign(s.size(), 0);
                for (auto b : near) far[a][b] = s.units(a, b) >= r2;
            }
            PointSet chosen;
            std::vector<std::size_t> cand(near.begin(), near.end());
            if (detail::find_far_tuple(far, n + 2, chosen, cand, nodes, node_cap)) {
                v.holds = false;
                v.center = x;
                v.counterexample = chosen;
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

struct NagataCover {
    PointSet centers;
    std::vector<PointSet> blocks;  // open 2D-neighborhoods of the centers
    std::size_t multiplicity = 0;  // max over x of blocks meeting N_D(x)
    PointIndex worst = 0;
};

inline NagataCover nagata_to_cover(const FiniteMetricSpace& s, const Rational& D) {
    if (D <= Rational(0)) throw BadScale();
    NagataCover c;
    c.centers = greedy_net(s, Rational(2) * D);
    const auto d1 = s.ceil_units(D);
    const auto d2 = s.ceil_units(Rational(2) * D);
    for (auto y : c.centers) {
        PointSet b;
        for (PointIndex x = 0; x < s.size(); ++x)
            if (s.units(x, y) < d2) b.push_back(x);
        c.blocks.push_back(std::move(b));
    }
    for (PointIndex x = 0; x < s.size(); ++x) {
        std::vector<char> near(s.size(), 0);
        for (PointIndex z = 0; z < s.size(); ++z) near[z] = s.units(x, z) < d1;
        std::size_t count = 0;
        for (const auto& b : c.blocks)
            for (auto p : b)
                if (near[p]) {
                    ++count;
                    break;
                }
        if (count > c.multiplicity) {
            c.multiplicity = count;
            c.worst = x;
        }
    }
    return c;
}

struct HigsonVerdict {
    bool pass = true;
    std::size_t worst_multiplicity = 0;
    std::size_t worst_level = 0;
    PointIndex worst_center = 0;
};

/// Every closed ball of radius C * mesh(U_k) meets at most colors(U_k) blocks of U_k.
inline HigsonVerdict higson_check(const FiniteMetricSpace& s, const std::vector<ColoredCover>& covers, const Rational& C) {
    HigsonVerdict v;
    for (std::size_t k = 0; k < covers.size(); ++k) {
        const auto& cv = covers[k];
        const auto rho = s.floor_units(C * mesh(s, cv));
        for (PointIndex x = 0; x < s.size(); ++x) {
            std::size_t count = 0;
            for (const auto& b : cv.blocks)
                for (auto p : b.points)
                    if (s.units(x, p) <= rho) {
                        ++count;
                        break;
                    }
            if (count > v.worst_multiplicity) {
                v.worst_multiplicity = count;
                v.worst_level = k;
                v.worst_center = x;
            }
            if (count > cv.colors) v.pass = false;
        }
    }
    return v;
}

}  // namespace asdim
