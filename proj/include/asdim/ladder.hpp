#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asdim/cover.hpp"

namespace asdim {

/// Ladder of colored covers U_0, U_1, ... with parameters (d_k, m_k) and the parent table.
struct CoverSequence {
    std::size_t colors = 1;
    std::vector<ColoredCover> levels;
    std::vector<Rational> d;
    std::vector<Rational> m;
    /// psi[k][b]: global id of the minimal same-color block at a higher level
    /// containing block b of level k, or -1.
    std::vector<std::vector<std::int64_t>> psi;
    /// Whether the seed scale of level k met d_k >= 2^{4k+2} m_{k-1}.
    std::vector<bool> strict2star;

    [[nodiscard]] std::size_t size() const { return levels.size(); }
    [[nodiscard]] std::int64_t global_id(std::size_t k, std::size_t b) const {
        std::size_t off = 0;
        for (std::size_t i = 0; i < k; ++i) off += levels[i].blocks.size();
        return static_cast<std::int64_t>(off + b);
    }
    [[nodiscard]] std::pair<std::size_t, std::size_t> locate(std::int64_t gid) const {
        auto g = static_cast<std::size_t>(gid);
        for (std::size_t k = 0; k < levels.size(); ++k) {
            if (g < levels[k].blocks.size()) return {k, g};
            g -= levels[k].blocks.size();
        }
        throw BadParameters("block id " + std::to_string(gid) + " out of range");
    }
    [[nodiscard]] const CoverBlock& block(std::int64_t gid) const {
        auto [k, b] = locate(gid);
        return levels[k].blocks[b];
    }
    /// Lower-level blocks whose parent is gid.
    [[nodiscard]] std::vector<std::int64_t> children(std::int64_t gid) const {
        std::vector<std::int64_t> out;
        for (std::size_t k = 0; k < levels.size(); ++k)
            for (std::size_t b = 0; b < psi[k].size(); ++b)
                if (psi[k][b] == gid) out.push_back(global_id(k, b));
        return out;
    }
    friend bool operator==(const CoverSequence&, const CoverSequence&) = default;
};

/// d(y, A) for every point y, in units.
inline std::vector<std::int64_t> distance_to_set(const FiniteMetricSpace& s, const PointSet& a) {
    std::vector<std::int64_t> d(s.size(), kInfUnits);
    for (PointIndex y = 0; y < s.size(); ++y)
        for (auto x : a) d[y] = std::min(d[y], s.units(x, y));
    return d;
}

inline bool is_subset(const PointSet& a, const std::vector<char>& in) {
    for (auto p : a)
        if (!in[p]) return false;
    return true;
}

inline std::vector<char> membership(std::size_t n, const PointSet& a) {
    std::vector<char> in(n, 0);
    for (auto p : a) in[p] = 1;
    return in;
}

/// Fills seq.psi: for each block the same-color block at the lowest higher level that contains it.
inline void compute_psi(const FiniteMetricSpace& s, CoverSequence& seq) {
    seq.psi.assign(seq.levels.size(), {});
    std::vector<std::vector<std::vector<char>>> in(seq.levels.size());
    for (std::size_t k = 0; k < seq.levels.size(); ++k)
        for (const auto& b : seq.levels[k].blocks) in[k].push_back(membership(s.size(), b.points));
    for (std::size_t k = 0; k < seq.levels.size(); ++k) {
        seq.psi[k].assign(seq.levels[k].blocks.size(), -1);
        for (std::size_t b = 0; b < seq.levels[k].blocks.size(); ++b) {
            const auto& u = seq.levels[k].blocks[b];
            for (std::size_t l = k + 1; l < seq.levels.size() && seq.psi[k][b] < 0; ++l)
                for (std::size_t v = 0; v < seq.levels[l].blocks.size(); ++v)
                    if (seq.levels[l].blocks[v].color == u.color && is_subset(u.points, in[l][v])) {
                        seq.psi[k][b] = seq.global_id(l, v);
                        break;
                    }
        }
    }
}

struct LadderOptions {
    Rational d0{3};
    /// Raise every seed scale to 2^{4k+6} m_k.
    bool strict2star = false;
    std::size_t max_retries = 12;
    Blocker blocker = Blocker::chain;
};

namespace detail {

inline ColoredCover whole_space_level(const FiniteMetricSpace& s, std::size_t colors, const Rational& d) {
    ColoredCover c;
    c.D = d;
    c.R = s.diameter();
    c.colors = colors;
    for (std::size_t i = 0; i < colors; ++i) c.blocks.push_back({all_points(s), i});
    return c;
}

inline PointSet enlarge(const FiniteMetricSpace& s, const PointSet& w, std::int64_t lam) {
    auto d = distance_to_set(s, w);
    PointSet out;
    for (PointIndex y = 0; y < s.size(); ++y)
        if (d[y] <= lam) out.push_back(y);
    return out;
}

/// Adds every same-color lower block W with W not inside V and d(V, W) < d_p/2, until stable.
inline void absorb(const FiniteMetricSpace& s, const CoverSequence& seq, PointSet& v, std::size_t color) {
    for (bool changed = true; changed;) {
        changed = false;
        auto dv = distance_to_set(s, v);
        auto in = membership(s.size(), v);
        for (std::size_t p = 0; p < seq.levels.size(); ++p) {
            const auto half = s.ceil_units(seq.d[p] / Rational(2));
            for (const auto& w : seq.levels[p].blocks) {
                if (w.color != color || is_subset(w.points, in)) continue;
                std::int64_t dist = kInfUnits;
                for (auto x : w.points) dist = std::min(dist, dv[x]);
                if (dist < half) {
                    for (auto x : w.points)
                        if (!in[x]) {
                            in[x] = 1;
                            v.push_back(x);
                        }
                    changed = true;
                }
            }
        }
        std::sort(v.begin(), v.end());
    }
}

/// Smallest distance between distinct same-color blocks, and whether any pair overlaps.
inline std::int64_t same_color_separation(const FiniteMetricSpace& s, const ColoredCover& c) {
    std::int64_t best = kInfUnits;
    for (std::size_t i = 0; i < c.blocks.size(); ++i) {
        auto di = distance_to_set(s, c.blocks[i].points);
        for (std::size_t j = i + 1; j < c.blocks.size(); ++j) {
            if (c.blocks[j].color != c.blocks[i].color) continue;
            for (auto x : c.blocks[j].points) best = std::min(best, di[x]);
        }
    }
    return best;
}

}  // namespace detail

/// Builds the ladder level by level: seed cover at an enlarged scale,
/// lambda-thickening, color rotation toward the basepoint, then absorption of
/// nearby lower-level blocks. The last requested level is the whole space.
inline CoverSequence build_cover_sequence(const FiniteMetricSpace& s, std::size_t n, std::size_t levels,
                                          const LadderOptions& opt = {}) {
    if (levels == 0) throw BadParameters("at least one level is required");
    CoverSequence seq;
    seq.colors = n + 1;
    const PointIndex x0 = s.basepoint();
    const auto diam = s.diameter_units();
    for (std::size_t l = 0; l < levels; ++l) {
        Rational dl = l == 0 ? opt.d0 : Rational::pow2(static_cast<int>(2 * (l - 1) + 2)) * seq.m[l - 1];
        const Rational lam = dl;
        Rational margin{0};
        for (std::size_t p = 0; p < l; ++p) margin += Rational((seq.d[p] / Rational(2)).ceil()) + seq.m[p];
        auto finish_whole = [&] {
            seq.levels.push_back(detail::whole_space_level(s, seq.colors, dl));
            seq.d.push_back(dl);
            seq.m.push_back(s.diameter());
            seq.strict2star.push_back(l > 0 && dl >= Rational::pow2(static_cast<int>(4 * (l - 1) + 6)) * seq.m[l - 1]);
        };
        if (l + 1 == levels || s.size() <= 1) {
            finish_whole();
            break;
        }
        bool done = false;
        for (std::size_t attempt = 0; attempt <= opt.max_retries && !done; ++attempt) {
            Rational seed = dl + Rational(2) * lam + Rational(2) * margin;
            const Rational strict = l == 0 ? seed : Rational::pow2(static_cast<int>(4 * (l - 1) + 6)) * seq.m[l - 1];
            if (opt.strict2star) seed = max(seed, strict);
            if (s.floor_units(seed) >= diam) {
                finish_whole();
                compute_psi(s, seq);
                return seq;
            }
            if (opt.blocker == Blocker::grid) seed = Rational(seed.ceil());
            auto res = color_cover_at_scale(s, seed, opt.blocker == Blocker::grid ? Rational(2) * seed : seed, opt.blocker);
            if (res.witness.blocks.size() == 1) {
                finish_whole();
                compute_psi(s, seq);
                return seq;
            }
            if (res.colors_used > seq.colors) throw ColorBudgetExceeded(l, res.colors_used, seq.colors);
            ColoredCover level;
            level.D = dl;
            level.colors = seq.colors;
            const auto lam_u = s.floor_units(lam);
            std::int64_t best_depth = -1;
            std::size_t best_color = 0;
            for (auto& b : res.witness.blocks) {
                auto v = detail::enlarge(s, b.points, lam_u);
                auto depth = depth_units(s, v)[x0];
                if (depth > best_depth) {
                    best_depth = depth;
                    best_color = b.color;
                }
                level.blocks.push_back({std::move(v), b.color});
            }
            if (best_depth <= s.floor_units(dl)) throw BasepointConditionUnsatisfiable(l);
            const std::size_t target = l % seq.colors;
            for (auto& b : level.blocks) b.color = (b.color + seq.colors + target - best_color) % seq.colors;
            for (auto& b : level.blocks) detail::absorb(s, seq, b.points, b.color);
            if (detail::same_color_separation(s, level) < s.ceil_units(dl)) {
                margin = margin == Rational(0) ? dl : margin * Rational(2);
                continue;
            }
            level.R = mesh(s, level);
            seq.m.push_back(level.R);
            seq.d.push_back(dl);
            seq.strict2star.push_back(l > 0 && seed >= strict);
            seq.levels.push_back(std::move(level));
            done = true;
        }
        if (!done) throw BadParameters("level " + std::to_string(l) + " could not be separated after absorption");
    }
    compute_psi(s, seq);
    return seq;
}

struct ConditionResult {
    bool pass = true;
    std::string witness;
};

struct SequenceReport {
    ConditionResult lebesgue_depth;  // condition 1
    ConditionResult scale_growth;    // condition 2
    ConditionResult disjoint;        // each color family d_k-disjoint
    ConditionResult basepoint;       // condition 3, finite form
    ConditionResult nested;          // condition 4
    std::vector<Extended> absorbed_radius;  // per color, largest open basepoint ball inside one block
    [[nodiscard]] bool all() const {
        return lebesgue_depth.pass && scale_growth.pass && disjoint.pass && basepoint.pass && nested.pass;
    }
};

/// Independent re-check of the four ladder conditions; failures are reported, not thrown.
inline SequenceReport verify_cover_sequence(const FiniteMetricSpace& s, const CoverSequence& seq) {
    SequenceReport r;
    auto fail = [](ConditionResult& c, std::string w) {
        if (c.pass) {
            c.pass = false;
            c.witness = std::move(w);
        }
    };
    const std::size_t L = seq.levels.size();
    std::vector<Rational> mesh_k(L);
    std::vector<std::vector<std::vector<std::int64_t>>> dist(L);
    for (std::size_t k = 0; k < L; ++k) {
        const auto& c = seq.levels[k];
        if (c.blocks.empty()) {
            fail(r.lebesgue_depth, "level " + std::to_string(k) + " is empty");
            continue;
        }
        mesh_k[k] = mesh(s, c);
        const auto dk = k < seq.d.size() ? seq.d[k] : c.D;
        if (!(lebesgue(s, c) > Extended{false, dk})) fail(r.lebesgue_depth, "level " + std::to_string(k) + ": Lebesgue number <= d_k");
        const auto dku = s.ceil_units(dk);
        for (std::size_t b = 0; b < c.blocks.size(); ++b) {
            auto dep = depth_units(s, c.blocks[b].points);
            std::int64_t best = 0;
            for (auto p : c.blocks[b].points) best = std::max(best, dep[p]);
            if (best < dku) fail(r.lebesgue_depth, "level " + std::to_string(k) + " block " + std::to_string(b) + " has no point at depth d_k");
        }
        for (const auto& b : c.blocks) dist[k].push_back(distance_to_set(s, b.points));
        for (std::size_t i = 0; i < c.blocks.size(); ++i)
            for (std::size_t j = i + 1; j < c.blocks.size(); ++j) {
                if (c.blocks[i].color != c.blocks[j].color) continue;
                std::int64_t m = kInfUnits;
                for (auto x : c.blocks[j].points) m = std::min(m, dist[k][i][x]);
                if (m < dku)
                    fail(r.disjoint, "level " + std::to_string(k) + " blocks " + std::to_string(i) + "," + std::to_string(j));
            }
    }
    if (seq.d.size() != L) fail(r.scale_growth, "parameter table length mismatch");
    for (std::size_t k = 0; k + 1 < L && k + 1 < seq.d.size(); ++k)
        if (seq.d[k + 1] != Rational::pow2(static_cast<int>(2 * k + 2)) * mesh_k[k])
            fail(r.scale_growth, "d_" + std::to_string(k + 1) + " = " + seq.d[k + 1].str() + " but 2^" +
                                     std::to_string(2 * k + 2) + " m_" + std::to_string(k) + " = " +
                                     (Rational::pow2(static_cast<int>(2 * k + 2)) * mesh_k[k]).str());
    for (std::size_t k = 0; k < L; ++k)
        for (std::size_t l = k + 1; l < L; ++l) {
            const auto half = s.ceil_units(seq.d[k] / Rational(2));
            for (std::size_t v = 0; v < seq.levels[l].blocks.size(); ++v) {
                const auto& V = seq.levels[l].blocks[v];
                auto in = membership(s.size(), V.points);
                for (std::size_t u = 0; u < seq.levels[k].blocks.size(); ++u) {
                    const auto& U = seq.levels[k].blocks[u];
                    if (U.color != V.color || is_subset(U.points, in)) continue;
                    std::int64_t m = kInfUnits;
                    for (auto x : U.points) m = std::min(m, dist[l][v][x]);
                    if (m < half)
                        fail(r.nested, "level " + std::to_string(k) + " block " + std::to_string(u) + " vs level " +
                                           std::to_string(l) + " block " + std::to_string(v));
                }
            }
        }
    // Finite form of condition 3: the open ball of radius ecc(x0) sits in one block per color.
    const PointIndex x0 = s.basepoint();
    std::int64_t ecc = 0;
    for (PointIndex y = 0; y < s.size(); ++y) ecc = std::max(ecc, s.units(x0, y));
    r.absorbed_radius.assign(seq.colors, Extended{false, Rational(0)});
    for (std::size_t k = 0; k < L; ++k)
        for (const auto& b : seq.levels[k].blocks) {
            if (b.color >= seq.colors) continue;
            auto dep = depth_units(s, b.points)[x0];
            Extended e = dep >= kInfUnits ? Extended::inf() : Extended{false, s.from_units(dep)};
            if (std::find(b.points.begin(), b.points.end(), x0) != b.points.end() && e > r.absorbed_radius[b.color])
                r.absorbed_radius[b.color] = e;
        }
    for (std::size_t i = 0; i < seq.colors; ++i)
        if (r.absorbed_radius[i] < Extended{false, s.from_units(ecc)})
            fail(r.basepoint, "color " + std::to_string(i) + " absorbs only radius " + r.absorbed_radius[i].str());
    return r;
}

}  // namespace asdim
