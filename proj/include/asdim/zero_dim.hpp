#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "asdim/metric_ops.hpp"

namespace asdim {

inline bool m0_membership(std::int64_t x) {
    if (x < 0) throw NegativeInput();
    for (; x > 0; x /= 3)
        if (x % 3 == 2) return false;
    return true;
}

inline std::int64_t pow3(std::size_t k) {
    std::int64_t p = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (p > std::numeric_limits<std::int64_t>::max() / 3) throw ArithmeticOverflow();
        p *= 3;
    }
    return p;
}

/// Members share all ternary digits at positions >= k.
struct M0Block {
    std::size_t level = 0;
    std::int64_t base = 0;
    std::vector<std::int64_t> members;
    friend bool operator==(const M0Block&, const M0Block&) = default;
};

inline std::vector<M0Block> m0_blocks(std::int64_t N, std::size_t k) {
    if (N < 0) throw NegativeInput();
    const auto p = pow3(k);
    std::vector<M0Block> out;
    for (std::int64_t x = 0; x <= N; ++x) {
        if (!m0_membership(x)) continue;
        const auto base = x / p * p;
        if (out.empty() || out.back().base != base) out.push_back({k, base, {}});
        out.back().members.push_back(x);
    }
    return out;
}

inline std::int64_t m0_block_diameter(std::size_t k) { return (pow3(k) - 1) / 2; }
inline std::int64_t m0_block_gap(std::size_t k) { return (pow3(k) + 1) / 2; }

/// Level 0 holds singletons; level k >= 1 holds the <D_k chain components.
struct ZeroLadder {
    std::vector<Rational> scales;                  // D_k, k >= 1 (scales[k-1])
    std::vector<std::vector<PointSet>> levels;     // levels[0] = singletons
    std::vector<std::vector<std::size_t>> parent;  // parent[k][b]: block index at level k+1; top level maps to 0
    std::vector<std::size_t> branching;            // C_k for k = 1..L, then the top-level block count
    bool whole_at_top = false;
    friend bool operator==(const ZeroLadder&, const ZeroLadder&) = default;
    [[nodiscard]] std::size_t top() const { return levels.size() - 1; }
};

inline constexpr std::int64_t kZeroDimRatio = 8;

inline ZeroLadder build_zero_ladder(const FiniteMetricSpace& s, const std::vector<Rational>& scales,
                                    std::int64_t ratio = kZeroDimRatio) {
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] <= Rational(0)) throw BadScale();
        if (i && scales[i] <= scales[i - 1]) throw BadParameters("scales must increase");
    }
    ZeroLadder z;
    z.scales = scales;
    std::vector<PointSet> singles;
    for (PointIndex x = 0; x < s.size(); ++x) singles.push_back({x});
    z.levels.push_back(std::move(singles));
    const auto all = all_points(s);
    for (const auto& D : scales) {
        auto comps = chain_components(s, all, s.ceil_units(D));
        for (std::size_t b = 0; b < comps.size(); ++b)
            if (s.from_units(diameter_units(s, comps[b])) > Rational(ratio) * D)
                throw NotZeroDimensionalAtScale(D.str(), b);
        z.levels.push_back(std::move(comps));
    }
    std::vector<std::size_t> where(s.size());
    for (std::size_t k = 0; k < z.levels.size(); ++k) {
        if (k + 1 < z.levels.size()) {
            for (std::size_t b = 0; b < z.levels[k + 1].size(); ++b)
                for (auto p : z.levels[k + 1][b]) where[p] = b;
            std::vector<std::size_t> par, count(z.levels[k + 1].size(), 0);
            for (const auto& blk : z.levels[k]) {
                par.push_back(where[blk.front()]);
                ++count[par.back()];
            }
            z.parent.push_back(std::move(par));
            z.branching.push_back(*std::max_element(count.begin(), count.end()));
        } else {
            z.parent.emplace_back(z.levels[k].size(), 0);
            z.branching.push_back(z.levels[k].size());
        }
    }
    z.whole_at_top = z.levels.back().size() == 1;
    return z;
}

struct M0Embedding {
    std::vector<std::int64_t> image;  // per point
    std::vector<std::size_t> strides; // t_k per transition, bottom first
    std::vector<std::size_t> offset;  // offset[k]: digit position where level-k block codes start
    friend bool operator==(const M0Embedding&, const M0Embedding&) = default;
};

inline std::size_t default_stride(std::size_t branching) {
    std::size_t t = 0;
    while ((std::size_t{1} << t) <= branching) ++t;
    return t;
}

/// Child j of a block is coded by the binary digits of j written as ternary digits,
/// placed at the block's stride offset. The basepoint's child is always child 0.
inline M0Embedding embed_into_m0(const FiniteMetricSpace& s, const ZeroLadder& z,
                                 std::optional<std::vector<std::size_t>> strides = std::nullopt) {
    const std::size_t L = z.levels.size();
    M0Embedding e;
    e.strides = strides ? *strides : std::vector<std::size_t>{};
    if (!strides)
        for (auto c : z.branching) e.strides.push_back(default_stride(c));
    if (e.strides.size() != L) throw BadParameters("need one stride per ladder level");
    for (std::size_t k = 0; k < L; ++k)
        if (k < 63 && e.strides[k] < 63 && (std::size_t{1} << e.strides[k]) < z.branching[k]) throw StrideTooSmall(k);
    e.offset.assign(L + 1, 0);
    for (std::size_t k = 0; k < L; ++k) e.offset[k + 1] = e.offset[k] + e.strides[k];
    const auto total = e.offset[L];
    pow3(total);  // overflow guard
    // Child rank within the parent, basepoint's branch first, then by block id.
    std::vector<std::vector<std::size_t>> rank(L);
    std::vector<std::size_t> on_base(L);
    for (std::size_t k = 0; k < L; ++k)
        for (std::size_t b = 0; b < z.levels[k].size(); ++b)
            if (std::binary_search(z.levels[k][b].begin(), z.levels[k][b].end(), s.basepoint())) on_base[k] = b;
    for (std::size_t k = 0; k < L; ++k) {
        const std::size_t parents = k + 1 < L ? z.levels[k + 1].size() : 1;
        std::vector<std::size_t> next(parents, 0);
        next[z.parent[k][on_base[k]]] = 1;
        rank[k].assign(z.levels[k].size(), 0);
        for (std::size_t b = 0; b < z.levels[k].size(); ++b) {
            if (b == on_base[k]) continue;
            rank[k][b] = next[z.parent[k][b]]++;
        }
    }
    auto code = [](std::size_t j, std::size_t off) {
        std::int64_t v = 0, p = pow3(off);
        for (; j > 0; j >>= 1, p *= 3)
            if (j & 1) v += p;
        return v;
    };
    e.image.assign(s.size(), 0);
    std::vector<std::size_t> block_of(s.size());
    for (std::size_t k = 0; k < L; ++k) {
        for (std::size_t b = 0; b < z.levels[k].size(); ++b)
            for (auto p : z.levels[k][b]) block_of[p] = b;
        for (PointIndex x = 0; x < s.size(); ++x) e.image[x] += code(rank[k][block_of[x]], e.offset[k]);
    }
    return e;
}

struct M0Check {
    bool in_m0 = true;
    bool containment = true;  // level-k blocks land in one M0 block of level offset[k]
    bool injective = true;    // distinct level-k blocks land in distinct such M0 blocks
    std::string witness;
    [[nodiscard]] bool ok() const { return in_m0 && containment && injective; }
};

inline M0Check check_m0_embedding(const FiniteMetricSpace& s, const ZeroLadder& z, const M0Embedding& e) {
    M0Check r;
    for (PointIndex x = 0; x < s.size(); ++x)
        if (!m0_membership(e.image[x])) {
            r.in_m0 = false;
            r.witness = "image of " + s.id(x) + " not in M0";
        }
    for (std::size_t k = 0; k < z.levels.size(); ++k) {
        const auto p = pow3(e.offset[k]);
        std::vector<std::int64_t> bases;
        for (const auto& blk : z.levels[k]) {
            const auto base = e.image[blk.front()] / p;
            for (auto x : blk)
                if (e.image[x] / p != base) {
                    r.containment = false;
                    r.witness = "level " + std::to_string(k) + " block containing " + s.id(x) + " is split";
                }
            bases.push_back(base);
        }
        std::sort(bases.begin(), bases.end());
        if (std::adjacent_find(bases.begin(), bases.end()) != bases.end()) {
            r.injective = false;
            r.witness = "two level-" + std::to_string(k) + " blocks share an M0 block";
        }
    }
    return r;
}

}  // namespace asdim
