#pragma once

// Shared corpus and brute-force oracles for the tests.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "asdim/asdim.hpp"

namespace asdim::test {

inline GeneratorSpec spec(std::string kind, std::map<std::string, std::int64_t> params, std::vector<std::int64_t> table = {},
                          Rational step = Rational(1)) {
    return GeneratorSpec{std::move(kind), std::move(params), std::move(table), step};
}

/// Small instances of every generator kind.
inline std::vector<GeneratorSpec> corpus_specs() {
    return {
        spec("grid", {{"n", 1}, {"R", 3}}),
        spec("grid", {{"n", 2}, {"R", 1}}),
        spec("grid", {{"n", 2}, {"R", 3}}),
        spec("grid", {{"n", 2}, {"R", 2}, {"box", 1}}),
        spec("grid", {{"n", 3}, {"R", 1}}),
        spec("free_group", {{"g", 1}, {"R", 3}}),
        spec("free_group", {{"g", 2}, {"R", 1}}),
        spec("free_group", {{"g", 2}, {"R", 3}}),
        spec("m0_segment", {{"N", 13}}),
        spec("m0_segment", {{"N", 40}}),
        spec("x_mk", {{"m", 1}, {"k", 1}}),
        spec("x_mk", {{"m", 1}, {"k", 2}}, {}, Rational(1, 2)),
        spec("x_mk", {{"m", 2}, {"k", 1}}),
        spec("comb_tree", {{"R", 3}}),
        spec("comb_tree", {{"R", 6}}),
        spec("comb_tree", {{"R", 4}}, {0, 1, 1, 2, 2}),
        spec("adjunction", {{"L", 2}, {"R", 1}}),
        spec("adjunction", {{"L", 3}}, {1, 2, 3}),
        spec("integer_set", {}, {0, 1, 4, 9, 16, 25}),
        spec("integer_set", {}, {0, 1, 2, 3, 4, 5, 6, 7}),
        spec("explicit_matrix", {{"n", 3}}, {0, 1, 2, 1, 0, 1, 2, 1, 0}, Rational(1, 3)),
    };
}

inline std::vector<FiniteMetricSpace> corpus() {
    std::vector<FiniteMetricSpace> out;
    for (const auto& g : corpus_specs()) out.push_back(generate(g));
    return out;
}

/// Shortest-path closure of a random weighted graph; always a metric.
inline FiniteMetricSpace random_space(std::mt19937_64& rng, std::size_t n, std::int64_t max_w = 6, std::int64_t scale = 1) {
    const std::int64_t big = 1 << 20;
    std::vector<std::int64_t> d(n * n, big);
    std::uniform_int_distribution<std::int64_t> w(1, max_w);
    for (std::size_t i = 0; i < n; ++i) {
        d[i * n + i] = 0;
        for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = w(rng);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    return FiniteMetricSpace::dense(std::move(ids), std::move(d), scale, "random" + std::to_string(n));
}

inline Decomposition random_decomposition(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<std::size_t> pick(0, n / 2);
    std::vector<PointSet> parts(n);
    for (PointIndex x = 0; x < n; ++x)
        if (rng() % 3 != 0) parts[pick(rng)].push_back(x);
    Decomposition dec;
    for (auto& p : parts)
        if (!p.empty()) dec.blocks.push_back(p);
    return dec;
}

/// Infimum over all simple chains, hops inside one block free, by exhaustive search.
inline std::int64_t chain_oracle(const FiniteMetricSpace& s, const Decomposition& dec, PointIndex x, PointIndex y) {
    const std::size_t n = s.size();
    std::vector<std::int64_t> block(n, -1);
    for (std::size_t b = 0; b < dec.blocks.size(); ++b)
        for (auto p : dec.blocks[b]) block[p] = static_cast<std::int64_t>(b);
    auto hop = [&](PointIndex a, PointIndex c) { return block[a] >= 0 && block[a] == block[c] ? 0 : s.units(a, c); };
    std::int64_t best = s.units(x, y);
    std::vector<char> used(n, 0);
    std::function<void(PointIndex, std::int64_t)> walk = [&](PointIndex at, std::int64_t cost) {
        if (cost >= best) return;
        if (at == y) {
            best = cost;
            return;
        }
        for (PointIndex z = 0; z < n; ++z)
            if (!used[z]) {
                used[z] = 1;
                walk(z, cost + hop(at, z));
                used[z] = 0;
            }
    };
    used[x] = 1;
    walk(x, 0);
    return best;
}

inline std::size_t capacity_oracle(const FiniteMetricSpace& s, const PointSet& a, const Rational& r) {
    const auto ru = s.ceil_units(r);
    std::size_t best = 0;
    const std::size_t m = a.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        const auto c = static_cast<std::size_t>(std::popcount(mask));
        if (c <= best) continue;
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i)
            for (std::size_t j = i + 1; j < m && ok; ++j)
                if ((mask >> i & 1) && (mask >> j & 1) && s.units(a[i], a[j]) < ru) ok = false;
        if (ok) best = c;
    }
    return best;
}

/// Least number of colors over all covers by sets of diameter <= R, same-color sets D-apart.
/// Enumerates point colorings; each color class must split into D-chain components of diameter <= R.
inline std::size_t colors_oracle(const FiniteMetricSpace& s, const Rational& D, const Rational& R) {
    const std::size_t n = s.size();
    const auto du = s.ceil_units(D);
    const auto ru = s.floor_units(R);
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::size_t> col(n, 0);
        std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t used) -> bool {
            if (i == n) {
                for (std::size_t c = 0; c < used; ++c) {
                    PointSet p;
                    for (PointIndex x = 0; x < n; ++x)
                        if (col[x] == c) p.push_back(x);
                    for (const auto& comp : chain_components(s, p, du))
                        if (diameter_units(s, comp) > ru) return false;
                }
                return true;
            }
            for (std::size_t c = 0; c < std::min(used + 1, k); ++c) {
                col[i] = c;
                if (go(i + 1, std::max(used, c + 1))) return true;
            }
            return false;
        };
        if (go(0, 0)) return k;
    }
    return n;
}

}  // namespace asdim::test
