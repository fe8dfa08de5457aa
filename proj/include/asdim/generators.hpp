#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "asdim/space.hpp"

namespace asdim {

inline constexpr std::size_t kDefaultPointCap = 100000;

namespace detail {

inline std::string coord_str(std::int64_t units, std::int64_t scale) {
    if (units % scale == 0) return std::to_string(units / scale);
    return Rational(units, scale).str();
}

inline std::string tuple_id(const std::vector<std::int64_t>& c, std::int64_t scale) {
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ",";
        s += coord_str(c[i], scale);
    }
    return s + ")";
}

inline void check_cap(std::size_t count, std::size_t cap) {
    if (count > cap) throw CapExceeded(count, cap);
}

/// Resolution step must be a unit fraction 1/s; returns s.
inline std::int64_t step_denominator(const GeneratorSpec& spec) {
    if (spec.step.num() != 1 || spec.step.den() < 1) throw BadParameters("step must be a unit fraction 1/s");
    return spec.step.den();
}

/// Unweighted all-pairs shortest paths; every edge has length one unit.
inline std::vector<std::int64_t> bfs_all_pairs(const std::vector<std::vector<std::uint32_t>>& adj) {
    const std::size_t n = adj.size();
    std::vector<std::int64_t> d(n * n, -1);
    std::vector<std::uint32_t> queue(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::int64_t* row = &d[s * n];
        std::size_t head = 0, tail = 0;
        queue[tail++] = static_cast<std::uint32_t>(s);
        row[s] = 0;
        while (head < tail) {
            auto u = queue[head++];
            for (auto v : adj[u])
                if (row[v] < 0) {
                    row[v] = row[u] + 1;
                    queue[tail++] = v;
                }
        }
        if (tail != n) throw BadParameters("generated skeleton is disconnected");
    }
    return d;
}

/// Lattice points of the discretized skeleton m*X(1,k) in dimension dims,
/// in step units, plus the adjacency of samples along skeleton lines.
struct Skeleton {
    std::vector<std::vector<std::int64_t>> points;
    std::vector<std::vector<std::uint32_t>> adj;
};

inline Skeleton skeleton(std::int64_t m, std::int64_t k, std::size_t dims, std::int64_t s, std::size_t cap) {
    const std::int64_t side = m * k * s;  // coordinate range [0, side] in step units
    const std::int64_t unit = m * s;      // multiples of m in step units
    // Count first: (dims) families of lines, each line has side+1 samples.
    double lines = 1;
    for (std::size_t i = 0; i + 1 < dims; ++i) lines *= static_cast<double>(k + 1);
    double estimate = static_cast<double>(dims) * lines * static_cast<double>(side + 1);
    if (estimate > static_cast<double>(cap)) throw CapExceeded(static_cast<std::size_t>(estimate), cap);

    Skeleton sk;
    std::vector<std::int64_t> c(dims, 0);
    std::map<std::vector<std::int64_t>, std::uint32_t> index;
    for (;;) {
        int off = 0;
        for (auto v : c) off += (v % unit != 0);
        if (off <= 1) {
            index.emplace(c, static_cast<std::uint32_t>(sk.points.size()));
            sk.points.push_back(c);
        }
        std::size_t i = 0;
        while (i < dims && c[i] == side) c[i++] = 0;
        if (i == dims) break;
        ++c[i];
    }
    check_cap(sk.points.size(), cap);
    sk.adj.resize(sk.points.size());
    for (std::size_t p = 0; p < sk.points.size(); ++p) {
        const auto& a = sk.points[p];
        for (std::size_t i = 0; i < dims; ++i) {
            bool others = true;
            for (std::size_t j = 0; j < dims; ++j)
                if (j != i && a[j] % unit != 0) others = false;
            if (!others || a[i] == side) continue;
            auto b = a;
            ++b[i];
            auto it = index.find(b);
            if (it != index.end()) {
                sk.adj[p].push_back(it->second);
                sk.adj[it->second].push_back(static_cast<std::uint32_t>(p));
            }
        }
    }
    return sk;
}

inline FiniteMetricSpace gen_grid(const GeneratorSpec& spec, std::size_t cap) {
    auto n = spec.require("n");
    auto R = spec.require("R");
    bool box = spec.get("box", 0) != 0;
    if (n < 1 || R < 0) throw BadParameters("grid needs n >= 1 and R >= 0");
    const std::int64_t lo = box ? 0 : -R;
    const std::int64_t width = box ? R + 1 : 2 * R + 1;
    double count = 1;
    for (std::int64_t i = 0; i < n; ++i) count *= static_cast<double>(width);
    if (count > static_cast<double>(cap)) throw CapExceeded(static_cast<std::size_t>(count), cap);
    const auto dims = static_cast<std::size_t>(n);
    std::vector<std::int64_t> c(dims, lo), coords;
    std::vector<std::string> ids;
    PointIndex base = 0;
    for (;;) {
        bool origin = true;
        for (auto v : c) origin = origin && v == 0;
        if (origin) base = ids.size();
        ids.push_back(dims == 1 ? std::to_string(c[0]) : tuple_id(c, 1));
        coords.insert(coords.end(), c.begin(), c.end());
        // Lexicographic order with the first coordinate slowest.
        std::size_t i = dims;
        while (i > 0 && c[i - 1] == lo + width - 1) c[--i] = lo;
        if (i == 0) break;
        ++c[i - 1];
    }
    std::string label = "grid(n=" + std::to_string(n) + ",R=" + std::to_string(R) + (box ? ",box" : "") + ")";
    return FiniteMetricSpace::coordinates(std::move(ids), std::move(coords), dims, 1, label, base);
}

inline FiniteMetricSpace line_space(std::vector<std::int64_t> values, std::string label) {
    std::vector<std::string> ids;
    ids.reserve(values.size());
    for (auto v : values) ids.push_back(std::to_string(v));
    PointIndex base = 0;
    return FiniteMetricSpace::coordinates(std::move(ids), std::move(values), 1, 1, std::move(label), base);
}

inline bool ternary_digits_01(std::int64_t x) {
    for (; x > 0; x /= 3)
        if (x % 3 == 2) return false;
    return true;
}

inline FiniteMetricSpace gen_m0_segment(const GeneratorSpec& spec, std::size_t cap) {
    auto N = spec.require("N");
    if (N < 0) throw BadParameters("m0_segment needs N >= 0");
    std::vector<std::int64_t> values;
    for (std::int64_t x = 0; x <= N; ++x)
        if (ternary_digits_01(x)) {
            values.push_back(x);
            check_cap(values.size(), cap);
        }
    return line_space(std::move(values), "m0_segment(N=" + std::to_string(N) + ")");
}

inline FiniteMetricSpace gen_integer_set(const GeneratorSpec& spec, std::size_t cap) {
    check_cap(spec.table.size(), cap);
    if (spec.table.empty()) throw BadParameters("integer_set needs at least one point");
    std::string label = "integer_set(" + std::to_string(spec.table.size()) + " points)";
    return line_space(spec.table, label);
}

inline FiniteMetricSpace gen_free_group(const GeneratorSpec& spec, std::size_t cap) {
    auto g = spec.require("g");
    auto R = spec.require("R");
    if (g < 1 || R < 0) throw BadParameters("free_group needs g >= 1 and R >= 0");
    // Reduced words over letters 0..2g-1; letter l and l^1 are inverse.
    std::vector<std::vector<int>> words{{}};
    for (std::size_t head = 0; head < words.size(); ++head) {
        if (static_cast<std::int64_t>(words[head].size()) == R) continue;
        for (int l = 0; l < 2 * g; ++l) {
            if (!words[head].empty() && (words[head].back() ^ 1) == l) continue;
            auto w = words[head];
            w.push_back(l);
            words.push_back(std::move(w));
            check_cap(words.size(), cap);
        }
    }
    const std::size_t n = words.size();
    std::vector<std::string> ids;
    for (const auto& w : words) {
        if (w.empty()) {
            ids.emplace_back("e");
            continue;
        }
        std::string s;
        for (int l : w) {
            s += static_cast<char>('a' + l / 2);
            if (l % 2) s += "'";
        }
        ids.push_back(s);
    }
    std::vector<std::int64_t> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t p = 0;
            while (p < words[i].size() && p < words[j].size() && words[i][p] == words[j][p]) ++p;
            d[i * n + j] = static_cast<std::int64_t>(words[i].size() + words[j].size() - 2 * p);
        }
    return FiniteMetricSpace::dense(std::move(ids), std::move(d), 1,
                                    "free_group(g=" + std::to_string(g) + ",R=" + std::to_string(R) + ")", 0);
}

inline FiniteMetricSpace gen_x_mk(const GeneratorSpec& spec, std::size_t cap) {
    auto m = spec.require("m");
    auto k = spec.require("k");
    auto n = spec.get("n", 1);
    if (m < 1 || k < 1 || n < 1) throw BadParameters("x_mk needs m, k, n >= 1");
    auto s = step_denominator(spec);
    auto sk = skeleton(m, k, static_cast<std::size_t>(n + 1), s, cap);
    std::vector<std::string> ids;
    for (const auto& p : sk.points) ids.push_back(tuple_id(p, s));
    auto d = bfs_all_pairs(sk.adj);
    std::string label = "x_mk(m=" + std::to_string(m) + ",k=" + std::to_string(k) + ",n=" + std::to_string(n) +
                        ",step=" + spec.step.str() + ")";
    return FiniteMetricSpace::dense(std::move(ids), std::move(d), s, label, 0);
}

inline FiniteMetricSpace gen_comb_tree(const GeneratorSpec& spec, std::size_t cap) {
    auto R = spec.require("R");
    auto s = step_denominator(spec);
    if (R < 0) throw BadParameters("comb_tree needs R >= 0");
    auto phi = [&](std::int64_t v) -> std::int64_t {
        if (spec.table.empty()) return 1;
        return spec.table[static_cast<std::size_t>(std::min<std::int64_t>(v, static_cast<std::int64_t>(spec.table.size()) - 1))];
    };
    // Each point: trunk position (step units) and whisker id (-1 on the trunk) with offset.
    struct Pt {
        std::int64_t base;
        std::int64_t whisker;
        std::int64_t t;
    };
    std::vector<Pt> pts;
    std::vector<std::string> ids;
    for (std::int64_t x = 0; x <= R * s; ++x) {
        pts.push_back({x, -1, 0});
        ids.push_back("t" + coord_str(x, s));
        check_cap(pts.size(), cap);
    }
    std::int64_t whisker = 0;
    for (std::int64_t at = 1; at <= R; ++at)
        for (std::int64_t len = 1; len <= at; ++len)
            for (std::int64_t c = 0; c < phi(at); ++c, ++whisker) {
                std::int64_t reach = std::min(len, R - at) * s;
                for (std::int64_t t = 1; t <= reach; ++t) {
                    pts.push_back({at * s, whisker, t});
                    ids.push_back("w" + std::to_string(at) + "." + std::to_string(len) + "." + std::to_string(c) + ":" +
                                  coord_str(t, s));
                    check_cap(pts.size(), cap);
                }
            }
    const std::size_t n = pts.size();
    std::vector<std::int64_t> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto& a = pts[i];
            const auto& b = pts[j];
            std::int64_t v = (a.whisker == b.whisker && a.whisker >= 0)
                                 ? std::abs(a.t - b.t)
                                 : std::abs(a.base - b.base) + a.t + b.t;
            d[i * n + j] = v;
        }
    return FiniteMetricSpace::dense(std::move(ids), std::move(d), s,
                                    "comb_tree(R=" + std::to_string(R) + ",step=" + spec.step.str() + ")", 0);
}

inline FiniteMetricSpace gen_adjunction(const GeneratorSpec& spec, std::size_t cap) {
    auto L = spec.require("L");
    auto n = spec.get("n", 1);
    auto s = step_denominator(spec);
    if (L < 0 || n < 1) throw BadParameters("adjunction needs L >= 0 and n >= 1");
    std::vector<std::string> ids;
    std::vector<std::vector<std::uint32_t>> adj;
    auto add = [&](std::string id) {
        ids.push_back(std::move(id));
        adj.emplace_back();
        check_cap(ids.size(), cap);
        return static_cast<std::uint32_t>(ids.size() - 1);
    };
    auto link = [&](std::uint32_t a, std::uint32_t b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    };
    std::vector<std::uint32_t> trunk;
    for (std::int64_t x = 0; x <= L * s; ++x) {
        trunk.push_back(add("r" + coord_str(x, s)));
        if (x > 0) link(trunk[static_cast<std::size_t>(x - 1)], trunk.back());
    }
    for (std::int64_t at = 1; at <= L; ++at) {
        std::int64_t side = spec.table.empty() ? spec.get("R", 1)
                                               : spec.table[static_cast<std::size_t>(std::min<std::int64_t>(at - 1, static_cast<std::int64_t>(spec.table.size()) - 1))];
        auto sk = skeleton(at, side, static_cast<std::size_t>(n + 1), s, cap);
        std::vector<std::uint32_t> local(sk.points.size());
        for (std::size_t p = 0; p < sk.points.size(); ++p) {
            bool origin = true;
            for (auto v : sk.points[p]) origin = origin && v == 0;
            local[p] = origin ? trunk[static_cast<std::size_t>(at * s)]
                              : add("X" + std::to_string(at) + tuple_id(sk.points[p], s));
        }
        for (std::size_t p = 0; p < sk.points.size(); ++p)
            for (auto q : sk.adj[p])
                if (p < q) link(local[p], local[q]);
    }
    auto d = bfs_all_pairs(adj);
    return FiniteMetricSpace::dense(std::move(ids), std::move(d), s,
                                    "adjunction(L=" + std::to_string(L) + ",step=" + spec.step.str() + ")", 0);
}

inline FiniteMetricSpace gen_explicit_matrix(const GeneratorSpec& spec, std::size_t cap) {
    auto n = static_cast<std::size_t>(spec.require("n"));
    check_cap(n, cap);
    if (spec.table.size() != n * n) throw BadParameters("explicit_matrix table must have n*n entries");
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = Rational(spec.table[i * n + j]) * spec.step;
    return validate_metric(rows, {}, "explicit_matrix(n=" + std::to_string(n) + ")");
}

}  // namespace detail

/// Canonical example spaces. The result carries its spec for serialization.
inline FiniteMetricSpace generate(const GeneratorSpec& spec, std::size_t cap = kDefaultPointCap) {
    if (spec.step <= Rational(0)) throw BadParameters("step must be positive");
    FiniteMetricSpace s;
    if (spec.kind == "grid") s = detail::gen_grid(spec, cap);
    else if (spec.kind == "free_group") s = detail::gen_free_group(spec, cap);
    else if (spec.kind == "m0_segment") s = detail::gen_m0_segment(spec, cap);
    else if (spec.kind == "x_mk") s = detail::gen_x_mk(spec, cap);
    else if (spec.kind == "comb_tree") s = detail::gen_comb_tree(spec, cap);
    else if (spec.kind == "adjunction") s = detail::gen_adjunction(spec, cap);
    else if (spec.kind == "explicit_matrix") s = detail::gen_explicit_matrix(spec, cap);
    else if (spec.kind == "integer_set") s = detail::gen_integer_set(spec, cap);
    else throw BadParameters("unknown generator kind: " + spec.kind);
    s.set_generator(spec);
    return s;
}

/// {lo, ..., hi} with the line metric.
inline FiniteMetricSpace integer_interval(std::int64_t lo, std::int64_t hi) {
    GeneratorSpec g{"integer_set", {}, {}, Rational(1)};
    for (auto v = lo; v <= hi; ++v) g.table.push_back(v);
    auto s = generate(g, static_cast<std::size_t>(hi - lo + 1));
    s.set_label("interval[" + std::to_string(lo) + "," + std::to_string(hi) + "]");
    return s;
}

}  // namespace asdim
