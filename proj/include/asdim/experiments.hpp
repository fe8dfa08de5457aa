#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "asdim/cover.hpp"
#include "asdim/generators.hpp"

namespace asdim {

struct MuResult {
    std::size_t mu = 0;     // best value found; equals mu_k when exact
    std::size_t lower = 0;  // proven lower bound
    bool exact = false;
    std::vector<std::size_t> coloring;  // attains mu
    std::uint64_t nodes = 0;
};

inline constexpr std::size_t kMuOracleCap = 128;
inline constexpr std::uint64_t kMuNodeCap = 2'000'000'000;
inline constexpr std::uint64_t kMuSeed = 1;
inline constexpr std::size_t kMuRestarts = 20;
inline constexpr std::size_t kMuSteps = 4000;

namespace detail {

/// Isometries of a finite space, by backtracking on sorted distance profiles. At most `cap` are returned.
inline std::vector<std::vector<PointIndex>> isometries(const FiniteMetricSpace& s, std::size_t cap) {
    const std::size_t n = s.size();
    std::vector<std::vector<std::int64_t>> prof(n);
    for (PointIndex i = 0; i < n; ++i) {
        for (PointIndex j = 0; j < n; ++j) prof[i].push_back(s.units(i, j));
        std::sort(prof[i].begin(), prof[i].end());
    }
    std::vector<std::vector<PointIndex>> out;
    std::vector<PointIndex> img(n);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (out.size() >= cap) return;
        if (i == n) {
            out.push_back(img);
            return;
        }
        for (PointIndex v = 0; v < n; ++v) {
            if (used[v] || prof[v] != prof[i]) continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) ok = s.units(i, j) == s.units(v, img[j]);
            if (!ok) continue;
            used[v] = 1;
            img[i] = v;
            self(self, i + 1);
            used[v] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

inline constexpr std::size_t kMuSymmetryCap = 64;

/// min over point colorings with `colors` classes of the max K_r over the <sep chain
/// components of each class. Components only grow as points are colored, so the
/// running maximum is a valid lower bound for pruning.
///
/// Anytime: a local search supplies an upper bound, then decision searches raise the
/// proven lower bound one value at a time until the two meet or the node budget runs out.
class MuOracle {
    using B = Bits<2>;
    struct Comp {
        B set;
        std::size_t cap;
    };
    struct Budget {};

public:
    MuOracle(const FiniteMetricSpace& s, std::size_t colors, std::int64_t sep_units, std::int64_t r_units,
             std::uint64_t node_cap)
        : n_(s.size()), colors_(colors), cap_(node_cap) {
        // Breadth-first order from point 0 keeps components local early on.
        std::vector<char> seen(n_, 0);
        order_.push_back(0);
        seen[0] = 1;
        for (std::size_t h = 0; h < order_.size(); ++h)
            for (PointIndex q = 0; q < n_; ++q)
                if (!seen[q] && s.units(order_[h], q) < sep_units) {
                    seen[q] = 1;
                    order_.push_back(q);
                }
        for (PointIndex q = 0; q < n_; ++q)
            if (!seen[q]) order_.push_back(q);
        near_.resize(n_);
        conflict_.resize(n_);
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b) {
                if (a == b) continue;
                if (s.units(order_[a], order_[b]) < sep_units) near_[a].set(b);
                if (s.units(order_[a], order_[b]) < r_units) conflict_[a].set(b);
            }
        // Maximal near-cliques grown from every point: each meets at most one final component per color.
        for (std::size_t a = 0; a < n_; ++a) {
            B q;
            q.set(a);
            B cand = near_[a];
            for (int b = cand.first(); b >= 0; b = cand.first()) {
                cand.reset(static_cast<std::size_t>(b));
                q.set(static_cast<std::size_t>(b));
                cand = cand & near_[static_cast<std::size_t>(b)];
            }
            if (std::find(cliques_.begin(), cliques_.end(), q) == cliques_.end()) cliques_.push_back(q);
        }
        symmetries(s);
    }

    MuResult run() {
        best_col_ = local_search();
        best_ = value(best_col_);
        lower_ = 1;
        comps_.assign(colors_, {});
        col_.assign(n_, colors_);
        try {
            while (lower_ < best_) {
                limit_ = lower_ + 1;
                found_ = false;
                go(0, 0, 0);
                if (found_) {
                    best_ = lower_;
                    best_col_ = col_;
                    break;
                }
                ++lower_;
            }
        } catch (const Budget&) {
        }
        MuResult r;
        r.mu = best_;
        r.lower = lower_;
        r.exact = lower_ == best_;
        r.nodes = nodes_;
        r.coloring.assign(n_, 0);
        for (std::size_t i = 0; i < n_; ++i) r.coloring[order_[i]] = best_col_[i];
        return r;
    }

private:
    // Lex-leader symmetry breaking over isometries times color permutations, in breadth-first index order.
    void symmetries(const FiniteMetricSpace& s) {
        std::vector<std::size_t> pos(n_);
        for (std::size_t a = 0; a < n_; ++a) pos[order_[a]] = a;
        std::vector<std::size_t> sigma(colors_);
        std::iota(sigma.begin(), sigma.end(), 0);
        std::vector<std::vector<std::size_t>> sigmas;
        lex_colors_ = colors_ <= 4;
        if (lex_colors_)
            do sigmas.push_back(sigma);
            while (std::next_permutation(sigma.begin(), sigma.end()));
        else
            sigmas.push_back(sigma);
        for (const auto& g : isometries(s, kMuSymmetryCap)) {
            std::vector<std::size_t> perm(n_);
            for (std::size_t a = 0; a < n_; ++a) perm[a] = pos[g[order_[a]]];
            for (const auto& sg : sigmas) {
                bool identity = std::is_sorted(sg.begin(), sg.end());
                for (std::size_t a = 0; a < n_ && identity; ++a) identity = perm[a] == a;
                if (!identity) syms_.emplace_back(perm, sg);
            }
        }
    }

    std::size_t capacity_of(const B& comp) {
        MaxIndependentSet<2> mis(conflict_);
        return static_cast<std::size_t>(mis.solve(comp));
    }

    B component(std::size_t p, const B& cls) const {
        B comp, frontier;
        comp.set(p);
        frontier.set(p);
        while (!frontier.none()) {
            auto u = static_cast<std::size_t>(frontier.first());
            frontier.reset(u);
            B add = (near_[u] & cls).minus(comp);
            comp = comp | add;
            frontier = frontier | add;
        }
        return comp;
    }

    // Max capacity over the components of a complete coloring.
    std::size_t value(const std::vector<std::size_t>& col) {
        std::vector<B> cls(colors_);
        for (std::size_t i = 0; i < n_; ++i) cls[col[i]].set(i);
        std::size_t v = 0;
        for (auto left : cls)
            while (!left.none()) {
                B comp = component(static_cast<std::size_t>(left.first()), left);
                v = std::max(v, capacity_of(comp));
                left = left.minus(comp);
            }
        return v;
    }

    // Single-point recoloring walk from random starts; the sum of squared capacities breaks ties.
    std::vector<std::size_t> local_search() {
        std::vector<std::size_t> best(n_, 0);
        if (colors_ < 2) return best;
        std::size_t best_v = value(best);
        std::mt19937_64 rng(kMuSeed);
        auto score = [&](const std::vector<std::size_t>& col) {
            std::vector<B> cls(colors_);
            for (std::size_t i = 0; i < n_; ++i) cls[col[i]].set(i);
            std::pair<std::size_t, std::size_t> v{0, 0};
            for (auto left : cls)
                while (!left.none()) {
                    B comp = component(static_cast<std::size_t>(left.first()), left);
                    const auto k = capacity_of(comp);
                    v.first = std::max(v.first, k);
                    v.second += k * k;
                    left = left.minus(comp);
                }
            return v;
        };
        for (std::size_t start = 0; start < kMuRestarts; ++start) {
            std::vector<std::size_t> c(n_);
            for (auto& v : c) v = rng() % colors_;
            auto cur = score(c);
            for (std::size_t it = 0; it < kMuSteps; ++it) {
                const auto i = rng() % n_;
                const auto old = c[i];
                c[i] = (old + 1 + rng() % (colors_ - 1)) % colors_;
                const auto e = score(c);
                if (e <= cur || rng() % 200 == 0)
                    cur = e;
                else
                    c[i] = old;
                if (cur.first < best_v) {
                    best_v = cur.first;
                    best = c;
                }
            }
        }
        return best;
    }

    // Capacity of q's component if q joined color c now; a lower bound for any completion.
    std::size_t joined(std::size_t q, std::size_t c) {
        B u;
        u.set(q);
        for (const auto& k : comps_[c])
            if (!(near_[q] & k.set).none()) u = u | k.set;
        return capacity_of(u);
    }

    // A near-clique Q meets one final component per color, and K_r is subadditive, so
    // K_r(Q plus the components it touches) <= colors * (limit - 1) in any completion below the limit.
    bool cliques_ok() {
        for (const auto& q : cliques_) {
            B u = q.minus(assigned_);
            for (const auto& cs : comps_)
                for (const auto& k : cs)
                    if (!(k.set & q).none()) u = u | k.set;
            const auto bound = colors_ * (limit_ - 1);
            if (static_cast<std::size_t>(u.count()) > bound && capacity_of(u) > bound) return false;
        }
        return true;
    }

    // The coloring must not exceed any of its images, compared on the assigned prefix.
    [[nodiscard]] bool lex_ok() const {
        for (const auto& [g, sg] : syms_)
            for (std::size_t i = 0; i < g.size(); ++i) {
                const auto a = col_[i], b = col_[g[i]];
                if (a == colors_ || b == colors_) break;
                if (a < sg[b]) break;
                if (a > sg[b]) return false;
            }
        return true;
    }

    // Decision search for a coloring with value below limit_, branching on the
    // unassigned point with the fewest viable colors.
    void go(std::size_t assigned, std::size_t used, std::size_t current) {
        if (++nodes_ > cap_) throw Budget{};
        if (current >= limit_ || !lex_ok()) return;
        if (assigned == n_) {
            found_ = true;
            best_col_ = col_;
            return;
        }
        if (!cliques_ok()) return;
        // Without color symmetries in the lex-leader, new colors are opened in order.
        const std::size_t tries = lex_colors_ ? colors_ : std::min(colors_, used + 1);
        std::size_t pick = n_, pick_count = colors_ + 1;
        std::vector<std::pair<std::size_t, std::size_t>> pick_opts;
        for (std::size_t q = 0; q < n_; ++q) {
            if (col_[q] != colors_) continue;
            std::vector<std::pair<std::size_t, std::size_t>> opts;
            for (std::size_t c = 0; c < tries; ++c) {
                const auto k = joined(q, c);
                if (std::max(current, k) < limit_) opts.emplace_back(k, c);
            }
            if (opts.empty()) return;
            if (opts.size() < pick_count) {
                pick = q;
                pick_count = opts.size();
                pick_opts = std::move(opts);
                if (pick_count == 1) break;
            }
        }
        std::sort(pick_opts.begin(), pick_opts.end());
        for (auto [k, c] : pick_opts) {
            std::vector<Comp> saved = comps_[c], next;
            Comp merged{B{}, k};
            merged.set.set(pick);
            for (const auto& x : saved) {
                if (!(near_[pick] & x.set).none())
                    merged.set = merged.set | x.set;
                else
                    next.push_back(x);
            }
            next.push_back(merged);
            comps_[c] = std::move(next);
            col_[pick] = c;
            assigned_.set(pick);
            go(assigned + 1, std::max(used, c + 1), std::max(current, k));
            comps_[c] = std::move(saved);
            assigned_.reset(pick);
            col_[pick] = colors_;
            if (found_) return;
        }
    }

    std::size_t n_;
    std::size_t colors_;
    std::uint64_t cap_;
    std::vector<PointIndex> order_;
    std::vector<B> near_, conflict_;
    std::vector<B> cliques_;
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> syms_;
    bool lex_colors_ = false;
    std::vector<std::vector<Comp>> comps_;
    B assigned_;
    std::vector<std::size_t> col_, best_col_;
    std::size_t best_ = 0, lower_ = 0, limit_ = 0;
    bool found_ = false;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Minimum over covers by `colors` families, each sep-disjoint, of the largest r-capacity of a member.
inline MuResult mu_oracle(const FiniteMetricSpace& s, std::size_t colors, const Rational& sep, const Rational& r,
                          std::uint64_t node_cap = kMuNodeCap) {
    if (s.size() > kMuOracleCap) throw OracleTooLarge("mu oracle handles at most " + std::to_string(kMuOracleCap) + " points");
    if (s.size() == 0) throw EmptySubset();
    if (colors == 0) throw BadParameters("need at least one color");
    if (sep <= Rational(0) || r <= Rational(0)) throw BadScale();
    detail::MuOracle o(s, colors, s.ceil_units(sep), s.ceil_units(r), node_cap);
    return o.run();
}

/// X(m, k) discretized compatibly with X(1, k) at `step`: the homothetic copy at step m * step.
inline FiniteMetricSpace scaled_x(std::int64_t m, std::int64_t k, std::int64_t n, const Rational& step) {
    return generate(GeneratorSpec{"x_mk", {{"m", m}, {"k", k}, {"n", n}}, {}, Rational(m) * step});
}

struct MuRow {
    std::int64_t k = 0;
    std::size_t points = 0;
    MuResult result;
};

/// mu_k over covers of X(1, k) by n+1 3-discrete families, measured by 1-capacity.
inline std::vector<MuRow> experiment_mu_growth(std::int64_t n, const std::vector<std::int64_t>& ks, const Rational& step,
                                               std::uint64_t node_cap = kMuNodeCap) {
    if (n != 1) throw BadParameters("mu growth is implemented for n = 1");
    if (step < Rational(1, 2)) throw BadParameters("step must be at least 1/2");
    std::vector<MuRow> rows;
    for (auto k : ks) {
        if (k < 1 || k > 4) throw BadParameters("k must be in 1..4");
        auto x = scaled_x(1, k, n, step);
        rows.push_back({k, x.size(), mu_oracle(x, static_cast<std::size_t>(n + 1), Rational(3), Rational(1), node_cap)});
    }
    return rows;
}

/// mu_a <= mu_b follows from the reported bounds when a's value is at most b's proven lower bound.
inline bool certified_le(const MuResult& a, const MuResult& b) { return a.mu <= b.lower; }
inline bool certified_lt(const MuResult& a, const MuResult& b) { return a.mu < b.lower; }

struct ObstructionRow {
    std::int64_t m = 0;
    std::size_t level = 0;  // first host level with D >= 3m
    std::size_t supply = 0; // c_k = max K_1 over host blocks
    std::size_t demand = 0; // mu over X(m, r) with 3m-disjoint families and K_m
    bool obstructed = false;
};

struct ObstructionReport {
    std::vector<std::size_t> supply;  // per host level
    std::vector<ObstructionRow> rows;
    std::optional<std::int64_t> first_obstructed;
};

/// Compares the host covers' K_1 ceilings with the capacity demanded by covers of X(m, r).
inline ObstructionReport experiment_obstruction(const FiniteMetricSpace& host, const std::vector<ColoredCover>& covers,
                                                const std::vector<std::int64_t>& ms, std::int64_t r, const Rational& step,
                                                std::int64_t n = 1) {
    ObstructionReport rep;
    for (const auto& c : covers) {
        std::size_t ck = 0;
        for (const auto& b : c.blocks) ck = std::max(ck, capacity(host, b.points, Rational(1)).value);
        rep.supply.push_back(ck);
    }
    for (auto m : ms) {
        if (m < 1) throw BadParameters("m must be positive");
        ObstructionRow row;
        row.m = m;
        std::optional<std::size_t> lvl;
        for (std::size_t k = 0; k < covers.size() && !lvl; ++k)
            if (covers[k].D >= Rational(3 * m)) lvl = k;
        if (!lvl) throw BadParameters("no host level reaches scale 3m for m = " + std::to_string(m));
        row.level = *lvl;
        row.supply = rep.supply[*lvl];
        auto x = scaled_x(m, r, n, step);
        row.demand = mu_oracle(x, static_cast<std::size_t>(n + 1), Rational(3 * m), Rational(m)).mu;
        row.obstructed = row.demand > row.supply;
        if (row.obstructed && !rep.first_obstructed) rep.first_obstructed = m;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace asdim
