#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace asdim::detail {

/// Fixed-width bitset over W 64-bit words, enough for the small exact searches.
template <std::size_t W>
struct Bits {
    std::array<std::uint64_t, W> w{};

    void set(std::size_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    [[nodiscard]] bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1U; }
    [[nodiscard]] bool none() const {
        for (auto x : w)
            if (x) return false;
        return true;
    }
    [[nodiscard]] int count() const {
        int c = 0;
        for (auto x : w) c += std::popcount(x);
        return c;
    }
    [[nodiscard]] int first() const {
        for (std::size_t k = 0; k < W; ++k)
            if (w[k]) return static_cast<int>(k * 64 + std::countr_zero(w[k]));
        return -1;
    }
    Bits operator&(const Bits& o) const {
        Bits r;
        for (std::size_t k = 0; k < W; ++k) r.w[k] = w[k] & o.w[k];
        return r;
    }
    Bits operator|(const Bits& o) const {
        Bits r;
        for (std::size_t k = 0; k < W; ++k) r.w[k] = w[k] | o.w[k];
        return r;
    }
    Bits minus(const Bits& o) const {
        Bits r;
        for (std::size_t k = 0; k < W; ++k) r.w[k] = w[k] & ~o.w[k];
        return r;
    }
    friend bool operator==(const Bits&, const Bits&) = default;
};

template <std::size_t W>
class MaxIndependentSet {
public:
    explicit MaxIndependentSet(std::span<const Bits<W>> adjacency) : adj_(adjacency) {}

    /// Size of a maximum independent set inside `candidates`.
    int solve(const Bits<W>& candidates) {
        best_ = 0;
        best_set_ = {};
        Bits<W> chosen{};
        recurse(candidates, 0, chosen);
        return best_;
    }
    [[nodiscard]] const Bits<W>& witness() const { return best_set_; }

private:
    void recurse(Bits<W> p, int size, Bits<W> chosen) {
        // A vertex with at most one neighbour left in p lies in some maximum set.
        for (bool changed = true; changed;) {
            changed = false;
            Bits<W> scan = p;
            for (int v = scan.first(); v >= 0; v = scan.first()) {
                auto uv = static_cast<std::size_t>(v);
                scan.reset(uv);
                Bits<W> nb = adj_[uv] & p;
                if (nb.count() > 1) continue;
                p = p.minus(nb);
                p.reset(uv);
                scan = scan.minus(nb);
                chosen.set(uv);
                ++size;
                changed = true;
            }
        }
        if (p.none()) {
            if (size > best_) {
                best_ = size;
                best_set_ = chosen;
            }
            return;
        }
        // At most one end of each edge of a greedy matching.
        int matched = 0;
        Bits<W> open = p;
        for (int u = open.first(); u >= 0; u = open.first()) {
            open.reset(static_cast<std::size_t>(u));
            int w = (adj_[static_cast<std::size_t>(u)] & open).first();
            if (w >= 0) {
                open.reset(static_cast<std::size_t>(w));
                ++matched;
            }
        }
        if (size + p.count() - matched <= best_) return;
        // Branch on the vertex of largest remaining degree.
        int v = -1;
        int deg = -1;
        Bits<W> scan = p;
        for (int u = scan.first(); u >= 0; u = scan.first()) {
            scan.reset(static_cast<std::size_t>(u));
            int d = (adj_[static_cast<std::size_t>(u)] & p).count();
            if (d > deg) {
                deg = d;
                v = u;
            }
        }
        auto uv = static_cast<std::size_t>(v);
        Bits<W> with = p.minus(adj_[uv]);
        with.reset(uv);
        Bits<W> chosen_with = chosen;
        chosen_with.set(uv);
        recurse(with, size + 1, chosen_with);
        Bits<W> without = p;
        without.reset(uv);
        recurse(without, size, chosen);
    }

    std::span<const Bits<W>> adj_;
    int best_ = 0;
    Bits<W> best_set_{};
};

}  // namespace asdim::detail
