#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asdim/space.hpp"

namespace asdim {

/// Image distances of a map between finite spaces, in integer units over scale().
/// Any type with size(), units(i, j) and scale() works; these cover the common codomains.
struct LineImage {
    std::vector<std::int64_t> values;
    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] std::int64_t units(std::size_t a, std::size_t b) const {
        return values[a] > values[b] ? values[a] - values[b] : values[b] - values[a];
    }
    [[nodiscard]] std::int64_t scale() const { return 1; }
};

struct SpaceImage {
    const FiniteMetricSpace* codomain;
    std::vector<PointIndex> map;
    [[nodiscard]] std::size_t size() const { return map.size(); }
    [[nodiscard]] std::int64_t units(std::size_t a, std::size_t b) const { return codomain->units(map[a], map[b]); }
    [[nodiscard]] std::int64_t scale() const { return codomain->scale(); }
};

struct AffineFit {
    Rational lambda{0};     // max slope over pairs at distance >= 1
    Rational s{0};          // least s with img <= lambda d + s
    Rational lipschitz{0};  // max slope over all pairs
};

template <typename Image>
AffineFit fit_affine(const FiniteMetricSpace& dom, const Image& img) {
    if (dom.size() == 0) throw EmptyDomain();
    if (img.size() != dom.size()) throw DomainMismatch();
    const auto one = dom.ceil_units(Rational(1));
    AffineFit f;
    for (PointIndex x = 0; x < dom.size(); ++x)
        for (PointIndex y = x + 1; y < dom.size(); ++y) {
            const Rational d = dom.from_units(dom.units(x, y));
            const Rational e(img.units(x, y), img.scale());
            const Rational slope = e / d;
            f.lipschitz = max(f.lipschitz, slope);
            if (dom.units(x, y) >= one) f.lambda = max(f.lambda, slope);
        }
    for (PointIndex x = 0; x < dom.size(); ++x)
        for (PointIndex y = x + 1; y < dom.size(); ++y) {
            const Rational e(img.units(x, y), img.scale());
            f.s = max(f.s, e - f.lambda * dom.from_units(dom.units(x, y)));
        }
    return f;
}

struct EnvelopeBin {
    Rational lo;
    Extended hi;
    std::size_t count = 0;
    Rational min_img, max_img;
    friend bool operator==(const EnvelopeBin&, const EnvelopeBin&) = default;
};

struct DistortionReport {
    std::vector<EnvelopeBin> bins;  // nonempty bins, ascending
    AffineFit fit;
    bool lipschitz_ok = true;              // certificate img <= lambda d + s holds on all pairs
    bool lower_envelope_monotone = false;  // bin minima strictly increasing
    bool upper_envelope_monotone = false;  // bin maxima nondecreasing
    bool proper_proxy_ok = false;          // last bin's minimum exceeds the first bin's
    std::size_t pairs = 0;
};

namespace detail {

inline void finish_report(DistortionReport& r) {
    r.lower_envelope_monotone = !r.bins.empty();
    r.upper_envelope_monotone = !r.bins.empty();
    for (std::size_t i = 1; i < r.bins.size(); ++i) {
        if (!(r.bins[i].min_img > r.bins[i - 1].min_img)) r.lower_envelope_monotone = false;
        if (r.bins[i].max_img < r.bins[i - 1].max_img) r.upper_envelope_monotone = false;
    }
    r.proper_proxy_ok = r.bins.size() >= 2 && r.bins.back().min_img > r.bins.front().min_img;
}

template <typename Image, typename BinOf, typename BoundsOf>
DistortionReport scan(const FiniteMetricSpace& dom, const Image& img, BinOf bin_of, BoundsOf bounds_of) {
    if (img.size() != dom.size()) throw DomainMismatch();
    DistortionReport r;
    r.fit = fit_affine(dom, img);
    std::map<std::int64_t, EnvelopeBin> acc;
    for (PointIndex x = 0; x < dom.size(); ++x)
        for (PointIndex y = x + 1; y < dom.size(); ++y) {
            const Rational d = dom.from_units(dom.units(x, y));
            const Rational e(img.units(x, y), img.scale());
            ++r.pairs;
            if (e > r.fit.lambda * d + r.fit.s) r.lipschitz_ok = false;
            const auto b = bin_of(d);
            auto it = acc.find(b);
            if (it == acc.end()) {
                auto [lo, hi] = bounds_of(b);
                acc.emplace(b, EnvelopeBin{lo, hi, 1, e, e});
            } else {
                ++it->second.count;
                it->second.min_img = min(it->second.min_img, e);
                it->second.max_img = max(it->second.max_img, e);
            }
        }
    for (auto& [b, bin] : acc) r.bins.push_back(bin);
    finish_report(r);
    return r;
}

}  // namespace detail

/// Half-open bins [i w, (i+1) w) of source distance.
template <typename Image>
DistortionReport envelopes(const FiniteMetricSpace& dom, const Image& img, const Rational& bin_width = Rational(1)) {
    if (bin_width <= Rational(0)) throw BadScale();
    return detail::scan(
        dom, img, [&](const Rational& d) { return (d / bin_width).floor(); },
        [&](std::int64_t b) {
            return std::pair<Rational, Extended>{Rational(b) * bin_width, Extended{false, Rational(b + 1) * bin_width}};
        });
}

/// Bins [e_0, e_1), ..., [e_last, inf); pairs below e_0 fall in [0, e_0).
template <typename Image>
DistortionReport envelopes_at(const FiniteMetricSpace& dom, const Image& img, const std::vector<Rational>& edges) {
    std::vector<std::pair<Rational, Extended>> bounds;
    Rational lo{0};
    for (const auto& e : edges) {
        if (e <= lo) throw BadParameters("bin edges must increase from a positive value");
        bounds.push_back({lo, Extended{false, e}});
        lo = e;
    }
    bounds.push_back({lo, Extended::inf()});
    return detail::scan(
        dom, img,
        [&](const Rational& d) {
            auto it = std::upper_bound(edges.begin(), edges.end(), d);
            return static_cast<std::int64_t>(it - edges.begin());
        },
        [&](std::int64_t b) { return bounds[static_cast<std::size_t>(b)]; });
}

struct BornotopyResult {
    bool pass = true;
    Rational sup{0};
    std::size_t worst = 0;
};

/// sup_x d(f x, g x) <= C, for maps given by a displacement functor over n points.
template <typename Displacement>
BornotopyResult check_bornotopic(std::size_t n, Displacement disp, const Rational& C) {
    BornotopyResult r;
    for (std::size_t x = 0; x < n; ++x) {
        Rational d = disp(x);
        if (d > r.sup) {
            r.sup = d;
            r.worst = x;
        }
    }
    r.pass = r.sup <= C;
    return r;
}

inline BornotopyResult check_bornotopic(const FiniteMetricSpace& codomain, const std::vector<PointIndex>& f,
                                        const std::vector<PointIndex>& g, const Rational& C) {
    if (f.size() != g.size()) throw DomainMismatch();
    return check_bornotopic(f.size(), [&](std::size_t x) { return codomain.dist(f[x], g[x]); }, C);
}

}  // namespace asdim
