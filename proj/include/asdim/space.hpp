#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "asdim/errors.hpp"
#include "asdim/rational.hpp"

namespace asdim {

using PointIndex = std::size_t;
using PointSet = std::vector<PointIndex>;

/// Parameter container for the canonical example spaces.
struct GeneratorSpec {
    std::string kind;
    std::map<std::string, std::int64_t> params;
    /// Kind-specific integer table: the index function for comb trees, the
    /// point list for integer sets, side lengths for adjunction spaces.
    std::vector<std::int64_t> table;
    /// Resolution step 1/s of discretized continuous spaces.
    Rational step{1};

    [[nodiscard]] std::int64_t get(const std::string& key, std::int64_t fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
    [[nodiscard]] std::int64_t require(const std::string& key) const {
        auto it = params.find(key);
        if (it == params.end()) throw BadParameters(kind + ": missing parameter '" + key + "'");
        return it->second;
    }
    friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

/// Finite point set with an exact distance table.
///
/// Distances are stored as integer numerators over one common denominator
/// (`scale()`), either as a dense table or implicitly as the sup-metric of
/// integer coordinates. Both forms behave identically through `units`.
class FiniteMetricSpace {
public:
    FiniteMetricSpace() = default;

    static FiniteMetricSpace dense(std::vector<std::string> ids, std::vector<std::int64_t> units, std::int64_t scale,
                                   std::string label, PointIndex basepoint = 0) {
        FiniteMetricSpace s;
        s.ids_ = std::move(ids);
        s.table_ = std::move(units);
        s.scale_ = scale;
        s.label_ = std::move(label);
        s.basepoint_ = basepoint;
        s.finish();
        return s;
    }

    /// Sup-metric on integer coordinate vectors of dimension `dim`, in units of 1/scale.
    static FiniteMetricSpace coordinates(std::vector<std::string> ids, std::vector<std::int64_t> coords,
                                         std::size_t dim, std::int64_t scale, std::string label,
                                         PointIndex basepoint = 0) {
        FiniteMetricSpace s;
        s.ids_ = std::move(ids);
        s.coords_ = std::move(coords);
        s.dim_ = dim;
        s.scale_ = scale;
        s.label_ = std::move(label);
        s.basepoint_ = basepoint;
        s.finish();
        return s;
    }

    [[nodiscard]] std::size_t size() const { return ids_.size(); }
    [[nodiscard]] std::int64_t scale() const { return scale_; }
    [[nodiscard]] bool is_dense() const { return dim_ == 0; }
    [[nodiscard]] std::size_t dimension() const { return dim_; }

    [[nodiscard]] std::int64_t units(PointIndex i, PointIndex j) const {
        if (dim_ == 0) return table_[i * ids_.size() + j];
        const std::int64_t* a = &coords_[i * dim_];
        const std::int64_t* b = &coords_[j * dim_];
        std::int64_t m = 0;
        for (std::size_t k = 0; k < dim_; ++k) m = std::max(m, a[k] > b[k] ? a[k] - b[k] : b[k] - a[k]);
        return m;
    }
    [[nodiscard]] Rational dist(PointIndex i, PointIndex j) const { return Rational(units(i, j), scale_); }

    [[nodiscard]] const std::vector<std::string>& ids() const { return ids_; }
    [[nodiscard]] const std::string& id(PointIndex i) const { return ids_[i]; }
    [[nodiscard]] PointIndex index_of(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) throw UnknownPoint(id);
        return it->second;
    }
    [[nodiscard]] PointIndex basepoint() const { return basepoint_; }
    [[nodiscard]] const std::string& label() const { return label_; }
    [[nodiscard]] const std::vector<std::int64_t>& coords() const { return coords_; }
    [[nodiscard]] const std::vector<std::int64_t>& table() const { return table_; }
    [[nodiscard]] const std::optional<GeneratorSpec>& generator() const { return generator_; }
    void set_generator(GeneratorSpec g) { generator_ = std::move(g); }
    void set_label(std::string l) { label_ = std::move(l); }
    void set_basepoint(PointIndex b) {
        if (b >= size()) throw UnknownPoint(std::to_string(b));
        basepoint_ = b;
    }

    /// Threshold helpers: d <= r  iff  units <= floor_units(r); d < r iff units < ceil_units(r).
    [[nodiscard]] std::int64_t floor_units(const Rational& r) const { return (r * Rational(scale_)).floor(); }
    [[nodiscard]] std::int64_t ceil_units(const Rational& r) const { return (r * Rational(scale_)).ceil(); }
    [[nodiscard]] Rational from_units(std::int64_t u) const { return Rational(u, scale_); }

    [[nodiscard]] std::int64_t diameter_units() const {
        std::int64_t m = 0;
        for (PointIndex i = 0; i < size(); ++i)
            for (PointIndex j = i + 1; j < size(); ++j) m = std::max(m, units(i, j));
        return m;
    }
    [[nodiscard]] Rational diameter() const { return from_units(diameter_units()); }

    /// Structural equality: same points, basepoint, label and distances.
    friend bool operator==(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
        if (a.ids_ != b.ids_ || a.basepoint_ != b.basepoint_ || a.label_ != b.label_) return false;
        for (PointIndex i = 0; i < a.size(); ++i)
            for (PointIndex j = 0; j < a.size(); ++j)
                if (a.dist(i, j) != b.dist(i, j)) return false;
        return true;
    }

private:
    void finish() {
        index_.clear();
        for (PointIndex i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);
        if (index_.size() != ids_.size()) throw BadParameters("duplicate point identifiers");
        if (!ids_.empty() && basepoint_ >= ids_.size()) throw UnknownPoint(std::to_string(basepoint_));
        if (scale_ <= 0) throw BadParameters("scale must be positive");
    }

    std::vector<std::string> ids_;
    std::unordered_map<std::string, PointIndex> index_;
    std::vector<std::int64_t> table_;
    std::vector<std::int64_t> coords_;
    std::size_t dim_ = 0;
    std::int64_t scale_ = 1;
    PointIndex basepoint_ = 0;
    std::string label_;
    std::optional<GeneratorSpec> generator_;
};

namespace detail {

// Returns true if some (x, y, z) with z >= x breaks the triangle inequality,
// i.e. max_z (d(x,z) - d(y,z)) > d(x,y). Symmetry makes the z >= x half sufficient.
template <typename T>
bool any_triangle_violation(const T* d, std::size_t n) {
    constexpr std::size_t kBlock = 32;  // x rows kept hot while each y row streams past
    for (std::size_t x0 = 0; x0 < n; x0 += kBlock) {
        const std::size_t x1 = std::min(n, x0 + kBlock);
        for (std::size_t y = 0; y < n; ++y) {
            const T* ry = d + y * n;
            for (std::size_t x = x0; x < x1; ++x) {
                const T* rx = d + x * n;
                T worst = 0;
                for (std::size_t z = x; z < n; ++z) {
                    T diff = static_cast<T>(rx[z] - ry[z]);
                    worst = diff > worst ? diff : worst;
                }
                if (worst > rx[y]) return true;
            }
        }
    }
    return false;
}

__attribute__((target_clones("arch=skylake-avx512", "avx2", "default"))) inline bool any_violation_i16(const std::int16_t* d,
                                                                                std::size_t n) {
    return any_triangle_violation(d, n);
}
__attribute__((target_clones("arch=skylake-avx512", "avx2", "default"))) inline bool any_violation_i32(const std::int32_t* d,
                                                                                std::size_t n) {
    return any_triangle_violation(d, n);
}

}  // namespace detail

/// Exact metric-axiom check of a space already in unit form. Throws the
/// first violation found in lexicographic (x, y, z) order.
inline void check_metric_axioms(const FiniteMetricSpace& s) {
    const std::size_t n = s.size();
    std::int64_t maxu = 0;
    for (PointIndex i = 0; i < n; ++i) {
        if (s.units(i, i) != 0) throw NonzeroDiagonal(i);
        for (PointIndex j = 0; j < n; ++j) {
            auto u = s.units(i, j);
            if (u < 0) throw NegativeDistance(i, j);
            if (u != s.units(j, i)) throw AsymmetryError(std::min(i, j), std::max(i, j));
            maxu = std::max(maxu, u);
        }
    }
    bool violated = false;
    if (maxu < 16000) {
        std::vector<std::int16_t> t(n * n);
        for (PointIndex i = 0; i < n; ++i)
            for (PointIndex j = 0; j < n; ++j) t[i * n + j] = static_cast<std::int16_t>(s.units(i, j));
        violated = detail::any_violation_i16(t.data(), n);
    } else if (maxu < (std::int64_t{1} << 30)) {
        std::vector<std::int32_t> t(n * n);
        for (PointIndex i = 0; i < n; ++i)
            for (PointIndex j = 0; j < n; ++j) t[i * n + j] = static_cast<std::int32_t>(s.units(i, j));
        violated = detail::any_violation_i32(t.data(), n);
    } else {
        std::vector<std::int64_t> t(n * n);
        for (PointIndex i = 0; i < n; ++i)
            for (PointIndex j = 0; j < n; ++j) t[i * n + j] = s.units(i, j);
        violated = detail::any_triangle_violation(t.data(), n);
    }
    if (!violated) return;
    for (PointIndex x = 0; x < n; ++x)
        for (PointIndex y = 0; y < n; ++y)
            for (PointIndex z = 0; z < n; ++z)
                if (s.units(x, z) > s.units(x, y) + s.units(y, z)) throw TriangleViolation(x, y, z);
}

/// Builds a space from a square rational table, checking every metric axiom exactly.
inline FiniteMetricSpace validate_metric(const std::vector<std::vector<Rational>>& table,
                                         std::vector<std::string> ids = {}, std::string label = "matrix",
                                         PointIndex basepoint = 0) {
    const std::size_t n = table.size();
    for (const auto& row : table)
        if (row.size() != n) throw NotSquareError();
    if (ids.empty()) {
        ids.reserve(n);
        for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    }
    if (ids.size() != n) throw BadParameters("identifier count does not match table size");
    std::int64_t scale = 1;
    for (PointIndex i = 0; i < n; ++i)
        for (PointIndex j = 0; j < n; ++j) {
            if (table[i][j] < Rational(0)) throw NegativeDistance(i, j);
            scale = std::lcm(scale, table[i][j].den());
        }
    std::vector<std::int64_t> units(n * n);
    for (PointIndex i = 0; i < n; ++i)
        for (PointIndex j = 0; j < n; ++j) units[i * n + j] = (table[i][j] * Rational(scale)).num();
    auto s = FiniteMetricSpace::dense(std::move(ids), std::move(units), scale, std::move(label), basepoint);
    check_metric_axioms(s);
    return s;
}

/// Distance table of a space as rationals (for serialization and oracles).
inline std::vector<std::vector<Rational>> distance_rows(const FiniteMetricSpace& s) {
    std::vector<std::vector<Rational>> rows(s.size(), std::vector<Rational>(s.size()));
    for (PointIndex i = 0; i < s.size(); ++i)
        for (PointIndex j = 0; j < s.size(); ++j) rows[i][j] = s.dist(i, j);
    return rows;
}

}  // namespace asdim
