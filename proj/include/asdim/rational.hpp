#pragma once

#include <cstdint>
#include <compare>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace asdim {

class ArithmeticOverflow : public std::overflow_error {
public:
    ArithmeticOverflow() : std::overflow_error("rational arithmetic overflow") {}
};

/// Exact rational with 64-bit numerator/denominator in lowest terms.
///
/// All intermediate products are formed in 128 bits and reduced before being
/// narrowed; a result that still does not fit throws ArithmeticOverflow
/// rather than wrapping.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    [[nodiscard]] constexpr std::int64_t num() const { return num_; }
    [[nodiscard]] constexpr std::int64_t den() const { return den_; }
    [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }

    /// Largest integer not above the value.
    [[nodiscard]] std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    [[nodiscard]] std::int64_t ceil() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ > 0) ++q;
        return q;
    }

    /// Power of two, negative exponents allowed.
    static Rational pow2(int e) {
        if (e >= 62 || e <= -62) throw ArithmeticOverflow();
        return e >= 0 ? Rational(std::int64_t{1} << e) : Rational(1, std::int64_t{1} << (-e));
    }

    /// Accepts "p", "p/q" and "-p/q".
    static Rational parse(std::string_view s);
    [[nodiscard]] std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return from128(static_cast<__int128>(a.num_) + b.num_, a.den_);
        return from128(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                       static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return from128(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    Rational operator-() const {
        if (num_ == std::numeric_limits<std::int64_t>::min()) throw ArithmeticOverflow();
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return a.num_ <=> b.num_;
        __int128 l = static_cast<__int128>(a.num_) * b.den_;
        __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static Rational from128(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
        if (n > hi || n < -hi || d > hi) throw ArithmeticOverflow();
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }
    void assign(std::int64_t n, std::int64_t d) { *this = from128(n, d); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Rational Rational::parse(std::string_view s) {
    auto to_i64 = [](std::string_view t) {
        if (t.empty()) throw std::invalid_argument("empty rational component");
        std::size_t pos = 0;
        std::int64_t v = std::stoll(std::string(t), &pos);
        if (pos != t.size()) throw std::invalid_argument("bad rational: " + std::string(t));
        return v;
    };
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(to_i64(s));
    return Rational(to_i64(s.substr(0, slash)), to_i64(s.substr(slash + 1)));
}

inline Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// A nonnegative rational or +infinity; used for Lebesgue numbers and
/// distances to empty sets.
struct Extended {
    bool infinite = false;
    Rational value{};

    static Extended inf() { return {true, {}}; }
    friend bool operator==(const Extended&, const Extended&) = default;
    friend std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
        if (a.infinite || b.infinite) {
            if (a.infinite && b.infinite) return std::strong_ordering::equal;
            return a.infinite ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        return a.value <=> b.value;
    }
    [[nodiscard]] std::string str() const { return infinite ? std::string("inf") : value.str(); }
};

}  // namespace asdim
