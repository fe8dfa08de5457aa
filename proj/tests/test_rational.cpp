#include <gtest/gtest.h>

#include <random>

#include "asdim/rational.hpp"

using asdim::ArithmeticOverflow;
using asdim::Extended;
using asdim::Rational;

TEST(Rational, NormalizesSignAndGcd) {
    Rational r(6, -8);
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 4);
    EXPECT_EQ(Rational(0, 5), Rational(0));
    EXPECT_EQ(Rational(0, -5).den(), 1);
}

TEST(Rational, Arithmetic) {
    EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
    EXPECT_EQ(Rational(1, 2) - Rational(1, 3), Rational(1, 6));
    EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
    EXPECT_EQ(Rational(2, 3) / Rational(4, 9), Rational(3, 2));
    EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
}

TEST(Rational, FloorCeil) {
    EXPECT_EQ(Rational(7, 2).floor(), 3);
    EXPECT_EQ(Rational(7, 2).ceil(), 4);
    EXPECT_EQ(Rational(-7, 2).floor(), -4);
    EXPECT_EQ(Rational(-7, 2).ceil(), -3);
    EXPECT_EQ(Rational(4).floor(), 4);
    EXPECT_EQ(Rational(4).ceil(), 4);
}

TEST(Rational, Pow2) {
    EXPECT_EQ(Rational::pow2(10), Rational(1024));
    EXPECT_EQ(Rational::pow2(-3), Rational(1, 8));
    EXPECT_THROW(Rational::pow2(62), ArithmeticOverflow);
}

TEST(Rational, ParseAndPrint) {
    EXPECT_EQ(Rational::parse("3/12"), Rational(1, 4));
    EXPECT_EQ(Rational::parse("-5"), Rational(-5));
    EXPECT_EQ(Rational(1, 4).str(), "1/4");
    EXPECT_THROW(Rational::parse("1/"), std::invalid_argument);
    EXPECT_THROW(Rational::parse("x"), std::invalid_argument);
}

TEST(Rational, OrderingMatchesCrossMultiplication) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> num(-1000, 1000), den(1, 1000);
    for (int i = 0; i < 2000; ++i) {
        auto a = num(rng), b = den(rng), c = num(rng), d = den(rng);
        EXPECT_EQ(Rational(a, b) < Rational(c, d), a * d < c * b);
        EXPECT_EQ(Rational(a, b) == Rational(c, d), a * d == c * b);
    }
}

TEST(Rational, OverflowIsDetected) {
    const std::int64_t big = std::int64_t{1} << 62;
    EXPECT_THROW(Rational(big) * Rational(4), ArithmeticOverflow);
    EXPECT_THROW(Rational(1, big) + Rational(1, big - 1), ArithmeticOverflow);
    EXPECT_NO_THROW(Rational(big) / Rational(big));
}

TEST(Extended, InfinityIsTop) {
    EXPECT_LT((Extended{false, Rational(1000)}), Extended::inf());
    EXPECT_EQ(Extended::inf(), Extended::inf());
    EXPECT_EQ(Extended::inf().str(), "inf");
    EXPECT_LT((Extended{false, Rational(1)}), (Extended{false, Rational(2)}));
}
