#include <gtest/gtest.h>

#include "support.hpp"

using namespace asdim;
using asdim::test::spec;

namespace {

PointSet range(std::int64_t lo, std::int64_t hi, const FiniteMetricSpace& s) {
    PointSet p;
    for (auto v = lo; v <= hi; ++v) p.push_back(s.index_of(std::to_string(v)));
    return p;
}

}  // namespace

TEST(Generators, Sizes) {
    auto g = generate(spec("grid", {{"n", 2}, {"R", 1}}));
    EXPECT_EQ(g.size(), 9u);
    EXPECT_EQ(g.diameter(), Rational(2));
    auto m = generate(spec("m0_segment", {{"N", 13}}));
    std::vector<std::string> want{"0", "1", "3", "4", "9", "10", "12", "13"};
    EXPECT_EQ(m.ids(), want);
    EXPECT_EQ(generate(spec("x_mk", {{"m", 1}, {"k", 2}}, {}, Rational(1, 2))).size(), 21u);
    EXPECT_EQ(generate(spec("x_mk", {{"m", 1}, {"k", 3}}, {}, Rational(1, 2))).size(), 40u);
    EXPECT_EQ(generate(spec("free_group", {{"g", 2}, {"R", 2}})).size(), 1u + 4u + 12u);
}

TEST(Generators, EveryCorpusSpaceIsAMetric) {
    for (const auto& s : test::corpus()) EXPECT_NO_THROW(check_metric_axioms(s)) << s.label();
}

TEST(Generators, XmkHasAtMostOneOffLatticeCoordinate) {
    for (std::int64_t m : {1, 2, 3})
        for (std::int64_t step : {1, 2}) {
            auto sk = asdim::detail::skeleton(m, 2, 2, step, kDefaultPointCap);
            ASSERT_FALSE(sk.points.empty());
            for (const auto& p : sk.points) {
                int off = 0;
                for (auto c : p)
                    if (c % (m * step) != 0) ++off;
                EXPECT_LE(off, 1);
            }
        }
}

TEST(Generators, CapAndParameterErrors) {
    EXPECT_THROW(generate(spec("grid", {{"n", 2}, {"R", 100}}), 100), CapExceeded);
    EXPECT_THROW(generate(spec("grid", {{"n", 2}})), BadParameters);
    EXPECT_THROW(generate(spec("nope", {})), BadParameters);
}

TEST(Validation, RejectsEachAxiom) {
    using R = Rational;
    EXPECT_THROW(validate_metric({{R(0), R(1)}, {R(1)}}), NotSquareError);
    EXPECT_THROW(validate_metric({{R(0), R(-1)}, {R(-1), R(0)}}), NegativeDistance);
    EXPECT_THROW(validate_metric({{R(1), R(1)}, {R(1), R(0)}}), NonzeroDiagonal);
    EXPECT_THROW(validate_metric({{R(0), R(1)}, {R(2), R(0)}}), AsymmetryError);
    EXPECT_THROW(validate_metric({{R(0), R(1), R(3)}, {R(1), R(0), R(1)}, {R(3), R(1), R(0)}}), TriangleViolation);
    auto s = validate_metric({{R(0), R(1, 2)}, {R(1, 2), R(0)}});
    EXPECT_EQ(s.scale(), 2);
    EXPECT_EQ(s.dist(0, 1), R(1, 2));
}

TEST(Validation, ViolationIsFoundInLargeTables) {
    std::mt19937_64 rng(3);
    auto s = test::random_space(rng, 60, 1000);
    auto rows = distance_rows(s);
    rows[10][50] = rows[50][10] = rows[10][50] + rows[10][50] + Rational(1);
    EXPECT_THROW(validate_metric(rows), TriangleViolation);
}

TEST(Ball, Examples) {
    auto g = generate(spec("grid", {{"n", 2}, {"R", 1}}));
    EXPECT_EQ(ball(g, g.basepoint(), Rational(0)), PointSet{g.basepoint()});
    EXPECT_EQ(ball(g, g.basepoint(), Rational(1)).size(), 9u);
    auto line = integer_interval(0, 10);
    EXPECT_EQ(ball(line, "4", Rational(5, 2)), range(2, 6, line));
    EXPECT_THROW(ball(line, "44", Rational(1)), UnknownPoint);
}

TEST(GreedyNet, Examples) {
    auto line = integer_interval(0, 10);
    PointSet want{0, 3, 6, 9};
    EXPECT_EQ(greedy_net(line, Rational(3)), want);
    EXPECT_EQ(greedy_net(line, Rational(11)), PointSet{0});
    EXPECT_THROW(greedy_net(line, Rational(0)), BadScale);
}

TEST(GreedyNet, DiscreteAndDenseOnCorpus) {
    for (const auto& s : test::corpus())
        for (int c : {1, 2, 4, 8}) {
            const Rational C(c);
            auto y = greedy_net(s, C);
            for (std::size_t i = 0; i < y.size(); ++i)
                for (std::size_t j = i + 1; j < y.size(); ++j) ASSERT_GE(s.dist(y[i], y[j]), C) << s.label();
            for (PointIndex x = 0; x < s.size(); ++x) {
                Rational best = s.dist(x, y[0]);
                for (auto p : y) best = min(best, s.dist(x, p));
                ASSERT_LE(best, C) << s.label() << " " << s.id(x);
            }
        }
}

TEST(Capacity, Examples) {
    auto line = integer_interval(0, 4);
    auto c = capacity(line, all_points(line), Rational(2));
    EXPECT_EQ(c.value, 3u);
    EXPECT_TRUE(c.exact);
    EXPECT_EQ(c.witness, (PointSet{0, 2, 4}));
    EXPECT_EQ(capacity(line, {2}, Rational(100)).value, 1u);
    EXPECT_EQ(capacity(line, all_points(line), Rational(1)).value, 5u);
    EXPECT_THROW(capacity(line, {}, Rational(1)), EmptySubset);
}

TEST(Capacity, MatchesSubsetEnumeration) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        auto s = test::random_space(rng, 4 + t % 12, 8);
        for (int r = 1; r <= 8; ++r) {
            auto c = capacity(s, all_points(s), Rational(r));
            ASSERT_TRUE(c.exact);
            ASSERT_EQ(c.value, test::capacity_oracle(s, all_points(s), Rational(r)));
            for (std::size_t i = 0; i < c.witness.size(); ++i)
                for (std::size_t j = i + 1; j < c.witness.size(); ++j) ASSERT_GE(s.dist(c.witness[i], c.witness[j]), Rational(r));
        }
    }
}

TEST(Capacity, Monotone) {
    auto s = generate(spec("x_mk", {{"m", 1}, {"k", 2}}, {}, Rational(1, 2)));
    auto all = all_points(s);
    PointSet half(all.begin(), all.begin() + 10);
    std::size_t prev = s.size();
    for (auto r : {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(3)}) {
        auto v = capacity(s, all, r).value;
        EXPECT_LE(v, prev);
        EXPECT_LE(capacity(s, half, r).value, v);
        prev = v;
    }
}

TEST(Capacity, LargeSubsetIsFlaggedInexact) {
    auto s = integer_interval(0, 60);
    auto c = capacity(s, all_points(s), Rational(2));
    EXPECT_FALSE(c.exact);
    EXPECT_EQ(c.value, 31u);
}

TEST(Quotient, Examples) {
    auto a = integer_interval(0, 3);
    auto q = quotient_pseudometric(a, Decomposition{{{1, 2}}});
    EXPECT_EQ(q[0][3], Rational(2));
    auto e = quotient_pseudometric(a, Decomposition{});
    EXPECT_EQ(e, distance_rows(a));
    auto b = integer_interval(0, 8);
    Decomposition dec{{{2, 3}, {5, 6}}};
    EXPECT_EQ(quotient_pseudometric(b, dec)[0][8], Rational(6));
    EXPECT_EQ(test::chain_oracle(b, dec, 0, 8), 6);
}

TEST(Quotient, OverlappingBlocksRejected) {
    auto a = integer_interval(0, 3);
    EXPECT_THROW(QuotientPseudometric(a, Decomposition{{{0, 1}, {1, 2}}}), BadParameters);
}

TEST(Quotient, MatchesChainOracleOnSmallSpaces) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 60; ++t) {
        auto s = test::random_space(rng, 3 + t % 6, 9);
        auto dec = test::random_decomposition(rng, s.size());
        QuotientPseudometric q(s, dec);
        for (PointIndex x = 0; x < s.size(); ++x)
            for (PointIndex y = 0; y < s.size(); ++y) ASSERT_EQ(q.units(x, y), test::chain_oracle(s, dec, x, y));
    }
}

TEST(Quotient, PseudometricBelowD) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        auto s = test::random_space(rng, 30 + t, 20);
        auto dec = test::random_decomposition(rng, s.size());
        QuotientPseudometric q(s, dec);
        for (PointIndex x = 0; x < s.size(); ++x)
            for (PointIndex y = 0; y < s.size(); ++y) {
                ASSERT_LE(q.units(x, y), s.units(x, y));
                ASSERT_EQ(q.units(x, y), q.units(y, x));
                for (PointIndex z = 0; z < s.size(); z += 7) ASSERT_LE(q.units(x, z), q.units(x, y) + q.units(y, z));
            }
    }
}

TEST(Quotient, MergingBlocksNeverIncreases) {
    auto s = integer_interval(0, 20);
    Decomposition fine{{{2, 3}, {5, 6}, {10, 11, 12}}};
    Decomposition coarse{{{2, 3, 5, 6}, {10, 11, 12}}};
    QuotientPseudometric a(s, fine), b(s, coarse);
    for (PointIndex x = 0; x < s.size(); ++x)
        for (PointIndex y = 0; y < s.size(); ++y) EXPECT_LE(b.units(x, y), a.units(x, y));
}

TEST(Subspace, KeepsDistances) {
    auto s = integer_interval(0, 10);
    auto t = subspace(s, {1, 5, 9}, "odd");
    EXPECT_EQ(t.size(), 3u);
    EXPECT_EQ(t.dist(0, 2), Rational(8));
    EXPECT_EQ(t.id(1), "5");
}
