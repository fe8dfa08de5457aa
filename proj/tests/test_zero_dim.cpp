#include <gtest/gtest.h>

#include "support.hpp"

using namespace asdim;
using asdim::test::spec;

namespace {

FiniteMetricSpace powers_of_four() {
    std::vector<std::int64_t> v;
    for (int i = 0; i <= 8; ++i) v.push_back(std::int64_t{1} << (2 * i));
    return generate(spec("integer_set", {}, v));
}

std::vector<Rational> rats(std::initializer_list<std::int64_t> v) {
    std::vector<Rational> out;
    for (auto x : v) out.emplace_back(x);
    return out;
}

}  // namespace

TEST(M0, Membership) {
    EXPECT_TRUE(m0_membership(0));
    EXPECT_TRUE(m0_membership(4));
    EXPECT_FALSE(m0_membership(2));
    EXPECT_TRUE(m0_membership(13));
    EXPECT_FALSE(m0_membership(14));
    EXPECT_THROW(m0_membership(-1), NegativeInput);
}

TEST(M0, BlocksExample) {
    auto b = m0_blocks(13, 1);
    ASSERT_EQ(b.size(), 4u);
    EXPECT_EQ(b[0].members, (std::vector<std::int64_t>{0, 1}));
    EXPECT_EQ(b[1].members, (std::vector<std::int64_t>{3, 4}));
    EXPECT_EQ(b[2].members, (std::vector<std::int64_t>{9, 10}));
    EXPECT_EQ(b[3].members, (std::vector<std::int64_t>{12, 13}));
    for (const auto& s : m0_blocks(13, 0)) EXPECT_EQ(s.members.size(), 1u);
}

TEST(M0, BlockFormulasExhaustive) {
    const std::int64_t N = pow3(9);
    for (std::size_t k = 0; k <= 8; ++k) {
        auto blocks = m0_blocks(N - 1, k);
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            const auto& m = blocks[i].members;
            ASSERT_EQ(m.size(), std::size_t{1} << k);
            for (auto x : m) ASSERT_TRUE(m0_membership(x));
            ASSERT_EQ(m.back() - m.front(), m0_block_diameter(k));
            if (i + 1 < blocks.size()) {
                ASSERT_GE(blocks[i + 1].members.front() - m.back(), m0_block_gap(k));
            }
        }
        std::int64_t gap = std::numeric_limits<std::int64_t>::max();
        for (std::size_t i = 0; i + 1 < blocks.size(); ++i)
            gap = std::min(gap, blocks[i + 1].members.front() - blocks[i].members.back());
        EXPECT_EQ(gap, m0_block_gap(k));
        if (k == 0) {
            continue;
        }
        auto finer = m0_blocks(N - 1, k - 1);
        std::size_t j = 0;
        for (const auto& b : blocks) {
            std::vector<std::int64_t> joined;
            for (int c = 0; c < 2; ++c, ++j) joined.insert(joined.end(), finer[j].members.begin(), finer[j].members.end());
            ASSERT_EQ(joined, b.members);
        }
    }
}

TEST(ZeroLadder, TernarySegment) {
    auto s = generate(spec("m0_segment", {{"N", 40}}));
    auto z = build_zero_ladder(s, rats({2, 5, 14}));
    ASSERT_EQ(z.levels.size(), 4u);
    for (std::size_t k = 0; k + 1 < z.branching.size(); ++k) EXPECT_EQ(z.branching[k], 2u);
    // 13 and 27 are 14 apart, so the top scale still splits the segment in two.
    EXPECT_FALSE(z.whole_at_top);
    EXPECT_EQ(z.levels.back().size(), 2u);
    for (std::size_t k = 1; k < z.levels.size(); ++k)
        for (std::size_t b = 0; b < z.levels[k - 1].size(); ++b) {
            const auto& child = z.levels[k - 1][b];
            const auto& parent = z.levels[k][z.parent[k - 1][b]];
            EXPECT_TRUE(std::includes(parent.begin(), parent.end(), child.begin(), child.end()));
        }
}

TEST(ZeroLadder, PowersOfFour) {
    auto s = powers_of_four();
    auto z = build_zero_ladder(s, rats({2, 10, 100}));
    // Gaps 3 * 4^i: only {1, 4} joins below 10, {1, 4, 16} below 100 ... plus 0.
    for (const auto& b : z.levels[1]) EXPECT_LE(b.size(), 2u);
    EXPECT_EQ(z.levels[0].size(), s.size());
}

TEST(ZeroLadder, SinglePoint) {
    auto s = generate(spec("integer_set", {}, {5}));
    auto z = build_zero_ladder(s, rats({2, 4}));
    for (const auto& l : z.levels) EXPECT_EQ(l.size(), 1u);
    auto e = embed_into_m0(s, z);
    EXPECT_EQ(e.image, std::vector<std::int64_t>{0});
}

TEST(ZeroLadder, RejectsLongChains) {
    auto s = integer_interval(0, 200);
    EXPECT_THROW(build_zero_ladder(s, rats({2})), NotZeroDimensionalAtScale);
    EXPECT_THROW(build_zero_ladder(s, rats({4, 2})), BadParameters);
}

TEST(M0Embedding, TwoPoints) {
    auto s = generate(spec("integer_set", {}, {0, 100}));
    auto z = build_zero_ladder(s, rats({50}));
    auto e = embed_into_m0(s, z);
    EXPECT_NE(e.image[0], e.image[1]);
    EXPECT_TRUE(check_m0_embedding(s, z, e).ok());
}

TEST(M0Embedding, TernarySegmentWithUnitStrides) {
    auto s = generate(spec("m0_segment", {{"N", 40}}));
    auto z = build_zero_ladder(s, rats({2, 5, 14}));
    auto e = embed_into_m0(s, z, std::vector<std::size_t>(z.levels.size(), 1));
    auto c = check_m0_embedding(s, z, e);
    EXPECT_TRUE(c.ok()) << c.witness;
    std::vector<std::int64_t> values;
    for (const auto& id : s.ids()) values.push_back(std::stoll(id));
    EXPECT_EQ(e.image, values);
}

TEST(M0Embedding, StrideTooSmall) {
    auto s = generate(spec("m0_segment", {{"N", 40}}));
    auto z = build_zero_ladder(s, rats({2, 5, 14}));
    EXPECT_THROW(embed_into_m0(s, z, std::vector<std::size_t>(z.levels.size(), 0)), StrideTooSmall);
}

TEST(M0Embedding, ContainmentAndInjectivity) {
    for (auto [s, sc] : {std::pair{powers_of_four(), rats({2, 10, 100})},
                         std::pair{generate(spec("m0_segment", {{"N", 729}})), rats({2, 5, 14, 41, 122, 365})}}) {
        auto z = build_zero_ladder(s, sc);
        auto e = embed_into_m0(s, z);
        auto c = check_m0_embedding(s, z, e);
        EXPECT_TRUE(c.ok()) << s.label() << " " << c.witness;
        for (auto v : e.image) EXPECT_TRUE(m0_membership(v));
        auto r = envelopes_at(s, LineImage{e.image}, sc);
        EXPECT_TRUE(r.lower_envelope_monotone) << s.label();
    }
}
