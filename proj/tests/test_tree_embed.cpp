#include <gtest/gtest.h>

#include "support.hpp"

using namespace asdim;

namespace {

struct Built {
    FiniteMetricSpace s;
    CoverSequence seq;
    std::vector<TreeBuild> builds;
    TreeFamily trees;
    EmbeddingMap e;
};

const Built& built() {
    static const Built b = [] {
        Built x;
        x.s = integer_interval(0, 300);
        x.seq = build_cover_sequence(x.s, 1, 3);
        for (std::size_t c = 0; c < x.seq.colors; ++c) x.builds.push_back(build_tree(x.s, x.seq, c));
        x.trees = trees_of(x.builds);
        x.e = embed_product(x.s, x.seq, x.builds);
        return x;
    }();
    return b;
}

ColoredCover one_color(std::vector<PointSet> blocks) {
    ColoredCover c;
    c.colors = 1;
    c.D = Rational(1);
    for (auto& b : blocks) c.blocks.push_back({std::move(b), 0});
    return c;
}

// Levels 0 .. top with the given block lists, all color 0; parents from containment.
CoverSequence hand_ladder(const FiniteMetricSpace& s, std::vector<std::vector<PointSet>> per_level) {
    CoverSequence seq;
    seq.colors = 1;
    for (auto& l : per_level) {
        seq.levels.push_back(one_color(std::move(l)));
        seq.d.push_back(Rational(1));
        seq.m.push_back(Rational(1));
    }
    compute_psi(s, seq);
    return seq;
}

// Two unit whiskers on a trunk of length 2, both attached at its far end.
FilteredTree small_tree() {
    std::vector<TreeSegment> segs(3);
    segs[0] = {0, 1, Rational(2), -1, Rational(0), Rational(0)};
    segs[1] = {1, 0, Rational(1), 0, Rational(2), Rational(0)};
    segs[2] = {2, 0, Rational(1), 0, Rational(2), Rational(0)};
    return FilteredTree(0, segs);
}

}  // namespace

TEST(LipschitzExtend, Examples) {
    auto s = generate(test::spec("integer_set", {}, {0, 10, 20}));
    ScalarMap m{{0, 2}, {Rational(0), Rational(0)}, Rational(1)};
    auto e = lipschitz_extend(m, s, Rational(1), Interval{Rational(0), Rational(4)});
    EXPECT_EQ(e.values[1], Rational(4));
    ScalarMap one{{0}, {Rational(3)}, Rational(1)};
    auto f = lipschitz_extend(one, s, Rational(1, 2));
    EXPECT_EQ(f.values, (std::vector<Rational>{Rational(3), Rational(8), Rational(13)}));
    ScalarMap all{{0, 1, 2}, {Rational(1), Rational(2), Rational(3)}, Rational(1)};
    EXPECT_EQ(lipschitz_extend(all, s, Rational(1)).values, all.values);
    ScalarMap bad{{0, 1}, {Rational(0), Rational(11)}, Rational(1)};
    EXPECT_THROW(lipschitz_extend(bad, s, Rational(1)), InputNotLipschitz);
}

TEST(BlockMap, InteriorBlockExample) {
    auto s = integer_interval(0, 40);
    PointSet U;
    for (PointIndex p = 10; p <= 30; ++p) U.push_back(p);
    auto seq = hand_ladder(s, {{}, {}, {U}});
    auto f = build_fU(s, seq, 0);
    EXPECT_EQ(f.level, 2u);
    EXPECT_EQ(f.at(10), Rational(0));
    EXPECT_EQ(f.at(30), Rational(0));
    EXPECT_EQ(f.at(20), Rational(4));
    for (auto p : f.boundary) EXPECT_EQ(f.at(p), Rational(0));
    auto r = check_block(s, seq, f);
    EXPECT_TRUE(r.lipschitz && r.zero_on_boundary) << r.witness;
}

TEST(BlockMap, MissingParentTable) {
    auto s = integer_interval(0, 4);
    auto seq = hand_ladder(s, {{all_points(s)}});
    seq.psi.clear();
    EXPECT_THROW(build_fU(s, seq, 0), MissingParentTable);
}

TEST(BlockMap, PropertiesOnBuiltLadder) {
    const auto& b = built();
    for (const auto& tb : b.builds)
        for (const auto& m : tb.maps) {
            auto r = check_block(b.s, b.seq, m);
            EXPECT_TRUE(r.children_separated && r.deep_point && r.lipschitz && r.zero_on_boundary) << r.witness;
        }
}

TEST(Tree, WhiskersOnATrunk) {
    auto s = integer_interval(0, 15);
    std::vector<PointSet> units;
    for (PointIndex p = 0; p < 16; ++p) units.push_back({p});
    auto seq = hand_ladder(s, {units, {all_points(s)}});
    auto tb = build_tree(s, seq, 0);
    const auto& t = tb.tree;
    ASSERT_EQ(t.segments().size(), 17u);
    EXPECT_EQ(t.segments()[t.root()].length, Rational(2));
    std::size_t whiskers = 0;
    for (const auto& g : t.segments())
        if (g.parent >= 0) {
            ++whiskers;
            EXPECT_EQ(g.length, Rational(1));
            EXPECT_EQ(g.attach, Rational(2));
        }
    EXPECT_EQ(whiskers, 16u);
    EXPECT_EQ(t.mesh(0), Rational(1));
    EXPECT_EQ(t.mesh(1), Rational(2));
    EXPECT_EQ(t.max_degree(), 17u);
}

TEST(Tree, SingleLevel) {
    auto s = integer_interval(0, 3);
    auto seq = hand_ladder(s, {{all_points(s)}});
    auto tb = build_tree(s, seq, 0);
    EXPECT_EQ(tb.tree.segments().size(), 1u);
    EXPECT_EQ(tb.tree.top_level(), 0u);
}

TEST(Tree, RejectsBadGluing) {
    std::vector<TreeSegment> two_roots(2);
    two_roots[0] = {0, 1, Rational(2), -1, Rational(0), Rational(0)};
    two_roots[1] = {1, 0, Rational(1), -1, Rational(0), Rational(0)};
    EXPECT_THROW(FilteredTree(0, two_roots), CycleDetected);
    std::vector<TreeSegment> flat(2);
    flat[0] = {0, 1, Rational(2), -1, Rational(0), Rational(0)};
    flat[1] = {1, 1, Rational(2), 0, Rational(1), Rational(0)};
    EXPECT_THROW(FilteredTree(0, flat), CycleDetected);
}

TEST(Tree, MeshIsPowerOfTwo) {
    auto s = integer_interval(0, 4000);
    auto seq = build_cover_sequence(s, 1, 3);
    for (std::size_t c = 0; c < seq.colors; ++c) {
        auto t = build_tree(s, seq, c).tree;
        for (std::size_t j = 0; j <= t.top_level(); ++j) EXPECT_EQ(t.mesh(j), Rational::pow2(static_cast<int>(j)));
    }
}

// A lone child glued at the far end of the top segment continues it: no branch point, so
// the maximal free segment of T_1 is 4 + 2 long.
TEST(Tree, LoneEndChildExtendsTheTopSegment) {
    for (const auto& t : built().trees) {
        EXPECT_EQ(t.mesh(0), Rational(1));
        EXPECT_EQ(t.mesh(1), Rational(6));
        EXPECT_EQ(t.mesh(2), Rational(4));
    }
}

TEST(Tree, RetractionExamples) {
    auto t = small_tree();
    TreePoint trunk{0, Rational(1)}, tip{1, Rational(1)};
    EXPECT_EQ(t.retract(1, trunk), trunk);
    EXPECT_EQ(t.retract(1, tip), (TreePoint{0, Rational(2)}));
    EXPECT_EQ(t.retract(0, tip), tip);
    EXPECT_THROW((void)t.retract(2, tip), LevelOutOfRange);
    EXPECT_EQ(t.distance(tip, TreePoint{2, Rational(1)}), Rational(2));
    EXPECT_EQ(t.distance(tip, TreePoint{0, Rational(0)}), Rational(3));
}

TEST(Tree, RetractionComposition) {
    for (const auto& t : built().trees)
        for (const auto& p : tree_grid(t, Rational(1, 2)))
            for (std::size_t k = 0; k <= t.top_level(); ++k) {
                auto rk = t.retract(k, p);
                EXPECT_EQ(t.retract(k, rk), rk);
                for (std::size_t i = k; i <= t.top_level(); ++i) ASSERT_EQ(t.retract(i, p), t.retract(i, rk));
            }
}

TEST(Embedding, SeparationAndMembership) {
    const auto& b = built();
    auto sep = check_separation(b.s, b.seq, b.trees, b.e);
    EXPECT_TRUE(sep.pass) << sep.level << " " << sep.x << " " << sep.y;
    BaseIndex idx(b.trees);
    for (const auto& p : b.e.images) EXPECT_TRUE(m_membership(p, b.trees, idx, 1, top_level(b.trees)).member);
}

TEST(Embedding, CoordinatesComeFromMinimalBlocks) {
    const auto& b = built();
    for (PointIndex x = 0; x < b.s.size(); ++x)
        for (std::size_t c = 0; c < b.seq.colors; ++c) {
            const auto& src = b.e.source[x][c];
            const auto& blk = b.seq.block(src.block);
            EXPECT_EQ(blk.color, c);
            EXPECT_TRUE(std::binary_search(blk.points.begin(), blk.points.end(), x));
            for (std::size_t k = 0; k < src.level; ++k)
                for (const auto& o : b.seq.levels[k].blocks) {
                    if (o.color != c) continue;
                    EXPECT_FALSE(std::binary_search(o.points.begin(), o.points.end(), x));
                }
        }
}

TEST(Membership, VacuousAndHandcrafted) {
    TreeFamily two{small_tree(), small_tree()};
    ProductPoint inner{{TreePoint{0, Rational(1)}, TreePoint{0, Rational(1, 2)}}};
    EXPECT_TRUE(m_membership(inner, two, 2, 1).member);
    auto r = m_membership(inner, two, 1, 1);
    EXPECT_FALSE(r.member);
    EXPECT_EQ(r.failing_level, 1u);
    ProductPoint whisker{{TreePoint{1, Rational(1, 2)}, TreePoint{0, Rational(1)}}};
    auto w = m_membership(whisker, two, 1, 1);
    EXPECT_TRUE(w.member);
    EXPECT_EQ(w.witness, std::vector<std::size_t>{0});
    EXPECT_THROW(m_membership(inner, two, 0, 1), LevelOutOfRange);
}

TEST(ArcPath, Examples) {
    TreeFamily two{small_tree(), small_tree()};
    ProductPoint x{{TreePoint{1, Rational(1)}, TreePoint{0, Rational(2)}}};
    auto same = arcwise_path(two, x, x);
    EXPECT_EQ(same.points.size(), 1u);
    EXPECT_EQ(same.diameter, Rational(0));
    ProductPoint y{{TreePoint{1, Rational(0)}, TreePoint{0, Rational(2)}}};
    auto p = arcwise_path(two, x, y);
    EXPECT_LE(p.diameter, Rational(16) * product_distance(two, x, y));
    EXPECT_EQ(p.points.front(), canonical(two, x));
    EXPECT_EQ(p.points.back(), canonical(two, y));
}

TEST(ArcPath, BoundOnTruncationPairs) {
    const auto& b = built();
    auto m = build_m_truncation(b.trees, Rational(1));
    std::mt19937_64 rng(4);
    std::size_t tried = 0;
    for (int i = 0; i < 400 && tried < 100; ++i) {
        const auto& x = m.points[rng() % m.points.size()];
        const auto& y = m.points[rng() % m.points.size()];
        try {
            auto p = arcwise_path(b.trees, x, y);
            ++tried;
            EXPECT_LE(p.diameter, Rational(16) * product_distance(b.trees, x, y));
            for (std::size_t q = 0; q + 1 < p.points.size(); ++q) {
                int moved = 0;
                for (std::size_t c = 0; c < b.trees.size(); ++c) moved += !(p.points[q].coords[c] == p.points[q + 1].coords[c]);
                EXPECT_EQ(moved, 1);
            }
        } catch (const NoMergingLevel&) {
        }
    }
    EXPECT_EQ(tried, 100u);
}

TEST(Separator, EndsOfTheTruncation) {
    const auto& b = built();
    auto m = build_m_truncation(b.trees, Rational(1));
    const std::size_t last = m.points.size() - 1;
    auto r = separator_candidate(b.trees, m, {0}, {last}, 1);
    EXPECT_TRUE(r.separates);
    EXPECT_FALSE(std::binary_search(r.S.begin(), r.S.end(), std::size_t{0}));
    EXPECT_FALSE(std::binary_search(r.S.begin(), r.S.end(), last));
    EXPECT_THROW(separator_candidate(b.trees, m, {}, {last}, 1), DegenerateSides);
}

TEST(Higson, CoversOfTruncation) {
    const auto& b = built();
    auto m = build_m_truncation(b.trees, Rational(1));
    auto ms = truncation_space(b.trees, m.points);
    std::vector<ColoredCover> covers;
    for (std::size_t k = 1; k <= top_level(b.trees); ++k) {
        covers.push_back(higson_cover(b.trees, m.points, k));
        EXPECT_TRUE(check_cover(ms, covers.back()).ok());
    }
    auto v = higson_check(ms, covers, Rational(1, 12));
    EXPECT_TRUE(v.pass);
    EXPECT_LE(v.worst_multiplicity, b.trees.size());
}
