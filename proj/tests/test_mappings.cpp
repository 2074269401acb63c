#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pclab/errors.hpp"
#include "pclab/mapping.hpp"
#include "pclab/rng.hpp"
#include "test_support.hpp"

using namespace pclab;
using pclab::testing::Gen;
using pclab::testing::interval_pair;
using pclab::testing::two_ball_pair;

TEST(Evaluate, AffineOnTheLine) {
    const auto T = Mapping::affine(Matrix(1, {0.5}), {1.0});
    EXPECT_EQ(T.evaluate({4.0}), (Point{3.0}));
}

TEST(Evaluate, IdentityReturnsInput) {
    Gen g(3);
    const auto T = Mapping::identity(4);
    const Point x = g.point(4);
    EXPECT_EQ(T.evaluate(x), x);
}

TEST(Evaluate, IntervalCyclicPair) {
    // -(2 + 1)/2 = -1.5, inside B = [-2, -1].
    const auto T = Mapping::cyclic(interval_pair());
    const Point y = T.evaluate({2.0});
    EXPECT_EQ(y, (Point{-1.5}));
    EXPECT_TRUE(T.cyclic_pair()->B().contains(y));
}

TEST(Evaluate, QuarterTurn) {
    const auto R = Mapping::scaled_rotation(2, std::numbers::pi / 2, 1.0);
    const Point y = R.evaluate({1.0, 0.0});
    EXPECT_NEAR(y[0], 0.0, 1e-16);
    EXPECT_NEAR(y[1], 1.0, 1e-16);
    // Odd trailing coordinate only scaled.
    const Point z = Mapping::scaled_rotation(3, std::numbers::pi / 2, 2.0).evaluate({1.0, 0.0, 3.0});
    EXPECT_NEAR(z[1], 2.0, 1e-15);
    EXPECT_EQ(z[2], 6.0);
}

TEST(Evaluate, ProjectedAffineLandsInTarget) {
    const auto target = ConvexSet::box({0.0, 0.0}, {1.0, 1.0});
    const auto T = Mapping::projected_affine(target, Matrix::scaled_identity(2, 3.0), {0.0, -5.0});
    EXPECT_EQ(T.evaluate({1.0, 1.0}), (Point{1.0, 0.0}));
}

TEST(Evaluate, Errors) {
    const auto T = Mapping::cyclic(interval_pair());
    EXPECT_THROW(T.evaluate({0.0}), DomainError);
    EXPECT_THROW(T.evaluate({1.0, 1.0}), DimensionError);
    EXPECT_THROW(Mapping::affine(Matrix(2, {1, 0, 0, 1}), {1.0}), DimensionError);
    EXPECT_THROW(Matrix(2, {1, 0, 0}), DimensionError);
    EXPECT_THROW(Mapping::scaled_rotation(1, 0.1, 1.0), DimensionError);
}

TEST(Evaluate, ReferentiallyTransparent) {
    Gen g(8);
    for (int i = 0; i < 200; ++i) {
        const std::size_t dim = 2 + g.index(4);
        const auto T = g.mapping(dim);
        const Point x = g.point(dim);
        const Point first = T.evaluate(x);
        ASSERT_EQ(first, T.evaluate(x));
        ASSERT_EQ(first, Mapping(T).evaluate(x));
    }
}

TEST(Orbit, Examples) {
    const auto T = Mapping::affine(Matrix(1, {0.5}), {1.0});
    EXPECT_EQ(orbit(T, {0.0}, 2), (std::vector<Point>{{0.0}, {1.0}, {1.5}}));

    const Point x0{3.0, -1.0};
    EXPECT_EQ(orbit(Mapping::identity(2), x0, 5), std::vector<Point>(6, x0));

    // Hand iteration: 2 -> -1.5 -> 1.25 -> -1.125.
    EXPECT_EQ(orbit(Mapping::cyclic(interval_pair()), {2.0}, 3),
              (std::vector<Point>{{2.0}, {-1.5}, {1.25}, {-1.125}}));
}

TEST(Orbit, PropagatesDomainErrors) {
    EXPECT_THROW(orbit(Mapping::cyclic(interval_pair()), {5.0}, 3), DomainError);
}

TEST(MakeTwoCyclic, IntervalFixture) {
    const auto pair = interval_pair();
    const Point y = pair.apply({1.0});
    EXPECT_EQ(y, (Point{-1.0}));
    EXPECT_TRUE(pair.B().contains(y));
    EXPECT_TRUE(verify_cyclicity(pair, 1000, 1));
}

TEST(MakeTwoCyclic, ConstantForwardMap) {
    const auto A = ConvexSet::ball({0.0, 0.0}, 1.0);
    const auto B = ConvexSet::box({3.0, 3.0}, {4.0, 4.0});
    const auto pair = make_two_cyclic(A, B, Mapping::affine(Matrix::scaled_identity(2, 0.0), {3.5, 3.5}),
                                      Mapping::affine(Matrix::scaled_identity(2, 0.0), {0.0, 0.0}));
    EXPECT_EQ(pair.apply({0.5, 0.5}), (Point{3.5, 3.5}));
    EXPECT_TRUE(verify_cyclicity(pair, 200, 2));
}

TEST(MakeTwoCyclic, BallsSampledMembershipOracle) {
    const auto pair = two_ball_pair();
    // Independent membership check over 10^3 seeded members of each ball.
    for (std::size_t i = 0; i < 1000; ++i) {
        CounterRng ra(2024, 2 * i), rb(2024, 2 * i + 1);
        const Point a = sample_member(pair.A(), ra);
        const Point b = sample_member(pair.B(), rb);
        ASSERT_LE(std::hypot(pair.apply(a)[0] - 4.0, pair.apply(a)[1]), 1.0 + 1e-10);
        ASSERT_LE(std::hypot(pair.apply(b)[0], pair.apply(b)[1]), 1.0 + 1e-10);
    }
    EXPECT_TRUE(verify_cyclicity(pair, 1000, 2024));
}

TEST(MakeTwoCyclic, CoincidentSetsNeedATiebreak) {
    const auto S = ConvexSet::box({0.0}, {1.0});
    const auto half = Mapping::affine(Matrix(1, {0.5}), {0.0});
    EXPECT_THROW(make_two_cyclic(S, S, half, half), InvalidInputError);
    EXPECT_NO_THROW(make_two_cyclic(S, S, half, half, Tiebreak::prefer_B));
}

TEST(MakeTwoCyclic, TiebreakRoutesOverlap) {
    // A = [0, 2], B = [1, 3]; 1.5 lies in both.
    const auto A = ConvexSet::box({0.0}, {2.0});
    const auto B = ConvexSet::box({1.0}, {3.0});
    const auto fwd = Mapping::affine(Matrix(1, {1.0}), {10.0});
    const auto bwd = Mapping::affine(Matrix(1, {1.0}), {-10.0});
    EXPECT_EQ(make_two_cyclic(A, B, fwd, bwd, Tiebreak::prefer_A).apply({1.5}), (Point{3.0}));
    EXPECT_EQ(make_two_cyclic(A, B, fwd, bwd, Tiebreak::prefer_B).apply({1.5}), (Point{0.0}));
    EXPECT_EQ(make_two_cyclic(A, B, fwd, bwd).side_of({1.5}), Side::A);
}

// Exhaustive 1e-3 grid over A = [1, 2] and B = [-2, -1], checked directly
// against the formulas (no projection involved).
TEST(VerifyCyclicity, IntervalGridOracle) {
    for (int k = 0; k <= 1000; ++k) {
        const double a = 1.0 + k * 1e-3;
        const double b = -2.0 + k * 1e-3;
        ASSERT_GE(-(a + 1.0) / 2.0, -2.0);
        ASSERT_LE(-(a + 1.0) / 2.0, -1.0);
        ASSERT_GE(-(b - 1.0) / 2.0, 1.0);
        ASSERT_LE(-(b - 1.0) / 2.0, 2.0);
    }
    EXPECT_TRUE(verify_cyclicity(interval_pair(), 1000, 77));
}

TEST(VerifyCyclicity, DetectsViolations) {
    // Forward keeps A-points in A.
    const auto bad = CyclicPair::unprojected(ConvexSet::box({1.0}, {2.0}), ConvexSet::box({-2.0}, {-1.0}),
                                             Mapping::identity(1), Mapping::affine(Matrix(1, {-0.5}), {0.5}),
                                             std::nullopt);
    EXPECT_FALSE(verify_cyclicity(bad, 1000, 1));
}

TEST(VerifyCyclicity, EmptyBudgetIsVacuouslyTrue) {
    const auto bad = CyclicPair::unprojected(ConvexSet::box({1.0}, {2.0}), ConvexSet::box({-2.0}, {-1.0}),
                                             Mapping::identity(1), Mapping::identity(1), std::nullopt);
    EXPECT_TRUE(verify_cyclicity(bad, 0, 1));
}

TEST(VerifyCyclicity, DeterministicGivenSeed) {
    const auto bad = CyclicPair::unprojected(ConvexSet::ball({0.0, 0.0}, 1.0), ConvexSet::ball({1.5, 0.0}, 1.0),
                                             Mapping::affine(Matrix::scaled_identity(2, 1.0), {1.0, 0.0}),
                                             Mapping::affine(Matrix::scaled_identity(2, 1.0), {-1.0, 0.0}),
                                             Tiebreak::prefer_A);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EXPECT_EQ(verify_cyclicity(bad, 50, seed), verify_cyclicity(bad, 50, seed));
    }
}

// Even iterates of an A-start stay in A, odd ones in B.
TEST(CyclicProperties, OrbitParityAlternates) {
    const std::vector<CyclicPair> pairs = {
        interval_pair(),
        two_ball_pair(),
        make_two_cyclic(ConvexSet::box({0.0, 0.0}, {1.0, 1.0}),
                        ConvexSet::halfspaces({{{-1.0, 0.0}, -3.0}}, {4.0, 0.0}),
                        Mapping::scaled_rotation(2, 0.3, 1.2), Mapping::affine(Matrix::scaled_identity(2, -0.7), {0.2, 0.1})),
    };
    for (const auto& pair : pairs) {
        const auto T = Mapping::cyclic(pair);
        for (std::size_t s = 0; s < 20; ++s) {
            CounterRng rng(5, s);
            const auto pts = orbit(T, sample_member(pair.A(), rng), 60);
            for (std::size_t k = 0; k < pts.size(); ++k) {
                ASSERT_TRUE((k % 2 == 0 ? pair.A() : pair.B()).contains(pts[k], 1e-10)) << "k = " << k;
            }
        }
    }
}
