#include "l1l2/prox.hpp"
#include "l1l2/rng.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace l1l2;

namespace {

Vec<double> vec(std::initializer_list<double> v)
{
    Vec<double> out(Index(v.size()));
    Index i = 0;
    for (double x : v)
        out(i++) = x;
    return out;
}

}  // namespace

// Hand-derived values, one per branch of the closed form.
TEST(Prox, LargeInputShrinksThenRescales)
{
    auto r = prox_l1_al2(vec({3, 1, 0}), 1.0, 1.0);
    EXPECT_EQ(r.case_id, ProxCase::kCase1);
    EXPECT_TRUE(r.is_unique);
    EXPECT_NEAR((r.x - vec({3, 0, 0})).norm(), 0, 1e-15);

    // z = (0.5, -1, 0), x = z * (|z| + 0.5) / |z| with |z| = sqrt(1.25)
    r = prox_l1_al2(vec({1.5, -2, 0.5}), 1.0, 0.5);
    const double s = (std::sqrt(1.25) + 0.5) / std::sqrt(1.25);
    EXPECT_NEAR((r.x - vec({0.5 * s, -s, 0})).norm(), 0, 1e-14);
}

TEST(Prox, MaxEqualToLambdaGivesNormAlphaLambda)
{
    const auto r = prox_l1_al2(vec({1, 0.5}), 1.0, 0.6);
    EXPECT_EQ(r.case_id, ProxCase::kCase2);
    EXPECT_NEAR((r.x - vec({0.6, 0})).norm(), 0, 1e-15);
}

TEST(Prox, IntermediateInputIsOneSparse)
{
    const auto r = prox_l1_al2(vec({0.3, -0.8}), 1.0, 0.5);
    EXPECT_EQ(r.case_id, ProxCase::kCase3);
    EXPECT_NEAR((r.x - vec({0, -0.3})).norm(), 0, 1e-15);
}

TEST(Prox, SmallInputMapsToZero)
{
    const auto r = prox_l1_al2(vec({0.2, -0.1}), 1.0, 0.5);
    EXPECT_EQ(r.case_id, ProxCase::kCase4);
    EXPECT_EQ(r.x.norm(), 0);
}

TEST(Prox, AlphaZeroIsSoftShrinkage)
{
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        const Vec<double> y = 2 * rng.normal_vector<double>(6);
        const double lambda = 0.1 + rng.uniform01();
        const auto r = prox_l1_al2(y, lambda, 0.0);
        Vec<double> ref(y.size());
        for (Index i = 0; i < y.size(); ++i)
            ref(i) = std::copysign(std::max(std::abs(y(i)) - lambda, 0.0), y(i));
        EXPECT_LE((r.x - ref).norm(), 1e-14);
    }
}

TEST(Prox, TiesFollowTheRequestedIndex)
{
    const Vec<double> y = vec({0.3, -0.3, 0.1});
    const auto lo = prox_l1_al2(y, 1.0, 1.0, TieRule::kLowestIndex);
    const auto hi = prox_l1_al2(y, 1.0, 1.0, TieRule::kHighestIndex);
    EXPECT_FALSE(lo.is_unique);
    EXPECT_NEAR((lo.x - vec({0.3, 0, 0})).norm(), 0, 1e-15);
    EXPECT_NEAR((hi.x - vec({0, -0.3, 0})).norm(), 0, 1e-15);

    const auto all = prox_candidates(y, 1.0, 1.0);
    ASSERT_EQ(all.size(), 2u);
    EXPECT_NEAR(oracle::moreau_objective(all[0], y, 1, 1), oracle::moreau_objective(all[1], y, 1, 1), 1e-15);
}

TEST(Prox, NearTiesWithinToleranceCountAsTies)
{
    const Vec<double> y = vec({0.5, 0.5 * (1 - 1e-14)});
    EXPECT_FALSE(prox_l1_al2(y, 1.0, 1.0).is_unique);
}

TEST(Prox, InvalidArgumentsThrow)
{
    EXPECT_THROW(prox_l1_al2(vec({1}), 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(prox_l1_al2(vec({1}), 1.0, -0.1), std::invalid_argument);
}

TEST(Prox, NoWorseThanGridMinimum)
{
    Rng rng(11);
    for (int t = 0; t < 25; ++t) {
        Vec<double> y(3);
        for (Index i = 0; i < 3; ++i)
            y(i) = 4 * rng.uniform01() - 2;
        const double lambda = 2 * (1 - rng.uniform01());
        const double alpha = 1.5 * rng.uniform01();
        const auto r = prox_l1_al2(y, lambda, alpha);
        EXPECT_LE(oracle::moreau_objective(r.x, y, lambda, alpha), oracle::grid_min_3d(y, lambda, alpha, 81) + 1e-6)
            << "y=" << y.transpose() << " lambda=" << lambda << " alpha=" << alpha;
    }
}

TEST(Prox, DescentInequalityOnSamples)
{
    Rng rng(12);
    for (int t = 0; t < 40; ++t) {
        const Index n = 1 + rng.uniform_index(0, 5);
        const Vec<double> y = 1.5 * rng.normal_vector<double>(n);
        const double lambda = 0.05 + 2 * rng.uniform01();
        const double alpha = 1.5 * rng.uniform01();
        const Vec<double> xs = prox_l1_al2(y, lambda, alpha).x;
        const double norm = xs.norm();
        const double coef =
            norm == 0 ? (alpha == 0 ? -1 / (2 * lambda) : 0.0) : std::min(alpha / (2 * norm) - 1 / (2 * lambda), 0.0);
        EXPECT_DOUBLE_EQ(prox_descent_coefficient(norm, lambda, alpha), coef);
        const double fs = oracle::moreau_objective(xs, y, lambda, alpha);
        for (int j = 0; j < 50; ++j) {
            const Vec<double> x = xs + rng.normal_vector<double>(n) * (j % 2 ? 0.01 : 1.0);
            EXPECT_LE(fs - oracle::moreau_objective(x, y, lambda, alpha), coef * (xs - x).squaredNorm() + 1e-10);
        }
    }
}

TEST(Prox, EmptyInput)
{
    const auto r = prox_l1_al2(Vec<double>(0), 1.0, 1.0);
    EXPECT_EQ(r.x.size(), 0);
}

TEST(Prox, FloatScalar)
{
    Eigen::VectorXf y(3);
    y << 3.0f, 1.0f, 0.0f;
    const auto r = prox_l1_al2(y, 1.0f, 1.0f);
    EXPECT_FLOAT_EQ(r.x(0), 3.0f);
}
