#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "arnoldqc/potential.hpp"
#include "arnoldqc/roots.hpp"

using arnoldqc::Polynomial;
using arnoldqc::real_roots;

TEST(RealRoots, ButterflyDerivative)
{
    Polynomial d{0, 4608, 0, -384, 0, 6};
    const double tol = 1e-12;
    auto roots = real_roots(d, -10, 10, tol);
    std::vector<double> expect{-std::sqrt(48.0), -4, 0, 4, std::sqrt(48.0)};
    ASSERT_EQ(roots.size(), expect.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        EXPECT_NEAR(roots[i].x, expect[i], tol);
        EXPECT_FALSE(roots[i].near_multiple);
    }
}

TEST(RealRoots, NoRealRoots)
{
    EXPECT_TRUE(real_roots(Polynomial{1, 0, 1}, -10, 10, 1e-10).empty());
    EXPECT_TRUE(real_roots(Polynomial{3}, -10, 10, 1e-10).empty());
}

TEST(RealRoots, PerturbedStationaryPointNearAlpha)
{
    const double eps = 0.01;
    Polynomial d = arnoldqc::perturbed_n2_derivative(4.0, std::sqrt(32.0), eps);
    auto roots = real_roots(d, -10, 10, 1e-14);
    ASSERT_EQ(roots.size(), 5u);
    // Leading-order displacement eps / (4 beta^2) = eps / 128.
    EXPECT_NEAR(roots[3].x, 4.0 + eps / 128.0, 10 * eps * eps * 2.3e-5);
}

TEST(RealRoots, FlagsMultipleRoots)
{
    auto triple = real_roots(Polynomial{0, 0, 0, 4}, -1, 1, 1e-10);
    ASSERT_EQ(triple.size(), 1u);
    EXPECT_NEAR(triple[0].x, 0.0, 1e-10);
    EXPECT_TRUE(triple[0].near_multiple);

    // (x - 1)^2 (x + 2): even-multiplicity root without a sign change.
    Polynomial p = Polynomial{-1, 1} * Polynomial{-1, 1} * Polynomial{2, 1};
    auto roots = real_roots(p, -5, 5, 1e-9);
    ASSERT_EQ(roots.size(), 2u);
    EXPECT_NEAR(roots[0].x, -2.0, 1e-9);
    EXPECT_FALSE(roots[0].near_multiple);
    EXPECT_NEAR(roots[1].x, 1.0, 1e-8);
    EXPECT_TRUE(roots[1].near_multiple);
}

TEST(RealRoots, RootOnEndpointIsKept)
{
    auto roots = real_roots(Polynomial{-1, 0, 1}, 1.0, 3.0, 1e-12);
    ASSERT_EQ(roots.size(), 1u);
    EXPECT_NEAR(roots[0].x, 1.0, 1e-12);
}

TEST(RealRoots, RejectsBadArguments)
{
    EXPECT_THROW(real_roots(Polynomial{1, 1}, 1, 0, 1e-6), std::invalid_argument);
    EXPECT_THROW(real_roots(Polynomial{1, 1}, 0, 1, 0), std::invalid_argument);
    EXPECT_THROW(real_roots(Polynomial{0}, 0, 1, 1e-6), std::invalid_argument);
}

TEST(RealRoots, DepthLimitReported)
{
    // Two roots 1e-6 apart need ~24 halvings of [-10, 10] to separate.
    Polynomial p = Polynomial{-0.5, 1} * Polynomial{-0.500001, 1};
    EXPECT_THROW(real_roots(p, -10, 10, 1e-9, 5), arnoldqc::numeric_error);
    EXPECT_EQ(real_roots(p, -10, 10, 1e-9).size(), 2u);
}

TEST(SturmSequence, CountsDistinctRoots)
{
    arnoldqc::SturmSequence s(Polynomial{0, 4608, 0, -384, 0, 6});
    EXPECT_EQ(s.count(-10, 10), 5);
    EXPECT_EQ(s.count(0.5, 10), 2);
    EXPECT_EQ(s.count(-0.5, 0.5), 1);
}

// Planted roots from random products of linear factors and root-free quadratics.
TEST(RealRoots, RecoversPlantedRoots)
{
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> where(-5, 5);
    std::uniform_int_distribution<int> how_many(1, 7);
    std::uniform_int_distribution<int> quadratics(0, 2);
    const double tol = 1e-6;
    const double separation = 0.1; // well above 10 tol
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> planted;
        const int k = how_many(rng);
        while (static_cast<int>(planted.size()) < k) {
            double r = where(rng);
            bool ok = std::all_of(planted.begin(), planted.end(), [&](double q) { return std::fabs(q - r) >= separation; });
            if (ok)
                planted.push_back(r);
        }
        std::sort(planted.begin(), planted.end());
        Polynomial p{1.0};
        for (double r : planted)
            p = p * Polynomial{-r, 1.0};
        for (int q = quadratics(rng); q > 0; --q) {
            double c = where(rng);
            p = p * Polynomial{c * c + 0.5, -2 * c, 1.0}; // (x - c)^2 + 0.5
        }
        auto roots = real_roots(p, -6, 6, tol);
        ASSERT_EQ(roots.size(), planted.size()) << "trial " << trial;
        for (std::size_t i = 0; i < planted.size(); ++i)
            EXPECT_NEAR(roots[i].x, planted[i], tol) << "trial " << trial;
    }
}
