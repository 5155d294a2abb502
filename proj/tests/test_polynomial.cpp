#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "arnoldqc/polynomial.hpp"

using arnoldqc::Polynomial;

namespace {

Polynomial butterfly() { return Polynomial{0, 0, 2304, 0, -96, 0, 1}; }

Polynomial random_poly(std::mt19937& rng, int degree)
{
    std::uniform_real_distribution<double> u(-5, 5);
    std::vector<double> c(degree + 1);
    for (auto& v : c)
        v = u(rng);
    return Polynomial(c);
}

} // namespace

TEST(Polynomial, NormalizesTrailingZeros)
{
    Polynomial p{1, 2, 0, 0};
    EXPECT_EQ(p.degree(), 1u);
    Polynomial z{0, 0, 0};
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.coeffs(), std::vector<double>{0.0});
    EXPECT_TRUE(Polynomial(std::vector<double>{}).is_zero());
}

TEST(Polynomial, RejectsNonFinite)
{
    EXPECT_THROW(Polynomial({1.0, std::numeric_limits<double>::infinity()}), std::invalid_argument);
    EXPECT_THROW(Polynomial({std::nan("")}), std::invalid_argument);
}

TEST(Polynomial, Evaluate)
{
    EXPECT_EQ(arnoldqc::evaluate(Polynomial{0}, 5.0), 0.0);
    EXPECT_EQ(butterfly()(0.0), 0.0);
    // Outer minimum of the alpha = 4, beta^2 = 32 shape sits at zero height.
    EXPECT_NEAR(butterfly()(std::sqrt(48.0)), 0.0, 1e-9);
    EXPECT_DOUBLE_EQ((Polynomial{1, -3, 2})(2.0), 1.0 - 6.0 + 8.0);
}

TEST(Polynomial, FromDescending)
{
    EXPECT_EQ(Polynomial::from_descending({1, 0, -96, 0, 2304}), (Polynomial{2304, 0, -96, 0, 1}));
}

TEST(Polynomial, Derivative)
{
    EXPECT_TRUE(arnoldqc::derivative(Polynomial{0}).is_zero());
    EXPECT_EQ(arnoldqc::derivative(butterfly()), (Polynomial{0, 4608, 0, -384, 0, 6}));
    EXPECT_EQ(arnoldqc::derivative(Polynomial{0, 0, -24, 0, 22, 0, -8, 0, 1}),
              (Polynomial{0, -48, 0, 88, 0, -48, 0, 8}));
}

TEST(Polynomial, Antiderivative)
{
    EXPECT_TRUE(arnoldqc::antiderivative(Polynomial{0}).is_zero());
    // 6x(x^2 - 16)(x^2 - 48) expanded.
    EXPECT_EQ(arnoldqc::antiderivative(Polynomial{0, 4608, 0, -384, 0, 6}), butterfly());
    Polynomial d{0, -48, 0, 88, 0, -48, 0, 8};
    EXPECT_EQ(arnoldqc::derivative(arnoldqc::antiderivative(d)), d);
    EXPECT_EQ(arnoldqc::antiderivative(d)(0.0), 0.0);
}

TEST(Polynomial, DerivativeOfAntiderivativeIsIdentity)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Polynomial p = random_poly(rng, 1 + trial % 12);
        Polynomial q = arnoldqc::derivative(arnoldqc::antiderivative(p));
        ASSERT_EQ(q.degree(), p.degree());
        for (std::size_t k = 0; k <= p.degree(); ++k)
            EXPECT_NEAR(q[k], p[k], 1e-12 * std::fabs(p[k]));
    }
}

TEST(Polynomial, EvenOddSplit)
{
    auto [e, o] = arnoldqc::even_odd_split(Polynomial{0, 0, 0, 1, 0, 0, 1});
    EXPECT_EQ(e, Polynomial::monomial(6));
    EXPECT_EQ(o, Polynomial::monomial(3));

    auto [e2, o2] = arnoldqc::even_odd_split(butterfly());
    EXPECT_EQ(e2, butterfly());
    EXPECT_TRUE(o2.is_zero());
}

TEST(Polynomial, EvenOddSplitProperty)
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Polynomial p = random_poly(rng, trial % 10);
        auto [e, o] = arnoldqc::even_odd_split(p);
        EXPECT_EQ(e + o, p);
        for (double x = -2.0; x <= 2.0; x += 0.25) {
            EXPECT_DOUBLE_EQ(e(x), e(-x));
            EXPECT_DOUBLE_EQ(o(-x), -o(x));
        }
    }
}

// Confining N = 3 potential with q = 0: the odd part is b x (x^{2M+2} + a' x^{2M})
// with M = N - 2 and a' = d / b.
TEST(Polynomial, OddPartFactorsThroughLowerShape)
{
    const double a = -5, b = 0.3, c = 2, d = -0.7, f = 1.5;
    Polynomial v{0, 0, f, d, c, b, a, 0, 1};
    auto [even, odd] = arnoldqc::even_odd_split(v);
    auto [q, r] = arnoldqc::divide(odd, Polynomial{0, b});
    EXPECT_TRUE(r.is_zero());
    EXPECT_EQ(q.degree(), 4u); // 2M + 2 with M = 1
    EXPECT_DOUBLE_EQ(q[4], 1.0);
    EXPECT_DOUBLE_EQ(q[2], d / b);
    EXPECT_EQ(even, (Polynomial{0, 0, f, 0, c, 0, a, 0, 1}));
}

TEST(Polynomial, Divide)
{
    // (x^2 - 1) / (x - 1) = x + 1
    auto [q, r] = arnoldqc::divide(Polynomial{-1, 0, 1}, Polynomial{-1, 1});
    EXPECT_EQ(q, (Polynomial{1, 1}));
    EXPECT_TRUE(r.is_zero());
    EXPECT_THROW(arnoldqc::divide(Polynomial{1}, Polynomial{0}), std::invalid_argument);
}

TEST(Polynomial, Product)
{
    EXPECT_EQ(Polynomial({-1, 1}) * Polynomial({1, 1}), (Polynomial{-1, 0, 1}));
    EXPECT_TRUE((Polynomial{1, 2} * Polynomial{0}).is_zero());
}
