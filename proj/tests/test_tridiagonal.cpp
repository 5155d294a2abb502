#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "arnoldqc/tridiagonal.hpp"

using namespace arnoldqc;

namespace {

Eigen::MatrixXd dense(const SymmetricTridiagonal& t)
{
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = t.diag()[i];
        if (i + 1 < n)
            m(i, i + 1) = m(i + 1, i) = t.off()[i];
    }
    return m;
}

SymmetricTridiagonal random_matrix(std::mt19937& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> d(n), e(n - 1);
    for (auto& v : d)
        v = 4.0 * u(rng);
    for (auto& v : e)
        v = u(rng);
    return {d, e};
}

} // namespace

TEST(SymmetricTridiagonal, RejectsBadShapes)
{
    EXPECT_THROW(SymmetricTridiagonal({}, {}), std::invalid_argument);
    EXPECT_THROW(SymmetricTridiagonal({1, 2}, {}), std::invalid_argument);
    EXPECT_NO_THROW(SymmetricTridiagonal({1}, {}));
}

TEST(SymmetricTridiagonal, EigenvaluesMatchDenseSolver)
{
    std::mt19937 rng(11);
    for (std::size_t n : {1u, 2u, 5u, 40u, 150u}) {
        auto t = random_matrix(rng, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(t));
        for (std::size_t k = 0; k < n; ++k)
            EXPECT_NEAR(t.eigenvalue(k), es.eigenvalues()[static_cast<Eigen::Index>(k)], 1e-12) << n << " " << k;
    }
}

TEST(SymmetricTridiagonal, CountBelow)
{
    SymmetricTridiagonal t({2, 2, 2}, {-1, -1});
    // Eigenvalues 2 - sqrt2, 2, 2 + sqrt2.
    EXPECT_EQ(t.count_below(0.0), 0u);
    EXPECT_EQ(t.count_below(1.0), 1u);
    EXPECT_EQ(t.count_below(2.5), 2u);
    EXPECT_EQ(t.count_below(4.0), 3u);
}

TEST(LowestEigenpairs, VectorsSatisfyEigenEquation)
{
    std::mt19937 rng(5);
    auto t = random_matrix(rng, 200);
    auto r = lowest_eigenpairs(t, 8);
    ASSERT_EQ(r.values.size(), 8u);
    for (std::size_t k = 0; k < 8; ++k) {
        const auto& v = r.vectors[k];
        auto av = t.multiply(v);
        double res = 0.0, nrm = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            res = std::max(res, std::fabs(av[i] - r.values[k] * v[i]));
            nrm += v[i] * v[i];
        }
        EXPECT_LT(res, 1e-10);
        EXPECT_NEAR(nrm, 1.0, 1e-12);
        EXPECT_GT(*std::max_element(v.begin(), v.end(), [](double a, double b) { return std::fabs(a) < std::fabs(b); }), 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            double d = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i)
                d += v[i] * r.vectors[j][i];
            EXPECT_NEAR(d, 0.0, 1e-9);
        }
    }
}

// Two uncoupled identical blocks: every eigenvalue is exactly double.
TEST(LowestEigenpairs, OrthogonalWithinExactDegeneracy)
{
    std::vector<double> d, e;
    for (int block = 0; block < 2; ++block) {
        for (int i = 0; i < 30; ++i)
            d.push_back(2.0 + 0.1 * i);
        for (int i = 0; i < 29; ++i)
            e.push_back(-1.0);
        if (block == 0)
            e.push_back(0.0);
    }
    SymmetricTridiagonal t(d, e);
    auto r = lowest_eigenpairs(t, 4);
    EXPECT_NEAR(r.values[0], r.values[1], 1e-12);
    double overlap = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        overlap += r.vectors[0][i] * r.vectors[1][i];
    EXPECT_NEAR(overlap, 0.0, 1e-8);
}

TEST(LowestEigenpairs, TooManyLevels)
{
    SymmetricTridiagonal t({1, 2}, {0.5});
    EXPECT_THROW(lowest_eigenpairs(t, 3), std::invalid_argument);
}
