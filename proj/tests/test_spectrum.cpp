#include <cmath>

#include <gtest/gtest.h>

#include "arnoldqc/catastrophe.hpp"
#include "arnoldqc/spectrum.hpp"

using namespace arnoldqc;

namespace {

const Polynomial unit_oscillator{0.0, 0.0, 1.0};

double ground_energy(const Polynomial& p, double half_width, double step, double lambda = 1.0)
{
    return solve_numerical(p, SolverConfig::with_step(half_width, step, 1, lambda)).front().energy;
}

} // namespace

TEST(HarmonicLevels, Central)
{
    auto p = build_symmetric(WellShape::from_increments({16, 32}));
    auto e = central_levels(p, 2);
    ASSERT_EQ(e.size(), 3u);
    EXPECT_NEAR(e[0], 48, 1e-9);
    EXPECT_NEAR(e[1], 144, 1e-9);
    EXPECT_NEAR(e[2], 240, 1e-9);
    EXPECT_DOUBLE_EQ(central_levels(unit_oscillator, 0).front(), 1.0);
    auto twice = central_levels(unit_oscillator, 1, 2.0);
    EXPECT_DOUBLE_EQ(twice[1] - twice[0], 4.0);
    EXPECT_THROW(central_levels(Polynomial{0, 0, -1, 0, 1}, 1), std::domain_error);
}

TEST(HarmonicLevels, OffCentral)
{
    auto e = off_central_levels(HarmonicWell{1.0, -5.0, 4.0}, 1);
    EXPECT_EQ(e, (std::vector<double>{-3.0, 1.0}));
    EXPECT_THROW(off_central_levels(HarmonicWell{0, 0, 0}, 1), std::invalid_argument);

    auto h = harmonic_spectrum_n2(4, std::sqrt(32.0), 1, 1);
    EXPECT_NEAR(h.spring_central, 48, 1e-12);
    EXPECT_NEAR(h.spring_off_central, 96, 1e-12);
    EXPECT_NEAR(h.off_central_doublets[0], 96, 1e-9);
    EXPECT_NEAR(h.off_central_doublets[1], 288, 1e-9);

    // Closed-form ground doublet against the well model of the built polynomial.
    for (auto [a, b] : {std::pair{3.0, 4.5}, {4.0, 6.0}, {2.0, 3.5}}) {
        auto wells = harmonic_wells(build_symmetric(WellShape({a * a, a * a + b * b})));
        auto outer = off_central_levels(wells.back(), 0).front();
        auto closed = harmonic_spectrum_n2(a, b, 0, 0).off_central_doublets.front();
        EXPECT_NEAR(outer, closed, 1e-9 * std::fabs(closed));
    }
}

TEST(ChooseDomain, Examples)
{
    EXPECT_DOUBLE_EQ(choose_domain(unit_oscillator, 10.0), 5.0);
    EXPECT_DOUBLE_EQ(choose_domain(Polynomial::monomial(6), 2.0), 2.5);
    const double L = choose_domain(build_symmetric(WellShape({16, 48})), 300.0);
    EXPECT_GE(L, 9.0);
    EXPECT_LE(L, 9.5);
    EXPECT_THROW(choose_domain(Polynomial{0, 0, -1}, 1.0), std::invalid_argument);
    EXPECT_THROW(choose_domain(Polynomial::monomial(3), 1.0), std::invalid_argument);
}

TEST(SolverConfig, Validation)
{
    auto cfg = SolverConfig::with_step(12.0, 0.01, 2);
    EXPECT_EQ(cfg.grid_points, 2401u);
    EXPECT_DOUBLE_EQ(cfg.step(), 0.01);
    EXPECT_THROW((SolverConfig{1.0, 10.0, 200, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((SolverConfig{1.0, 10.0, 101, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((SolverConfig{0.0, 10.0, 401, 1}.validate()), std::invalid_argument);
    EXPECT_THROW(solve_numerical(unit_oscillator, SolverConfig{1.0, 10.0, 201, 199}), std::invalid_argument);
}

TEST(SolveNumerical, UnitOscillator)
{
    auto pairs = solve_numerical(unit_oscillator, SolverConfig::with_step(12.0, 0.01, 4));
    ASSERT_EQ(pairs.size(), 4u);
    EXPECT_NEAR(pairs[0].energy, 1.0, 2e-4);
    EXPECT_NEAR(pairs[1].energy, 3.0, 5e-4);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        EXPECT_EQ(node_count(pairs[k]), static_cast<int>(k));
        EXPECT_EQ(pairs[k].parity, k % 2 == 0 ? 1 : -1);
        if (k > 0)
            EXPECT_LT(pairs[k - 1].energy, pairs[k].energy);
    }
}

TEST(SolveNumerical, LambdaScalesSpacing)
{
    auto pairs = solve_numerical(unit_oscillator, SolverConfig::with_step(12.0, 0.01, 2, 2.0));
    EXPECT_NEAR(pairs[0].energy, 2.0, 1e-3);
    EXPECT_NEAR(pairs[1].energy - pairs[0].energy, 4.0, 2e-3);
}

TEST(SolveNumerical, SecondOrderConvergence)
{
    const double e1 = ground_energy(unit_oscillator, 12.0, 0.04);
    const double e2 = ground_energy(unit_oscillator, 12.0, 0.02);
    const double e3 = ground_energy(unit_oscillator, 12.0, 0.01);
    EXPECT_NEAR((e1 - e2) / (e2 - e3), 4.0, 0.2);
}

// x^2 + x = (x + 1/2)^2 - 1/4 exercises the full (non-parity) matrix.
TEST(SolveNumerical, ShiftedOscillatorWithoutParity)
{
    auto pairs = solve_numerical(Polynomial{0.0, 1.0, 1.0}, SolverConfig::with_step(12.0, 0.01, 3));
    EXPECT_EQ(pairs[0].parity, 0);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(pairs[k].energy, 2.0 * k + 1.0 - 0.25, 1e-3);
        EXPECT_EQ(node_count(pairs[k]), static_cast<int>(k));
    }
}

TEST(SolveNumerical, NormalizationAndParity)
{
    const Polynomial p = symmetric_n2(4.0, 0.0026);
    auto pairs = solve_numerical(p, SolverConfig::with_step(9.0, 0.005, 6));
    for (const auto& pr : pairs) {
        double s = 0.0;
        for (double v : pr.psi)
            s += v * v * pr.grid.step();
        EXPECT_NEAR(s, 1.0, 1e-10);
        const std::size_t n = pr.psi.size();
        for (std::size_t i = 0; i < n; ++i)
            ASSERT_NEAR(std::fabs(pr.psi[i]), std::fabs(pr.psi[n - 1 - i]), 1e-6);
    }
}

TEST(SolveNumerical, ButterflyGroundNearHarmonicEstimate)
{
    const Polynomial p = build_symmetric(WellShape({16, 48}));
    auto pairs = solve_numerical(p, SolverConfig::with_step(choose_domain(p, 300.0), 0.005, 1));
    EXPECT_NEAR(pairs[0].energy, 48.0, 4.8);
}

TEST(SolveNumerical, EvenAndFullSolversAgree)
{
    // Break parity by a negligible odd term so the full matrix path is used.
    const Polynomial even{0.0, 0.0, -2.0, 0.0, 1.0};
    Polynomial odd = even;
    odd += Polynomial::monomial(1, 1e-14);
    const auto cfg = SolverConfig::with_step(5.0, 0.01, 4);
    auto a = solve_numerical(even, cfg);
    auto b = solve_numerical(odd, cfg);
    for (std::size_t k = 0; k < 4; ++k)
        EXPECT_NEAR(a[k].energy, b[k].energy, 1e-9);
}

TEST(WellWeights, SingleWell)
{
    const Polynomial p{0.0, 0.0, 1.0, 0.0, 1.0};
    auto pairs = solve_numerical(p, SolverConfig::with_step(6.0, 0.01, 1));
    auto w = well_weights(pairs.front(), p);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_NEAR(w[0].weight, 1.0, 1e-9);
    EXPECT_TRUE(w[0].central);
}

TEST(WellWeights, RelocalizationAcrossCrossing)
{
    const auto cfg = SolverConfig::with_step(9.0, 0.005, 4);
    const Polynomial below = symmetric_n2(4.0, 0.0026 - 0.01);
    auto wb = well_weights(solve_numerical(below, cfg).front(), below);
    ASSERT_EQ(wb.size(), 3u);
    double total = 0.0;
    for (const auto& r : wb)
        total += r.weight;
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_TRUE(wb[1].central);
    EXPECT_GT(wb[1].weight, 0.9);

    const Polynomial above = symmetric_n2(4.0, 0.0026 + 0.01);
    auto wa = well_weights(solve_numerical(above, cfg).front(), above);
    EXPECT_GT(wa[0].weight + wa[2].weight, 0.9);
    EXPECT_NEAR(wa[0].weight, wa[2].weight, 1e-6);
}

TEST(ClassifyLevels, BottomOrderingOnEitherSide)
{
    const auto cfg = SolverConfig::with_step(9.0, 0.005, 4);
    const Polynomial below = symmetric_n2(4.0, 0.0026 - 0.01);
    auto lb = classify_levels(solve_numerical(below, cfg), below);
    EXPECT_EQ(lb[0].label(), "central-0");

    const Polynomial above = symmetric_n2(4.0, 0.0026 + 0.01);
    auto la = classify_levels(solve_numerical(above, cfg), above);
    EXPECT_EQ(la[0].label(), "offcentral-0");
    EXPECT_EQ(la[1].label(), "offcentral-0");
    EXPECT_EQ(la[2].label(), "central-0");
    EXPECT_NE(la[3].label(), "offcentral-0");
}

TEST(ClassifyLevels, DoubleWellDoublets)
{
    const Polynomial p{0.0, 0.0, -16.0, 0.0, 1.0};
    auto pairs = solve_numerical(p, SolverConfig::with_step(choose_domain(p, 0.0), 0.005, 4));
    auto labels = classify_levels(pairs, p);
    EXPECT_EQ(labels[0].label(), "offcentral-0");
    EXPECT_EQ(labels[1].label(), "offcentral-0");
    EXPECT_EQ(labels[2].label(), "offcentral-1");
    EXPECT_EQ(labels[3].label(), "offcentral-1");
    EXPECT_EQ(pairs[0].parity, 1);
    EXPECT_EQ(pairs[1].parity, -1);
}

// Tunnelling suppression: a higher barrier splits the ground doublet less.
TEST(SolveNumerical, DoubletSplittingFallsWithBarrier)
{
    double last = INFINITY;
    for (double a : {4.0, 5.0, 6.0, 7.0}) {
        const Polynomial p{0.0, 0.0, -a, 0.0, 1.0};
        auto pairs = solve_numerical(p, SolverConfig::with_step(choose_domain(p, 20.0), 0.005, 2));
        const double split = pairs[1].energy - pairs[0].energy;
        EXPECT_GT(split, 0.0);
        EXPECT_LT(split, last);
        last = split;
    }
}

TEST(SolveNumerical, HarmonicGapShrinksWithScale)
{
    const WellShape base = WellShape::from_increments({16, 32});
    double last = INFINITY;
    for (double lam : {0.75, 1.0, 1.25}) {
        const Polynomial p = build_symmetric(base.scaled(lam));
        const double harmonic = central_levels(p, 0).front();
        const double numeric = ground_energy(p, choose_domain(p, 2 * harmonic), 0.005);
        const double gap = std::fabs(numeric - harmonic) / harmonic;
        EXPECT_LT(gap, last) << lam;
        last = gap;
    }
}
