#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "arnoldqc/error.hpp"
#include "arnoldqc/polynomial.hpp"
#include "arnoldqc/potential.hpp"
#include "arnoldqc/spectrum.hpp"

namespace arnoldqc {

// --- N = 2 parameterization beta^2 = (2 + delta) alpha^2 -------------------

inline double beta_from_delta(double alpha, double delta) { return alpha * std::sqrt(2.0 + delta); }

/// x^6 + a x^4 + c x^2 at beta^2 = (2 + delta) alpha^2.
inline Polynomial symmetric_n2(double alpha, double delta)
{
    if (!(2.0 + delta > 0))
        throw std::invalid_argument("symmetric_n2: need 2 + delta > 0");
    auto [a, c] = closed_form_n2(alpha, beta_from_delta(alpha, delta));
    return Polynomial{0.0, 0.0, c, 0.0, a, 0.0, 1.0};
}

/// Omega / sqrt(c): off-central over central spring constant.
inline double spring_ratio(double alpha, double delta)
{
    auto h = harmonic_spectrum_n2(alpha, beta_from_delta(alpha, delta), 0, 0);
    return h.spring_off_central / h.spring_central;
}

/// [V(sqrt(alpha^2 + beta^2)) + (2m+1) Lambda Omega] - (2n+1) Lambda sqrt(c).
inline double harmonic_alc_residual(int m, int n, double alpha, double delta, double lambda = 1.0)
{
    auto h = harmonic_spectrum_n2(alpha, beta_from_delta(alpha, delta), n, m, lambda);
    return h.off_central_doublets[m] - h.central_levels[n];
}

// --- avoided level crossings ------------------------------------------------

enum class AlcBackend { harmonic, numerical };

inline const char* to_string(AlcBackend b) { return b == AlcBackend::harmonic ? "harmonic" : "numerical"; }

struct AlcQuery
{
    int m = 0;
    int n = 0;
    double alpha = 4.0;
    double lo = -0.05;
    double hi = 0.05;
    AlcBackend backend = AlcBackend::harmonic;
    double lambda = 1.0;
    /// Grid spacing of the numerical backend.
    double grid_step = 0.005;
    double tol = 1e-8;
};

struct AlcSolution
{
    int m;
    int n;
    double alpha;
    double delta;
    double mu;
    double beta;
    double residual;
    AlcBackend backend;
    /// Sign changes seen while scanning the bracket; > 1 means the root
    /// nearest delta = 0 was picked.
    int sign_changes = 1;
};

namespace detail {

struct Bracket
{
    double lo;
    double hi;
    int sign_changes;
};

/// Samples f on a uniform lattice and returns the sign-change cell nearest 0.
inline Bracket nearest_sign_change(const std::function<double(double)>& f, double lo, double hi, int samples)
{
    std::vector<double> xs(samples + 1), fs(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        xs[i] = lo + (hi - lo) * i / samples;
        fs[i] = f(xs[i]);
    }
    std::optional<Bracket> best;
    int changes = 0;
    for (int i = 0; i < samples; ++i) {
        if ((fs[i] < 0) == (fs[i + 1] < 0) && fs[i] != 0.0)
            continue;
        ++changes;
        double mid = 0.5 * (xs[i] + xs[i + 1]);
        if (!best || std::fabs(mid) < std::fabs(0.5 * (best->lo + best->hi)))
            best = Bracket{xs[i], xs[i + 1], 0};
    }
    if (!best)
        throw no_crossing_error("no crossing in bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    best->sign_changes = changes;
    return *best;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol)
{
    double flo = f(lo);
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Number of harmonic N = 2 states up to `top` (central singlets plus
/// off-central doublets).
inline std::size_t harmonic_state_count(double alpha, double delta, double top, double lambda)
{
    auto h = harmonic_spectrum_n2(alpha, beta_from_delta(alpha, delta), 0, 0, lambda);
    const double bottom = h.off_central_doublets[0] - lambda * h.spring_off_central;
    std::size_t count = 0;
    for (int n = 0; (2.0 * n + 1.0) * lambda * h.spring_central <= top; ++n)
        ++count;
    for (int m = 0; bottom + (2.0 * m + 1.0) * lambda * h.spring_off_central <= top; ++m)
        count += 2;
    return count;
}

/// Numerical counterpart of harmonic_alc_residual: E(offcentral-m) - E(central-n)
/// read from the labeled finite-difference spectrum.
class NumericalAlcResidual
{
public:
    explicit NumericalAlcResidual(const AlcQuery& q) : q_(q)
    {
        double L = 0.0;
        for (double d : {q.lo, q.hi}) {
            double top = top_energy(d);
            L = std::max(L, choose_domain(symmetric_n2(q.alpha, d), top));
            levels_ = std::max(levels_, harmonic_state_count(q.alpha, d, top, q.lambda) + 2);
        }
        half_width_ = L;
    }

    double operator()(double delta) const
    {
        const Polynomial p = symmetric_n2(q_.alpha, delta);
        const std::size_t levels = std::max(levels_, harmonic_state_count(q_.alpha, delta, top_energy(delta), q_.lambda) + 2);
        auto cfg = SolverConfig::with_step(half_width_, q_.grid_step, levels, q_.lambda);
        auto labeled = classify_levels(solve_numerical(p, cfg), p, q_.lambda);
        std::optional<double> central, outer;
        for (const auto& lv : labeled) {
            if (lv.family == LevelFamily::central && lv.index == q_.n && !central)
                central = lv.energy;
            if (lv.family == LevelFamily::off_central && lv.index == q_.m && !outer)
                outer = lv.energy;
        }
        if (!central || !outer)
            throw numeric_error("alc_delta: labels unresolved at delta = " + std::to_string(delta));
        return *outer - *central;
    }

private:
    double top_energy(double delta) const
    {
        auto h = harmonic_spectrum_n2(q_.alpha, beta_from_delta(q_.alpha, delta), q_.n, q_.m, q_.lambda);
        double top = std::max(h.central_levels.back(), h.off_central_doublets.back());
        return top + 2.0 * q_.lambda * std::min(h.spring_central, h.spring_off_central);
    }

    AlcQuery q_;
    double half_width_ = 0.0;
    std::size_t levels_ = 0;
};

} // namespace detail

/// Solves E_m(off-central) = E_n(central) for delta inside the query bracket.
inline AlcSolution alc_delta(const AlcQuery& q)
{
    if (q.m < 0 || q.n < 0 || !(q.alpha > 0))
        throw std::invalid_argument("alc_delta: need m, n >= 0 and alpha > 0");
    if (!(q.lo < q.hi) || !(2.0 + q.lo > 0))
        throw std::invalid_argument("alc_delta: need lo < hi and 2 + lo > 0");
    if (!(q.tol > 0))
        throw std::invalid_argument("alc_delta: tol must be > 0");

    std::function<double(double)> residual;
    int samples = 64;
    if (q.backend == AlcBackend::harmonic) {
        residual = [q](double d) { return harmonic_alc_residual(q.m, q.n, q.alpha, d, q.lambda); };
    } else {
        residual = detail::NumericalAlcResidual(q);
        samples = 8;
    }
    auto br = detail::nearest_sign_change(residual, q.lo, q.hi, samples);
    // The closed-form residual is cheap, so it is bisected down to rounding.
    double delta = detail::bisect(residual, br.lo, br.hi, q.backend == AlcBackend::harmonic ? 0.0 : q.tol);
    return {q.m, q.n, q.alpha, delta, std::sqrt(2.0 + delta), beta_from_delta(q.alpha, delta),
            residual(delta), q.backend, br.sign_changes};
}

/// (m, n) pairs of the excited-state crossing table.
inline constexpr std::array<std::array<int, 2>, 12> table1_pairs{{
    {1, 3}, {0, 1}, {0, 0}, {1, 2}, {1, 1}, {2, 3}, {1, 0}, {2, 2}, {2, 1}, {3, 3}, {2, 0}, {3, 2}}};

struct Table1Reference
{
    int m;
    int n;
    double delta;
};

/// Published crossing values at alpha = 4, transcribed to five decimals;
/// used only for side-by-side comparison.
inline constexpr std::array<Table1Reference, 12> table1_reference{{
    {1, 3, -0.00262}, {0, 1, -0.00261}, {0, 0, 0.00260}, {1, 2, 0.00261},
    {1, 1, 0.00781},  {2, 3, 0.00783},  {1, 0, 0.01299}, {2, 2, 0.01302},
    {2, 1, 0.01818},  {3, 3, 0.01823},  {2, 0, 0.02332}, {3, 2, 0.02338}}};

struct PairingGap
{
    int m;
    int n;
    /// delta(m+1, n+2) - delta(m, n).
    double gap;
};

struct Table1Result
{
    std::vector<AlcSolution> rows;
    std::vector<PairingGap> gaps;
};

inline Table1Result table1(double alpha, AlcBackend backend = AlcBackend::harmonic)
{
    if (!(alpha > 0))
        throw std::invalid_argument("table1: alpha must be > 0");
    Table1Result out;
    for (auto [m, n] : table1_pairs) {
        AlcQuery q;
        q.m = m;
        q.n = n;
        q.alpha = alpha;
        q.backend = backend;
        out.rows.push_back(alc_delta(q));
    }
    std::sort(out.rows.begin(), out.rows.end(), [](const AlcSolution& a, const AlcSolution& b) { return a.delta < b.delta; });
    auto find = [&](int m, int n) -> const AlcSolution* {
        for (const auto& r : out.rows)
            if (r.m == m && r.n == n)
                return &r;
        return nullptr;
    };
    for (const auto& r : out.rows)
        if (const auto* partner = find(r.m + 1, r.n + 2))
            out.gaps.push_back({r.m, r.n, partner->delta - r.delta});
    return out;
}

// --- maximal degeneracy -----------------------------------------------------

struct DegeneracyResult
{
    WellShape shape;
    /// Max |E_w - E_0| over the inequivalent wells, in energy units.
    double max_residual;
    int iterations;
    /// Input failed the pronounced-well gate; harmonic estimates are rough.
    bool deep_well_warning;
    /// Independent check over every pair of minima located by root finding.
    double max_pairwise_gap;
    bool all_pairs_within_tol;
    /// Harmonic ground energies F + Lambda sqrt(G) of the inequivalent wells.
    std::vector<double> well_energies;
};

namespace detail {

/// Positions of the inequivalent minima of the symmetric potential: x = 0 when
/// N is even, and sqrt(s_k) whenever N - k is even (k 1-based).
inline std::vector<double> inequivalent_minima(const WellShape& shape)
{
    const std::size_t n = shape.size();
    std::vector<double> xs;
    if (n % 2 == 0)
        xs.push_back(0.0);
    for (std::size_t k = 1; k <= n; ++k)
        if ((n - k) % 2 == 0)
            xs.push_back(std::sqrt(shape.radii_squared()[k - 1]));
    return xs;
}

inline std::vector<double> ground_energies(const WellShape& shape, double lambda)
{
    const Polynomial v = build_symmetric(shape);
    const Polynomial v2 = derivative(derivative(v));
    std::vector<double> e;
    for (double x : inequivalent_minima(shape)) {
        double g = 0.5 * v2(x);
        if (!(g > 0))
            throw numeric_error("maximal_degeneracy_domain: flat minimum at x = " + std::to_string(x));
        e.push_back(v(x) + lambda * std::sqrt(g));
    }
    return e;
}

} // namespace detail

/// Tunes the last floor((N+1)/2) shape increments by damped minimum-norm
/// Newton steps until the harmonic ground energies of all inequivalent wells
/// agree to `tol`.
inline DegeneracyResult maximal_degeneracy_domain(const WellShape& shape, double tol, double lambda = 1.0)
{
    if (!(tol > 0) || !(lambda > 0))
        throw std::invalid_argument("maximal_degeneracy_domain: tol and lambda must be > 0");
    const std::size_t n = shape.size();
    const std::size_t free_count = (n + 1) / 2;
    const std::size_t first_free = n - free_count;
    std::vector<double> inc = shape.increments();

    auto residuals = [&](const std::vector<double>& d) {
        auto e = detail::ground_energies(WellShape::from_increments(d), lambda);
        Eigen::VectorXd r(static_cast<Eigen::Index>(e.size() - 1));
        for (std::size_t i = 1; i < e.size(); ++i)
            r[static_cast<Eigen::Index>(i - 1)] = e[i] - e[0];
        return r;
    };

    DegeneracyResult out{shape, 0.0, 0, !shape.deep_well_regime(), 0.0, true, {}};
    const std::size_t wells = detail::inequivalent_minima(shape).size();
    if (wells > 1) {
        Eigen::VectorXd r = residuals(inc);
        int it = 0;
        while (r.cwiseAbs().maxCoeff() > tol) {
            if (++it > 50) {
                std::string msg = "maximal_degeneracy_domain: no convergence in 50 iterations; residuals";
                for (Eigen::Index i = 0; i < r.size(); ++i)
                    msg += " " + std::to_string(r[i]);
                throw convergence_error(msg);
            }
            Eigen::MatrixXd jac(r.size(), static_cast<Eigen::Index>(free_count));
            for (std::size_t j = 0; j < free_count; ++j) {
                const std::size_t k = first_free + j;
                const double step = std::min(1e-6 * std::max(1.0, inc[k]), 0.5 * inc[k]);
                auto up = inc, down = inc;
                up[k] += step;
                down[k] -= step;
                jac.col(static_cast<Eigen::Index>(j)) = (residuals(up) - residuals(down)) / (2.0 * step);
            }
            Eigen::VectorXd dx = jac.completeOrthogonalDecomposition().solve(-r);
            double damping = 1.0;
            bool accepted = false;
            for (int halving = 0; halving < 40 && !accepted; ++halving, damping *= 0.5) {
                auto trial = inc;
                bool positive = true;
                for (std::size_t j = 0; j < free_count; ++j) {
                    trial[first_free + j] += damping * dx[static_cast<Eigen::Index>(j)];
                    positive = positive && trial[first_free + j] > 0;
                }
                if (!positive)
                    continue;
                Eigen::VectorXd rt = residuals(trial);
                if (rt.norm() < r.norm()) {
                    inc = std::move(trial);
                    r = std::move(rt);
                    accepted = true;
                }
            }
            if (!accepted)
                throw convergence_error("maximal_degeneracy_domain: line search failed, max residual "
                                        + std::to_string(r.cwiseAbs().maxCoeff()));
        }
        out.iterations = it;
        out.max_residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
        out.shape = WellShape::from_increments(inc);
    }
    out.well_energies = detail::ground_energies(out.shape, lambda);

    double lo = 0, hi = 0;
    bool first = true;
    for (const auto& w : harmonic_wells(build_symmetric(out.shape))) {
        double e = w.F + lambda * std::sqrt(w.G);
        lo = first ? e : std::min(lo, e);
        hi = first ? e : std::max(hi, e);
        first = false;
    }
    out.max_pairwise_gap = hi - lo;
    out.all_pairs_within_tol = out.max_pairwise_gap <= 10.0 * tol;
    return out;
}

// --- asymmetric catastrophe locus -------------------------------------------

enum class LocusMethod { linearized, cubic };

struct AsymLocusPoint
{
    double epsilon;
    double alpha;
    double delta;
    LocusMethod method;
};

/// Cubic coupling eps that puts the deepened left well level with the centre:
/// eps = -(1/2) alpha^3 delta sqrt(3 + delta).
inline double locus_epsilon(double alpha, double delta)
{
    return -0.5 * alpha * alpha * alpha * delta * std::sqrt(3.0 + delta);
}

/// delta = -2 eps / (sqrt(3) alpha^3), valid for |eps| <= 0.1 alpha^3.
inline AsymLocusPoint asym_locus_linearized(double epsilon, double alpha)
{
    if (!(alpha > 0))
        throw std::invalid_argument("asym_locus_linearized: alpha must be > 0");
    if (std::fabs(epsilon) > perturbative_epsilon_bound(alpha))
        throw std::invalid_argument("asym_locus_linearized: |epsilon| > 0.1 alpha^3, use asym_locus_cubic");
    const double delta = -2.0 * epsilon / (std::sqrt(3.0) * alpha * alpha * alpha);
    return {epsilon, alpha, delta == 0.0 ? 0.0 : delta, LocusMethod::linearized};
}

/// Solves eps = -(1/2) alpha^3 delta sqrt(3 + delta) by bisection on the
/// branch through delta = 0, delta in [-2, 1], where the right-hand side
/// decreases monotonically from alpha^3 to -alpha^3.
inline AsymLocusPoint asym_locus_cubic(double epsilon, double alpha)
{
    if (!(alpha > 0))
        throw std::invalid_argument("asym_locus_cubic: alpha must be > 0");
    auto f = [&](double d) { return locus_epsilon(alpha, d) - epsilon; };
    const double lo = -2.0, hi = 1.0;
    if (f(lo) < 0 || f(hi) > 0)
        throw no_crossing_error("asym_locus_cubic: no root for |epsilon| > alpha^3");
    if (epsilon == 0.0)
        return {epsilon, alpha, 0.0, LocusMethod::cubic};
    return {epsilon, alpha, detail::bisect(f, lo, hi, 0.0), LocusMethod::cubic};
}

struct WellPerturbation
{
    double depth_shift;
    double curvature_shift;
};

/// First-order change of the leftmost well bottom, -eps (alpha^2+beta^2)^(3/2),
/// and of V'' there, 3 sqrt(alpha^2+beta^2)(4 alpha^2 + 5 beta^2)/beta^2 eps.
inline WellPerturbation left_well_perturbation(double alpha, double beta, double epsilon)
{
    if (!(alpha > 0) || !(beta > 0))
        throw std::invalid_argument("left_well_perturbation: alpha, beta must be > 0");
    const double a2 = alpha * alpha, b2 = beta * beta;
    const double r = std::sqrt(a2 + b2);
    return {-epsilon * r * r * r, 3.0 * r * (4.0 * a2 + 5.0 * b2) / b2 * epsilon};
}

// --- relocalization scans ---------------------------------------------------

/// Runs fn(i) for i in [0, count) on up to `jobs` threads.
inline void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn)
{
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < jobs; ++w)
        workers.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < count; i += jobs)
                fn(i);
        }));
    for (auto& f : workers)
        f.get();
}

struct ScanRow
{
    double delta;
    double e0;
    double w_central;
    double w_outer;
    std::string label;
};

struct ScanResult
{
    std::vector<ScanRow> rows;
    /// Where the ground-state central weight first drops through 0.5.
    std::optional<double> crossing;
};

inline std::optional<double> first_drop_through_half(const std::vector<double>& xs, const std::vector<double>& w)
{
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] >= 0.5 && w[i + 1] < 0.5)
            return xs[i] + (w[i] - 0.5) / (w[i] - w[i + 1]) * (xs[i + 1] - xs[i]);
    return std::nullopt;
}

/// Ground-state localization of the symmetric N = 2 potential along
/// beta^2 = (2 + delta) alpha^2, delta on a uniform lattice.
inline ScanRow relocalization_point(double alpha, double delta, const SolverConfig& cfg)
{
    const Polynomial p = symmetric_n2(alpha, delta);
    auto pairs = solve_numerical(p, cfg);
    auto labels = classify_levels(pairs, p, cfg.lambda);
    const auto& g = labels.front();
    return {delta, g.energy, g.w_central, g.w_outer, g.label()};
}

inline ScanResult relocalization_scan(double alpha, double lo, double hi, int steps, const SolverConfig& cfg,
                                      unsigned jobs = 1)
{
    if (steps < 3)
        throw std::invalid_argument("relocalization_scan: need at least 3 steps");
    if (!(lo < hi))
        throw std::invalid_argument("relocalization_scan: need lo < hi");
    ScanResult out;
    out.rows.resize(static_cast<std::size_t>(steps));
    parallel_for(out.rows.size(), jobs, [&](std::size_t i) {
        const double delta = lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
        out.rows[i] = relocalization_point(alpha, delta, cfg);
    });
    std::vector<double> xs, ws;
    for (const auto& r : out.rows) {
        xs.push_back(r.delta);
        ws.push_back(r.w_central);
    }
    out.crossing = first_drop_through_half(xs, ws);
    return out;
}

struct CuspRow
{
    double b;
    double e0;
    double w_left;
};

/// Ground-state weight left of the barrier for x^4 + a x^2 + b x as b sweeps
/// through zero: the double well has no abrupt relocalization.
inline std::vector<CuspRow> cusp_scan(double a, double b_lo, double b_hi, int steps, const SolverConfig& cfg,
                                      unsigned jobs = 1)
{
    if (steps < 3 || !(b_lo < b_hi))
        throw std::invalid_argument("cusp_scan: need steps >= 3 and b_lo < b_hi");
    std::vector<CuspRow> rows(static_cast<std::size_t>(steps));
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
        const double b = b_lo + (b_hi - b_lo) * static_cast<double>(i) / (steps - 1);
        const Polynomial p{0.0, b, a, 0.0, 1.0};
        auto cfg1 = cfg;
        cfg1.num_levels = 1;
        auto pairs = solve_numerical(p, cfg1);
        double w_left = 0.0;
        auto regions = well_weights(pairs.front(), p);
        // Everything left of the first barrier (or of x = 0 for a single well).
        if (regions.size() > 1)
            w_left = regions.front().weight;
        else {
            const auto& g = pairs.front();
            for (std::size_t k = 0; k < g.psi.size(); ++k)
                if (g.grid.x(k) < 0)
                    w_left += g.psi[k] * g.psi[k] * g.grid.step();
        }
        rows[i] = {b, pairs.front().energy, w_left};
    });
    return rows;
}

} // namespace arnoldqc
