#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "arnoldqc/error.hpp"
#include "arnoldqc/polynomial.hpp"
#include "arnoldqc/potential.hpp"
#include "arnoldqc/tridiagonal.hpp"

namespace arnoldqc {

/// Uniform grid x_i = -L + i h, i = 0 .. points-1, symmetric about x = 0.
struct Grid
{
    double half_width = 0;
    std::size_t points = 0;

    double step() const { return 2.0 * half_width / static_cast<double>(points - 1); }
    double x(std::size_t i) const { return -half_width + static_cast<double>(i) * step(); }
};

/// Discretization controls for -Lambda^2 psi'' + V psi = E psi on [-L, L].
struct SolverConfig
{
    double lambda = 1.0;
    double half_width = 10.0;
    std::size_t grid_points = 4001;
    std::size_t num_levels = 4;

    /// Odd point count closest to a spacing of `step` on [-L, L].
    static SolverConfig with_step(double half_width, double step, std::size_t num_levels, double lambda = 1.0)
    {
        if (!(half_width > 0) || !(step > 0))
            throw std::invalid_argument("SolverConfig: half width and step must be > 0");
        auto intervals = static_cast<std::size_t>(std::llround(2.0 * half_width / step));
        if (intervals % 2 == 1)
            ++intervals;
        return {lambda, half_width, intervals + 1, num_levels};
    }

    double step() const { return 2.0 * half_width / static_cast<double>(grid_points - 1); }

    void validate() const
    {
        if (!(lambda > 0) || !std::isfinite(lambda))
            throw std::invalid_argument("SolverConfig: lambda must be > 0");
        if (!(half_width > 0) || !std::isfinite(half_width))
            throw std::invalid_argument("SolverConfig: half width must be > 0");
        if (grid_points < 201 || grid_points % 2 == 0)
            throw std::invalid_argument("SolverConfig: grid points must be odd and >= 201");
        if (num_levels < 1)
            throw std::invalid_argument("SolverConfig: need at least one level");
    }
};

struct Eigenpair
{
    double energy;
    /// Samples on every grid point (zero at the Dirichlet ends), sum psi^2 h = 1.
    std::vector<double> psi;
    Grid grid;
    /// +1 even, -1 odd, 0 when the potential has no parity symmetry.
    int parity = 0;
};

inline void require_confining(const Polynomial& p, const char* who)
{
    if (p.degree() < 2 || p.degree() % 2 != 0 || !(p.leading() > 0))
        throw std::invalid_argument(std::string(who) + ": potential must have even degree >= 2 and positive leading coefficient");
}

// --- harmonic estimates -----------------------------------------------------

/// E_n = V(0) + (2n + 1) Lambda sqrt(V''(0)/2), n = 0 .. n_max.
inline std::vector<double> central_levels(const Polynomial& p, int n_max, double lambda = 1.0)
{
    if (n_max < 0 || !(lambda > 0))
        throw std::invalid_argument("central_levels: need n_max >= 0 and lambda > 0");
    const double curvature = derivative(derivative(p))(0.0);
    if (!(curvature > 0))
        throw std::domain_error("central_levels: origin is not a well");
    const double spring = std::sqrt(0.5 * curvature);
    std::vector<double> e;
    for (int n = 0; n <= n_max; ++n)
        e.push_back(p(0.0) + (2.0 * n + 1.0) * lambda * spring);
    return e;
}

/// E_m = F + (2m + 1) Lambda sqrt(G); each entry stands for a near-degenerate
/// parity doublet when the well has a mirror partner.
inline std::vector<double> off_central_levels(const HarmonicWell& well, int m_max, double lambda = 1.0)
{
    if (!(well.G > 0) || m_max < 0 || !(lambda > 0))
        throw std::invalid_argument("off_central_levels: need G > 0, m_max >= 0, lambda > 0");
    std::vector<double> e;
    for (int m = 0; m <= m_max; ++m)
        e.push_back(well.F + (2.0 * m + 1.0) * lambda * std::sqrt(well.G));
    return e;
}

/// Harmonic picture of the symmetric N = 2 potential with shape (alpha, beta).
struct HarmonicSpectrum
{
    std::vector<double> central_levels;
    std::vector<double> off_central_doublets;
    double spring_central;
    double spring_off_central;
};

inline HarmonicSpectrum harmonic_spectrum_n2(double alpha, double beta, int n_max, int m_max, double lambda = 1.0)
{
    if (!(alpha > 0) || !(beta > 0))
        throw std::invalid_argument("harmonic_spectrum_n2: alpha, beta must be > 0");
    const double a2 = alpha * alpha, b2 = beta * beta;
    HarmonicSpectrum h;
    h.spring_central = std::sqrt(3.0 * a2 * (a2 + b2));
    h.spring_off_central = std::sqrt(6.0 * a2 * b2 + 6.0 * b2 * b2);
    const double bottom = a2 * a2 * a2 + 1.5 * a2 * a2 * b2 - 0.5 * b2 * b2 * b2;
    for (int n = 0; n <= n_max; ++n)
        h.central_levels.push_back((2.0 * n + 1.0) * lambda * h.spring_central);
    for (int m = 0; m <= m_max; ++m)
        h.off_central_doublets.push_back(bottom + (2.0 * m + 1.0) * lambda * h.spring_off_central);
    return h;
}

// --- finite-difference eigensolver -----------------------------------------

/// Smallest L on the 0.5 lattice, one lattice step past the first point where
/// V(+-L) >= eMax + |eMax| and L >= (outermost stationary point) + 2.
inline double choose_domain(const Polynomial& p, double e_max)
{
    require_confining(p, "choose_domain");
    double outer = 0.0;
    for (const auto& cp : critical_points(p))
        outer = std::max(outer, std::fabs(cp.x));
    const double target = e_max + std::fabs(e_max);
    for (int k = 1; k < 100000; ++k) {
        const double L = 0.5 * k;
        if (L >= outer + 2.0 - 1e-9 && p(L) >= target && p(-L) >= target)
            return L + 0.5;
    }
    throw numeric_error("choose_domain: no admissible half width found");
}

namespace detail {

inline TridiagonalEigenpairs solve_block(std::vector<double> diag, std::vector<double> off, std::size_t levels)
{
    SymmetricTridiagonal t(std::move(diag), std::move(off));
    return lowest_eigenpairs(t, std::min(levels, t.size()));
}

} // namespace detail

/// Lowest cfg.num_levels eigenpairs of the central-difference discretization
/// (diagonal V(x_i) + 2 Lambda^2/h^2, off-diagonal -Lambda^2/h^2) with
/// psi(+-L) = 0. Even potentials are split into parity blocks on x >= 0,
/// which gives parity-definite eigenvectors even for tunnelling doublets
/// split below machine precision.
inline std::vector<Eigenpair> solve_numerical(const Polynomial& p, const SolverConfig& cfg)
{
    cfg.validate();
    require_confining(p, "solve_numerical");
    const Grid grid{cfg.half_width, cfg.grid_points};
    const std::size_t n = cfg.grid_points;
    const double h = grid.step();
    const double t = cfg.lambda * cfg.lambda / (h * h);
    const std::size_t unknowns = n - 2;
    if (cfg.num_levels >= unknowns)
        throw std::invalid_argument("solve_numerical: requested " + std::to_string(cfg.num_levels)
                                    + " levels from a grid with " + std::to_string(unknowns) + " unknowns");

    std::vector<Eigenpair> out;
    auto normalize = [h](std::vector<double>& psi) {
        double s = 0.0;
        for (double v : psi)
            s += v * v;
        s = std::sqrt(s * h);
        for (double& v : psi)
            v /= s;
    };

    if (p.is_even()) {
        const std::size_t c = (n - 1) / 2;
        // Even block: unknowns at x_j = j h, j = 0 .. c-1, with psi_0 = sqrt(2) w_0.
        std::vector<double> de(c), ee(c - 1, -t);
        for (std::size_t j = 0; j < c; ++j)
            de[j] = p(static_cast<double>(j) * h) + 2.0 * t;
        ee[0] = -std::sqrt(2.0) * t;
        // Odd block: unknowns j = 1 .. c-1.
        std::vector<double> dodd(c - 1), eodd(c - 2, -t);
        for (std::size_t j = 1; j < c; ++j)
            dodd[j - 1] = p(static_cast<double>(j) * h) + 2.0 * t;

        auto even = detail::solve_block(std::move(de), std::move(ee), cfg.num_levels);
        auto odd = detail::solve_block(std::move(dodd), std::move(eodd), cfg.num_levels);

        for (std::size_t k = 0; k < even.values.size(); ++k) {
            std::vector<double> psi(n, 0.0);
            const auto& w = even.vectors[k];
            psi[c] = std::sqrt(2.0) * w[0];
            for (std::size_t j = 1; j < c; ++j)
                psi[c + j] = psi[c - j] = w[j];
            normalize(psi);
            out.push_back({even.values[k], std::move(psi), grid, +1});
        }
        for (std::size_t k = 0; k < odd.values.size(); ++k) {
            std::vector<double> psi(n, 0.0);
            const auto& w = odd.vectors[k];
            for (std::size_t j = 1; j < c; ++j) {
                psi[c + j] = w[j - 1];
                psi[c - j] = -w[j - 1];
            }
            normalize(psi);
            out.push_back({odd.values[k], std::move(psi), grid, -1});
        }
        std::stable_sort(out.begin(), out.end(), [](const Eigenpair& a, const Eigenpair& b) {
            return a.energy < b.energy || (a.energy == b.energy && a.parity > b.parity);
        });
        out.resize(cfg.num_levels);
        return out;
    }

    std::vector<double> d(unknowns), e(unknowns - 1, -t);
    for (std::size_t i = 0; i < unknowns; ++i)
        d[i] = p(grid.x(i + 1)) + 2.0 * t;
    auto full = detail::solve_block(std::move(d), std::move(e), cfg.num_levels);
    for (std::size_t k = 0; k < full.values.size(); ++k) {
        std::vector<double> psi(n, 0.0);
        std::copy(full.vectors[k].begin(), full.vectors[k].end(), psi.begin() + 1);
        normalize(psi);
        out.push_back({full.values[k], std::move(psi), grid, 0});
    }
    return out;
}

/// Interior sign changes of psi on the grid. Samples below 1e-8 of the peak
/// are skipped so round-off in the decayed tails does not count.
inline int node_count(const Eigenpair& pair)
{
    double peak = 0.0;
    for (double v : pair.psi)
        peak = std::max(peak, std::fabs(v));
    int nodes = 0;
    double last = 0.0;
    for (double v : pair.psi) {
        if (std::fabs(v) <= 1e-8 * peak)
            continue;
        if (last != 0.0 && (v < 0) != (last < 0))
            ++nodes;
        last = v;
    }
    return nodes;
}

// --- localization -----------------------------------------------------------

/// Stretch of the line between two consecutive maxima of V (or +-infinity).
struct WellRegion
{
    double lo;
    double hi;
    double weight;
    /// Minimum of V inside the region (NaN if none).
    double well_x;
    bool central;
};

namespace detail {

inline std::vector<WellRegion> regions_from(const std::vector<CriticalPoint>& cps)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cuts;
    for (const auto& cp : cps)
        if (cp.kind == CriticalKind::maximum)
            cuts.push_back(cp.x);
    std::vector<WellRegion> regions;
    for (std::size_t r = 0; r <= cuts.size(); ++r) {
        WellRegion w{r == 0 ? -inf : cuts[r - 1], r == cuts.size() ? inf : cuts[r], 0.0,
                     std::numeric_limits<double>::quiet_NaN(), false};
        double best = inf;
        for (const auto& cp : cps)
            if (cp.kind == CriticalKind::minimum && cp.x >= w.lo && cp.x < w.hi && cp.value < best) {
                best = cp.value;
                w.well_x = cp.x;
            }
        if (cuts.empty())
            w.central = true;
        else
            w.central = r > 0 && r < cuts.size() && w.lo <= 0.0 && 0.0 < w.hi;
        regions.push_back(w);
    }
    return regions;
}

inline std::vector<WellRegion> weigh(const Eigenpair& pair, std::vector<WellRegion> regions)
{
    const double h = pair.grid.step();
    std::size_t r = 0;
    for (std::size_t i = 0; i < pair.psi.size(); ++i) {
        const double x = pair.grid.x(i);
        const double mass = pair.psi[i] * pair.psi[i] * h;
        // A sample sitting on a barrier top is shared by both neighbours.
        if (r + 1 < regions.size() && std::fabs(x - regions[r].hi) <= 1e-6 * h) {
            regions[r].weight += 0.5 * mass;
            regions[++r].weight += 0.5 * mass;
            continue;
        }
        while (r + 1 < regions.size() && x >= regions[r].hi)
            ++r;
        regions[r].weight += mass;
    }
    return regions;
}

} // namespace detail

/// Probability carried by each region between consecutive maxima of V.
inline std::vector<WellRegion> well_weights(const Eigenpair& pair, const Polynomial& p)
{
    return detail::weigh(pair, detail::regions_from(critical_points(p)));
}

enum class LevelFamily { central, off_central, mixed };

struct LabeledLevel
{
    double energy;
    LevelFamily family;
    /// n for central, m for off-central (shared by a grouped doublet), -1 if mixed.
    int index;
    double w_central;
    double w_outer;
    /// Position of the dominant off-central well (NaN otherwise).
    double well_x;

    std::string label() const
    {
        switch (family) {
        case LevelFamily::central:
            return "central-" + std::to_string(index);
        case LevelFamily::off_central:
            return "offcentral-" + std::to_string(index);
        default:
            return "mixed";
        }
    }
};

/// Labels each eigenpair by its dominant family (weight > 0.5). Consecutive
/// off-central levels closer than 1e-3 of the harmonic off-central spacing
/// 2 Lambda sqrt(G) are grouped as one doublet sharing m.
inline std::vector<LabeledLevel> classify_levels(const std::vector<Eigenpair>& pairs, const Polynomial& p,
                                                 double lambda = 1.0)
{
    const auto cps = critical_points(p);
    const auto regions = detail::regions_from(cps);

    double spacing = std::numeric_limits<double>::infinity();
    for (const auto& cp : cps)
        if (cp.kind == CriticalKind::minimum)
            for (const auto& r : regions)
                if (!r.central && r.well_x == cp.x)
                    spacing = std::min(spacing, 2.0 * lambda * std::sqrt(0.5 * cp.curvature));
    if (!std::isfinite(spacing))
        spacing = 1.0;
    const double group_gap = 1e-3 * spacing;

    std::vector<LabeledLevel> out;
    int next_central = 0;
    int next_outer = 0;
    int group_size = 0;
    double last_outer_energy = 0.0;
    for (const auto& pair : pairs) {
        auto weighed = detail::weigh(pair, regions);
        double wc = 0.0;
        double wo = 0.0;
        double best_outer = -1.0;
        double outer_x = std::numeric_limits<double>::quiet_NaN();
        for (const auto& r : weighed) {
            if (r.central) {
                wc += r.weight;
                continue;
            }
            wo += r.weight;
            if (r.weight > best_outer) {
                best_outer = r.weight;
                outer_x = r.well_x;
            }
        }
        LabeledLevel lv{pair.energy, LevelFamily::mixed, -1, wc, wo, std::numeric_limits<double>::quiet_NaN()};
        if (wc > 0.5) {
            lv.family = LevelFamily::central;
            lv.index = next_central++;
            group_size = 0;
        } else if (wo > 0.5) {
            lv.family = LevelFamily::off_central;
            lv.well_x = outer_x;
            if (group_size == 1 && pair.energy - last_outer_energy < group_gap) {
                lv.index = next_outer - 1;
                group_size = 2;
            } else {
                lv.index = next_outer++;
                group_size = 1;
            }
            last_outer_energy = pair.energy;
        } else {
            group_size = 0;
        }
        out.push_back(lv);
    }
    return out;
}

} // namespace arnoldqc
