#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "arnoldqc/error.hpp"
#include "arnoldqc/polynomial.hpp"
#include "arnoldqc/roots.hpp"

namespace arnoldqc {

/// Geometry of a symmetric Arnold potential. Stores the squared radii
/// s_1 <= s_2 <= ... <= s_N of the non-zero stationary points, i.e. the
/// running sums alpha^2, alpha^2 + beta^2, ... of the shape increments.
class WellShape
{
public:
    explicit WellShape(std::vector<double> radii_squared) : s_(std::move(radii_squared))
    {
        if (s_.empty())
            throw std::invalid_argument("WellShape: need at least one increment");
        for (std::size_t k = 0; k < s_.size(); ++k) {
            if (!std::isfinite(s_[k]) || s_[k] < 0)
                throw std::invalid_argument("WellShape: squared radii must be finite and >= 0");
            if (k > 0 && s_[k] < s_[k - 1])
                throw std::invalid_argument("WellShape: squared radii must be non-decreasing");
        }
    }

    /// From the increments (alpha^2, beta^2, ..., omega^2).
    static WellShape from_increments(const std::vector<double>& increments)
    {
        std::vector<double> s(increments.size());
        for (double d : increments)
            if (!(d >= 0))
                throw std::invalid_argument("WellShape: increments must be >= 0");
        std::partial_sum(increments.begin(), increments.end(), s.begin());
        return WellShape(std::move(s));
    }

    std::size_t size() const { return s_.size(); }
    const std::vector<double>& radii_squared() const { return s_; }

    std::vector<double> increments() const
    {
        std::vector<double> d(s_.size());
        std::adjacent_difference(s_.begin(), s_.end(), d.begin());
        return d;
    }

    bool strictly_increasing() const
    {
        if (s_[0] <= 0)
            return false;
        for (std::size_t k = 1; k < s_.size(); ++k)
            if (s_[k] <= s_[k - 1])
                return false;
        return true;
    }

    /// Pronounced-well gate in Lambda = 1 units: s_1 >= 1 and every spacing >= 1.
    bool deep_well_regime() const
    {
        for (double d : increments())
            if (d < 1.0)
                return false;
        return true;
    }

    /// Shape with every radius multiplied by lambda.
    WellShape scaled(double lambda) const
    {
        std::vector<double> s = s_;
        for (double& v : s)
            v *= lambda * lambda;
        return WellShape(std::move(s));
    }

private:
    std::vector<double> s_;
};

/// Local harmonic model V ~ F + G (x - X)^2 around a minimum.
struct HarmonicWell
{
    double X;
    double F;
    double G;
};

/// Derivative (2N+2) x prod_k (x^2 - s_k) of the symmetric potential.
inline Polynomial symmetric_derivative(const WellShape& shape)
{
    const double n = static_cast<double>(shape.size());
    Polynomial d{0.0, 2.0 * n + 2.0};
    for (double s : shape.radii_squared())
        d = d * Polynomial{-s, 0.0, 1.0};
    return d;
}

/// Monic even potential of degree 2N+2 with V(0) = 0 whose stationary points
/// are 0 and +-sqrt(s_k).
inline Polynomial build_symmetric(const WellShape& shape)
{
    return antiderivative(symmetric_derivative(shape));
}

struct N2Couplings
{
    double a;
    double c;
};

/// V = x^6 + a x^4 + c x^2 with V' = 6x(x^2 - alpha^2)(x^2 - alpha^2 - beta^2).
inline N2Couplings closed_form_n2(double alpha, double beta)
{
    if (alpha < 0 || beta < 0)
        throw std::invalid_argument("closed_form_n2: alpha, beta must be >= 0");
    const double a2 = alpha * alpha;
    const double b2 = beta * beta;
    return {-3.0 * (a2 + 0.5 * b2), 3.0 * a2 * (a2 + b2)};
}

/// Couplings of V = x^8 + a x^6 + c x^4 + f x^2 together with the value and
/// second derivative at the inner (x = alpha) and outer
/// (x^2 = alpha^2 + beta^2 + gamma^2) minima.
struct N3ClosedForm
{
    double a;
    double c;
    double f;
    double v_inner;
    double d2v_inner;
    double v_outer;
    double d2v_outer;
    /// Either minimum has zero curvature.
    bool degenerate;
};

inline N3ClosedForm closed_form_n3(double alpha, double beta, double gamma)
{
    if (alpha < 0 || beta < 0 || gamma < 0)
        throw std::invalid_argument("closed_form_n3: alpha, beta, gamma must be >= 0");
    const double a2 = alpha * alpha, a4 = a2 * a2, a6 = a4 * a2, a8 = a4 * a4;
    const double b2 = beta * beta, b4 = b2 * b2, b6 = b4 * b2, b8 = b4 * b4;
    const double g2 = gamma * gamma, g4 = g2 * g2, g6 = g4 * g2, g8 = g4 * g4;

    N3ClosedForm r{};
    r.a = -4.0 * a2 - 8.0 / 3.0 * b2 - 4.0 / 3.0 * g2;
    r.c = 8.0 * a2 * b2 + 4.0 * a2 * g2 + 2.0 * b4 + 6.0 * a4 + 2.0 * b2 * g2;
    r.f = -4.0 * a2 * b2 * g2 - 4.0 * a6 - 8.0 * a4 * b2 - 4.0 * a4 * g2 - 4.0 * a2 * b4;
    r.v_inner = -a8 - 8.0 / 3.0 * a6 * b2 - 4.0 / 3.0 * a6 * g2 - 2.0 * a4 * b4 - 2.0 * a4 * b2 * g2;
    r.d2v_inner = 16.0 * a2 * b4 + 16.0 * a2 * b2 * g2;
    r.v_outer = -a8 - 2.0 * a4 * b2 * g2 + b8 / 3.0 - 2.0 / 3.0 * b2 * g6 - 8.0 / 3.0 * a6 * b2
                - 4.0 / 3.0 * a6 * g2 - 2.0 * a4 * b4 + 2.0 / 3.0 * b6 * g2 - g8 / 3.0;
    r.d2v_outer = 16.0 * b4 * g2 + 16.0 * a2 * b2 * g2 + 32.0 * b2 * g4 + 16.0 * g6 + 16.0 * a2 * g4;
    r.degenerate = r.d2v_inner == 0.0 || r.d2v_outer == 0.0;
    return r;
}

enum class CriticalKind { minimum, maximum, degenerate };

inline const char* to_string(CriticalKind k)
{
    switch (k) {
    case CriticalKind::minimum:
        return "min";
    case CriticalKind::maximum:
        return "max";
    default:
        return "degenerate";
    }
}

struct CriticalPoint
{
    double x;
    double value;
    double curvature;
    CriticalKind kind;
};

/// Relative threshold under which V'' counts as zero.
inline constexpr double degenerate_curvature_tol = 1e-9;

/// Window guaranteed to contain every stationary point of p.
inline double default_window(const Polynomial& p)
{
    Polynomial d = derivative(p);
    if (d.degree() == 0)
        return 1.0;
    return cauchy_bound(d);
}

/// Stationary points of p in [-window, window], ascending, classified by the
/// sign of V''. Throws std::invalid_argument when V' still changes sign in
/// the probe band window < |x| <= 2 window.
inline std::vector<CriticalPoint> critical_points(const Polynomial& p, double window)
{
    if (!(window > 0))
        throw std::invalid_argument("critical_points: window must be > 0");
    Polynomial d1 = derivative(p);
    if (d1.is_zero() || d1.degree() == 0)
        return {};
    Polynomial d2 = derivative(d1);
    const double tol = 1e-13 * std::max(1.0, window);

    if (!real_roots(d1, window * (1 + 1e-12), 2 * window, tol).empty()
        || !real_roots(d1, -2 * window, -window * (1 + 1e-12), tol).empty())
        throw std::invalid_argument("critical_points: V is not monotone beyond the window");

    std::vector<CriticalPoint> out;
    for (RealRoot r : real_roots(d1, -window, window, tol)) {
        // Newton polish of simple roots down to rounding level.
        for (int it = 0; it < 4 && !r.near_multiple; ++it) {
            const double g = d2(r.x);
            if (g == 0.0)
                break;
            const double next = r.x - d1(r.x) / g;
            if (!(std::fabs(next - r.x) <= tol) || std::fabs(d1(next)) >= std::fabs(d1(r.x)))
                break;
            r.x = next;
        }
        double curv = d2(r.x);
        CriticalKind kind;
        if (r.near_multiple || std::fabs(curv) <= degenerate_curvature_tol * d2.magnitude_at(r.x))
            kind = CriticalKind::degenerate;
        else
            kind = curv > 0 ? CriticalKind::minimum : CriticalKind::maximum;
        out.push_back({r.x, p(r.x), curv, kind});
    }
    return out;
}

inline std::vector<CriticalPoint> critical_points(const Polynomial& p)
{
    return critical_points(p, default_window(p));
}

namespace detail {

inline bool behaves_as_minimum(const Polynomial& p, double x)
{
    double eta = 1e-3 * (1.0 + std::fabs(x));
    double v = p(x);
    return p(x - eta) > v && p(x + eta) > v;
}

} // namespace detail

/// One harmonic model per local minimum, sorted by X. Throws
/// std::domain_error naming X when a minimum is degenerate.
inline std::vector<HarmonicWell> harmonic_wells(const Polynomial& p, double window)
{
    std::vector<HarmonicWell> wells;
    for (const auto& cp : critical_points(p, window)) {
        if (cp.kind == CriticalKind::degenerate) {
            if (detail::behaves_as_minimum(p, cp.x))
                throw std::domain_error("harmonic_wells: degenerate minimum at x = " + std::to_string(cp.x));
            continue;
        }
        if (cp.kind == CriticalKind::minimum)
            wells.push_back({cp.x, cp.value, 0.5 * cp.curvature});
    }
    return wells;
}

inline std::vector<HarmonicWell> harmonic_wells(const Polynomial& p)
{
    return harmonic_wells(p, default_window(p));
}

struct Lemma3Shift
{
    double x0;
    double delta;
};

/// Local minimum of x (F + G (x - X)^2) after rescaling by lambda: the
/// minimum moves from lambda X to x0 = lambda (1 + delta) X with
/// delta = -F / (G X^2 + X sqrt(G^2 X^2 - 3 F G)), independent of lambda.
inline Lemma3Shift lemma3_shift(double F, double G, double X, double lambda = 1.0)
{
    if (!(G > 0) || !(X > 0) || !(lambda > 0))
        throw std::invalid_argument("lemma3_shift: need G > 0, X > 0, lambda > 0");
    const double disc = G * G * X * X - 3.0 * F * G;
    if (disc < 0)
        throw numeric_error("lemma3_shift: no real extremum pair");
    const double delta = -F / (G * X * X + X * std::sqrt(disc));
    return {lambda * (1.0 + delta) * X, delta};
}

/// Displacements of the five stationary points of
/// x^6 + a x^4 + eps x^3 + c x^2 (N = 2 shape, cubic asymmetry).
struct PerturbedExtrema
{
    double epsilon;
    /// Leading-order shifts, all equal to 1 / (4 beta^2).
    double p2, q2, u2, v2;
    /// First-order coefficient in u^2(eps) = u2 + u2_correction * eps.
    double u2_correction;
    /// Numerically refined stationary points, ascending. With eps = 0 these
    /// are {-sqrt(s), -alpha, 0, alpha, sqrt(s)}, s = alpha^2 + beta^2.
    std::vector<double> stationary;
    /// Effective shifts read off the refined points (eps != 0 only):
    /// x = -sqrt(s) - eps p2, -alpha + eps q2, alpha + eps u2, sqrt(s) - eps v2.
    double p2_numeric = 0, q2_numeric = 0, u2_numeric = 0, v2_numeric = 0;
};

/// Largest |eps| for which the perturbative displacement formulas are used.
inline double perturbative_epsilon_bound(double alpha) { return 0.1 * alpha * alpha * alpha; }

/// V' of the asymmetric N = 2 potential, built in product form.
inline Polynomial perturbed_n2_derivative(double alpha, double beta, double epsilon)
{
    const double a2 = alpha * alpha;
    const double s = a2 + beta * beta;
    Polynomial d = Polynomial{0.0, 6.0} * Polynomial{-a2, 0.0, 1.0} * Polynomial{-s, 0.0, 1.0};
    return d + Polynomial::monomial(2, 3.0 * epsilon);
}

/// x^6 + a x^4 + eps x^3 + c x^2.
inline Polynomial perturbed_n2_potential(double alpha, double beta, double epsilon)
{
    auto [a, c] = closed_form_n2(alpha, beta);
    return Polynomial{0.0, 0.0, c, epsilon, a, 0.0, 1.0};
}

inline PerturbedExtrema perturbed_extrema_n2(double alpha, double beta, double epsilon)
{
    if (!(alpha > 0) || !(beta > 0))
        throw std::invalid_argument("perturbed_extrema_n2: alpha, beta must be > 0");
    if (std::fabs(epsilon) > perturbative_epsilon_bound(alpha))
        throw std::invalid_argument(
            "perturbed_extrema_n2: |epsilon| exceeds 0.1 alpha^3; use critical_points on the "
            "perturbed polynomial directly");
    const double a2 = alpha * alpha;
    const double b2 = beta * beta;
    const double s = a2 + b2;

    PerturbedExtrema r{};
    r.epsilon = epsilon;
    r.p2 = r.q2 = r.u2 = r.v2 = 1.0 / (4.0 * b2);
    r.u2_correction = (b2 + 4.0 * a2) / (32.0 * alpha * b2 * b2 * b2);

    Polynomial d = perturbed_n2_derivative(alpha, beta, epsilon);
    const double bound = 2.0 * std::sqrt(s) + 1.0;
    for (const auto& root : real_roots(d, -bound, bound, 1e-15 * bound))
        r.stationary.push_back(root.x);
    if (r.stationary.size() != 5)
        throw numeric_error("perturbed_extrema_n2: expected five stationary points, found "
                            + std::to_string(r.stationary.size()));
    if (epsilon != 0.0) {
        const double rs = std::sqrt(s);
        r.p2_numeric = (-rs - r.stationary[0]) / epsilon;
        r.q2_numeric = (r.stationary[1] + alpha) / epsilon;
        r.u2_numeric = (r.stationary[3] - alpha) / epsilon;
        r.v2_numeric = (rs - r.stationary[4]) / epsilon;
    }
    return r;
}

} // namespace arnoldqc
