#pragma once

#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "arnoldqc/error.hpp"
#include "arnoldqc/polynomial.hpp"

namespace arnoldqc {

/// Sturm chain p, p', -rem(p, p'), ... with every member scaled to unit
/// max-norm. A remainder whose norm falls below `zero_threshold` relative to
/// its dividend ends the chain, so the last member plays the role of gcd(p, p').
class SturmSequence
{
public:
    explicit SturmSequence(const Polynomial& p, double zero_threshold = 64 * DBL_EPSILON)
    {
        if (p.is_zero())
            throw std::invalid_argument("SturmSequence: zero polynomial");
        chain_.push_back(scaled(p));
        if (p.degree() == 0)
            return;
        chain_.push_back(scaled(derivative(p)));
        while (chain_.back().degree() > 0) {
            const Polynomial& a = chain_[chain_.size() - 2];
            const Polynomial& b = chain_.back();
            Polynomial r = divide(a, b).second;
            if (r.max_abs_coeff() <= zero_threshold * a.max_abs_coeff())
                break;
            chain_.push_back(scaled(r * -1.0));
        }
    }

    /// Number of sign changes along the chain at x, zeros skipped.
    int variations(double x) const
    {
        int changes = 0;
        int last = 0;
        for (const auto& q : chain_) {
            double v = q(x);
            int s = (v > 0) - (v < 0);
            if (s == 0)
                continue;
            if (last != 0 && s != last)
                ++changes;
            last = s;
        }
        return changes;
    }

    /// Distinct real roots in the half-open interval (a, b].
    int count(double a, double b) const { return variations(a) - variations(b); }

    const std::vector<Polynomial>& chain() const { return chain_; }

private:
    static Polynomial scaled(const Polynomial& q)
    {
        double m = q.max_abs_coeff();
        return m > 0 ? q * (1.0 / m) : q;
    }

    std::vector<Polynomial> chain_;
};

struct RealRoot
{
    double x;
    /// Set when p' also vanishes within tol of x (or p does not change sign
    /// across it): the root is multiple or a cluster unresolved at tol.
    bool near_multiple = false;
};

namespace detail {

class RootIsolator
{
public:
    RootIsolator(const Polynomial& p, double tol, int max_depth)
        : p_(p), sturm_(p), dsturm_(p.degree() > 0 ? derivative(p) : Polynomial{1.0}), tol_(tol),
          max_depth_(max_depth)
    {
    }

    std::vector<RealRoot> run(double lo, double hi)
    {
        if (p_.degree() == 0)
            return {};
        // (a, b] convention: widen slightly so a root sitting on lo is kept.
        double a = lo - 0.25 * tol_;
        isolate(a, hi, sturm_.variations(a), sturm_.variations(hi), 0);
        return std::move(roots_);
    }

private:
    void isolate(double a, double b, int va, int vb, int depth)
    {
        int k = va - vb;
        if (k <= 0)
            return;
        if (k == 1) {
            roots_.push_back(refine(a, b));
            return;
        }
        double m = 0.5 * (a + b);
        if (b - a <= tol_ || m <= a || m >= b) {
            roots_.push_back({m, true});
            return;
        }
        if (depth >= max_depth_)
            throw numeric_error("real_roots: subdivision depth exceeded before isolating roots");
        int vm = sturm_.variations(m);
        isolate(a, m, va, vm, depth + 1);
        isolate(m, b, vm, vb, depth + 1);
    }

    RealRoot refine(double a, double b) const
    {
        double fa = p_(a);
        double fb = p_(b);
        if (fb == 0.0)
            return finish(b, false);
        if ((fa < 0) != (fb < 0) && fa != 0.0) {
            while (b - a > tol_) {
                double m = 0.5 * (a + b);
                if (m <= a || m >= b)
                    break;
                double fm = p_(m);
                if (fm == 0.0)
                    return finish(m, false);
                if ((fm < 0) == (fa < 0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            return finish(0.5 * (a + b), false);
        }
        // No sign change: even multiplicity. Bisect on the Sturm count instead.
        while (b - a > tol_) {
            double m = 0.5 * (a + b);
            if (m <= a || m >= b)
                break;
            if (sturm_.count(a, m) >= 1)
                b = m;
            else
                a = m;
        }
        return finish(0.5 * (a + b), true);
    }

    RealRoot finish(double x, bool flagged) const
    {
        if (!flagged && p_.degree() >= 2)
            flagged = dsturm_.count(x - tol_, x + tol_) > 0;
        return {x, flagged};
    }

    const Polynomial& p_;
    SturmSequence sturm_;
    SturmSequence dsturm_;
    double tol_;
    int max_depth_;
    std::vector<RealRoot> roots_;
};

} // namespace detail

/// All distinct real roots of p in [lo, hi], ascending, each within tol.
/// Isolation by Sturm-count subdivision, refinement by bisection.
inline std::vector<RealRoot> real_roots(const Polynomial& p, double lo, double hi, double tol,
                                        int max_depth = 200)
{
    if (!(lo < hi))
        throw std::invalid_argument("real_roots: require lo < hi");
    if (!(tol > 0))
        throw std::invalid_argument("real_roots: require tol > 0");
    if (p.is_zero())
        throw std::invalid_argument("real_roots: zero polynomial has no isolated roots");
    return detail::RootIsolator(p, tol, max_depth).run(lo, hi);
}

/// Cauchy bound: every real root of p satisfies |x| < cauchy_bound(p).
inline double cauchy_bound(const Polynomial& p)
{
    double lead = std::fabs(p.leading());
    double m = 0.0;
    for (std::size_t k = 0; k < p.degree(); ++k)
        m = std::max(m, std::fabs(p[k]) / lead);
    return 1.0 + m;
}

} // namespace arnoldqc
