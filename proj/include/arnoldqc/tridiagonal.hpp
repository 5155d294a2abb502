#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "arnoldqc/error.hpp"

namespace arnoldqc {

/// Real symmetric tridiagonal matrix: diagonal d (n) and off-diagonal e (n-1).
class SymmetricTridiagonal
{
public:
    SymmetricTridiagonal(std::vector<double> diag, std::vector<double> off)
        : d_(std::move(diag)), e_(std::move(off))
    {
        if (d_.empty() || e_.size() + 1 != d_.size())
            throw std::invalid_argument("SymmetricTridiagonal: need n diagonal and n-1 off-diagonal entries");
        double emax = 0.0;
        for (double v : e_)
            emax = std::max(emax, v * v);
        pivmin_ = DBL_MIN * std::max(1.0, emax);
        lo_ = d_[0];
        hi_ = d_[0];
        for (std::size_t i = 0; i < d_.size(); ++i) {
            double r = (i > 0 ? std::fabs(e_[i - 1]) : 0.0) + (i + 1 < d_.size() ? std::fabs(e_[i]) : 0.0);
            lo_ = std::min(lo_, d_[i] - r);
            hi_ = std::max(hi_, d_[i] + r);
        }
        norm_ = std::max(std::fabs(lo_), std::fabs(hi_));
    }

    std::size_t size() const { return d_.size(); }
    const std::vector<double>& diag() const { return d_; }
    const std::vector<double>& off() const { return e_; }
    double norm_bound() const { return norm_; }

    /// Number of eigenvalues strictly below x (Sturm count from the LDL^T pivots).
    std::size_t count_below(double x) const
    {
        std::size_t count = 0;
        double q = d_[0] - x;
        if (std::fabs(q) < pivmin_)
            q = -pivmin_;
        if (q < 0)
            ++count;
        for (std::size_t i = 1; i < d_.size(); ++i) {
            q = d_[i] - x - e_[i - 1] * e_[i - 1] / q;
            if (std::fabs(q) < pivmin_)
                q = -pivmin_;
            if (q < 0)
                ++count;
        }
        return count;
    }

    /// k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
    double eigenvalue(std::size_t k) const
    {
        if (k >= d_.size())
            throw std::invalid_argument("SymmetricTridiagonal::eigenvalue: index out of range");
        double lo = lo_ - 2 * DBL_EPSILON * norm_ - pivmin_;
        double hi = hi_ + 2 * DBL_EPSILON * norm_ + pivmin_;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (hi - lo <= 2 * DBL_EPSILON * std::max(std::fabs(lo), std::fabs(hi)) + pivmin_ || mid <= lo
                || mid >= hi)
                break;
            if (count_below(mid) > k)
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    }

    /// y = A x.
    std::vector<double> multiply(std::span<const double> x) const
    {
        const std::size_t n = d_.size();
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double v = d_[i] * x[i];
            if (i > 0)
                v += e_[i - 1] * x[i - 1];
            if (i + 1 < n)
                v += e_[i] * x[i + 1];
            y[i] = v;
        }
        return y;
    }

private:
    std::vector<double> d_;
    std::vector<double> e_;
    double pivmin_ = 0;
    double lo_ = 0;
    double hi_ = 0;
    double norm_ = 0;
};

namespace detail {

/// LU with partial pivoting of A - shift I, reused across inverse-iteration sweeps.
class ShiftedTridiagonalLU
{
public:
    ShiftedTridiagonalLU(const SymmetricTridiagonal& a, double shift)
    {
        const std::size_t n = a.size();
        d_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            d_[i] = a.diag()[i] - shift;
        dl_ = a.off();
        du_ = a.off();
        du2_.assign(n > 2 ? n - 2 : 0, 0.0);
        swapped_.assign(n > 1 ? n - 1 : 0, false);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::fabs(d_[i]) >= std::fabs(dl_[i])) {
                double f = d_[i] != 0.0 ? dl_[i] / d_[i] : 0.0;
                dl_[i] = f;
                d_[i + 1] -= f * du_[i];
            } else {
                double f = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = f;
                double t = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = t - f * d_[i + 1];
                if (i + 2 < n) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -f * du_[i + 1];
                }
                swapped_[i] = true;
            }
        }
        // Exactly singular pivots are nudged, as the shift is an eigenvalue.
        const double tiny = DBL_EPSILON * std::max(1.0, a.norm_bound());
        for (double& v : d_)
            if (std::fabs(v) < tiny)
                v = v < 0 ? -tiny : tiny;
    }

    void solve(std::vector<double>& b) const
    {
        const std::size_t n = d_.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (swapped_[i])
                std::swap(b[i], b[i + 1]);
            b[i + 1] -= dl_[i] * b[i];
        }
        b[n - 1] /= d_[n - 1];
        if (n > 1)
            b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
        for (std::size_t i = n >= 3 ? n - 2 : 0; i-- > 0;)
            b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }

private:
    std::vector<double> d_, dl_, du_, du2_;
    std::vector<bool> swapped_;
};

inline double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

} // namespace detail

struct TridiagonalEigenpairs
{
    std::vector<double> values;
    /// Unit 2-norm eigenvectors; the largest-magnitude component is positive.
    std::vector<std::vector<double>> vectors;
};

/// Lowest `count` eigenpairs: eigenvalues by Sturm bisection, eigenvectors by
/// inverse iteration with re-orthogonalization inside eigenvalue clusters.
inline TridiagonalEigenpairs lowest_eigenpairs(const SymmetricTridiagonal& a, std::size_t count)
{
    const std::size_t n = a.size();
    if (count > n)
        throw std::invalid_argument("lowest_eigenpairs: requested " + std::to_string(count)
                                    + " levels from a matrix of order " + std::to_string(n));
    TridiagonalEigenpairs out;
    const double anorm = a.norm_bound();
    const double cluster_tol = 1e-3 * anorm;
    const double residual_tol = 100.0 * std::sqrt(static_cast<double>(n)) * DBL_EPSILON * std::max(1.0, anorm);

    std::mt19937_64 rng(20200417);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    for (std::size_t k = 0; k < count; ++k) {
        double lam = a.eigenvalue(k);
        // Separate coincident eigenvalues so the shifted solves differ.
        if (k > 0) {
            double sep = 10.0 * DBL_EPSILON * std::max(std::fabs(lam), 1.0);
            if (lam - out.values.back() < sep)
                lam = out.values.back() + sep;
        }
        detail::ShiftedTridiagonalLU lu(a, lam);

        std::vector<double> v(n);
        for (double& x : v)
            x = uni(rng);
        double nv = detail::norm2(v);
        for (double& x : v)
            x /= nv;

        double residual = 0.0;
        bool converged = false;
        for (int it = 0; it < 10 && !converged; ++it) {
            lu.solve(v);
            for (std::size_t j = 0; j < k; ++j) {
                if (std::fabs(out.values[j] - lam) > cluster_tol)
                    continue;
                double c = detail::dot(v, out.vectors[j]);
                for (std::size_t i = 0; i < n; ++i)
                    v[i] -= c * out.vectors[j][i];
            }
            nv = detail::norm2(v);
            if (!(nv > 0) || !std::isfinite(nv))
                throw convergence_error("lowest_eigenpairs: inverse iteration broke down at level "
                                        + std::to_string(k));
            for (double& x : v)
                x /= nv;
            if (it >= 1) {
                auto av = a.multiply(v);
                double r2 = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    r2 += (av[i] - lam * v[i]) * (av[i] - lam * v[i]);
                residual = std::sqrt(r2);
                converged = residual <= residual_tol;
            }
        }
        if (!converged)
            throw convergence_error("lowest_eigenpairs: inverse iteration for level " + std::to_string(k)
                                    + " stalled, residual " + std::to_string(residual) + " > "
                                    + std::to_string(residual_tol));
        auto big = std::max_element(v.begin(), v.end(), [](double x, double y) { return std::fabs(x) < std::fabs(y); });
        if (*big < 0)
            for (double& x : v)
                x = -x;
        out.values.push_back(lam);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

} // namespace arnoldqc
