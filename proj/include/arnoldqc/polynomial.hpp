#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace arnoldqc {

/// Real polynomial with coefficients stored ascending by power:
/// coeffs()[k] multiplies x^k. Trailing zeros are stripped on construction,
/// the zero polynomial is held as {0}.
class Polynomial
{
public:
    Polynomial() : coeffs_{0.0} {}

    Polynomial(std::initializer_list<double> c) : Polynomial(std::vector<double>(c)) {}

    explicit Polynomial(std::vector<double> c) : coeffs_(std::move(c))
    {
        for (double v : coeffs_)
            if (!std::isfinite(v))
                throw std::invalid_argument("Polynomial: non-finite coefficient");
        normalize();
    }

    static Polynomial monomial(std::size_t power, double coeff = 1.0)
    {
        std::vector<double> c(power + 1, 0.0);
        c[power] = coeff;
        return Polynomial(std::move(c));
    }

    /// Builds from coefficients listed highest power first.
    static Polynomial from_descending(std::vector<double> c)
    {
        std::reverse(c.begin(), c.end());
        return Polynomial(std::move(c));
    }

    std::size_t degree() const { return coeffs_.size() - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double leading() const { return coeffs_.back(); }

    double operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

    /// Horner evaluation.
    double operator()(double x) const
    {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }

    /// True when every odd-power coefficient is exactly zero.
    bool is_even() const
    {
        for (std::size_t k = 1; k < coeffs_.size(); k += 2)
            if (coeffs_[k] != 0.0)
                return false;
        return true;
    }

    /// Sum of |c_k| |x|^k; the natural magnitude against which rounding in
    /// evaluate(x) is judged.
    double magnitude_at(double x) const
    {
        double acc = 0.0;
        double ax = std::fabs(x);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * ax + std::fabs(*it);
        return acc;
    }

    double max_abs_coeff() const
    {
        double m = 0.0;
        for (double v : coeffs_)
            m = std::max(m, std::fabs(v));
        return m;
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.coeffs_.size() > coeffs_.size())
            coeffs_.resize(o.coeffs_.size(), 0.0);
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k)
            coeffs_[k] += o.coeffs_[k];
        normalize();
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) { return *this += o * -1.0; }

    Polynomial& operator*=(double s)
    {
        for (double& v : coeffs_)
            v *= s;
        normalize();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(c));
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void normalize()
    {
        if (coeffs_.empty())
            coeffs_.push_back(0.0);
        while (coeffs_.size() > 1 && coeffs_.back() == 0.0)
            coeffs_.pop_back();
    }

    std::vector<double> coeffs_;
};

inline double evaluate(const Polynomial& p, double x) { return p(x); }

inline Polynomial derivative(const Polynomial& p)
{
    const auto& c = p.coeffs();
    if (c.size() == 1)
        return Polynomial{};
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k)
        d[k - 1] = static_cast<double>(k) * c[k];
    return Polynomial(std::move(d));
}

/// Integration constant fixed so that the result vanishes at x = 0.
inline Polynomial antiderivative(const Polynomial& p)
{
    if (p.is_zero())
        return Polynomial{};
    const auto& c = p.coeffs();
    std::vector<double> a(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k)
        a[k + 1] = c[k] / static_cast<double>(k + 1);
    return Polynomial(std::move(a));
}

struct EvenOddParts
{
    Polynomial even;
    Polynomial odd;
};

inline EvenOddParts even_odd_split(const Polynomial& p)
{
    std::vector<double> e(p.coeffs().size(), 0.0);
    std::vector<double> o(p.coeffs().size(), 0.0);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k)
        (k % 2 == 0 ? e : o)[k] = p.coeffs()[k];
    return {Polynomial(std::move(e)), Polynomial(std::move(o))};
}

/// Quotient and remainder of a / b. Throws on division by the zero polynomial.
inline std::pair<Polynomial, Polynomial> divide(const Polynomial& a, const Polynomial& b)
{
    if (b.is_zero())
        throw std::invalid_argument("divide: zero divisor");
    if (a.degree() < b.degree())
        return {Polynomial{}, a};
    std::vector<double> r = a.coeffs();
    const auto& d = b.coeffs();
    std::size_t db = b.degree();
    std::vector<double> q(a.degree() - db + 1, 0.0);
    for (std::size_t k = q.size(); k-- > 0;) {
        double f = r[k + db] / d[db];
        q[k] = f;
        for (std::size_t j = 0; j <= db; ++j)
            r[k + j] -= f * d[j];
        r[k + db] = 0.0;
    }
    r.resize(db == 0 ? 1 : db);
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

inline std::string to_string(const Polynomial& p)
{
    std::string s;
    const auto& c = p.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) {
        if (c[k] == 0.0 && !(p.is_zero() && k == 0))
            continue;
        if (!s.empty())
            s += c[k] < 0 ? " - " : " + ";
        else if (c[k] < 0)
            s += "-";
        s += std::to_string(std::fabs(c[k]));
        if (k >= 1)
            s += "x";
        if (k >= 2)
            s += "^" + std::to_string(k);
    }
    return s;
}

} // namespace arnoldqc
