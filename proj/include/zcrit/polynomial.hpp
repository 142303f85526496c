#ifndef ZCRIT_POLYNOMIAL_HPP
#define ZCRIT_POLYNOMIAL_HPP

#include "rational.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

namespace zcrit {

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_zero(const GaussianRational& x) { return x.is_zero(); }

/// Dense univariate polynomial over an exact field, lowest degree first.
/// Trailing zero coefficients are always trimmed, so the zero polynomial
/// has an empty coefficient list and degree -1.
template <typename T>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

    static Polynomial constant(T v) { return Polynomial(std::vector<T>{std::move(v)}); }
    static Polynomial monomial(T v, std::size_t degree)
    {
        std::vector<T> c(degree + 1, T(0));
        c[degree] = std::move(v);
        return Polynomial(std::move(c));
    }

    [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] bool is_zero() const { return c_.empty(); }
    [[nodiscard]] const std::vector<T>& coefficients() const { return c_; }

    /// Coefficient of x^d; zero beyond the stored range.
    [[nodiscard]] T operator[](std::size_t d) const { return d < c_.size() ? c_[d] : T(0); }

    [[nodiscard]] const T& leading() const
    {
        if (c_.empty())
            throw std::domain_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    template <typename X>
    [[nodiscard]] X eval(const X& x) const
    {
        X acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc *= x;
            acc += X(*it);
        }
        return acc;
    }

    [[nodiscard]] Polynomial derivative() const
    {
        std::vector<T> d;
        for (std::size_t i = 1; i < c_.size(); ++i)
            d.push_back(c_[i] * T(static_cast<long>(i)));
        return Polynomial(std::move(d));
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), T(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), T(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    Polynomial& operator*=(const T& s)
    {
        for (auto& x : c_)
            x *= s;
        trim();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(const Polynomial& a)
    {
        Polynomial r = a;
        for (auto& x : r.c_)
            x = -x;
        return r;
    }
    friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
    friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// Euclidean division; returns {quotient, remainder}.
    [[nodiscard]] std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const
    {
        if (d.is_zero())
            throw std::domain_error("polynomial division by zero");
        std::vector<T> rem = c_;
        int dd = d.degree();
        if (degree() < dd)
            return {Polynomial{}, *this};
        std::vector<T> quo(static_cast<std::size_t>(degree() - dd + 1), T(0));
        const T& lc = d.leading();
        for (int k = degree() - dd; k >= 0; --k) {
            T f = rem[static_cast<std::size_t>(k + dd)] / lc;
            quo[static_cast<std::size_t>(k)] = f;
            if (zcrit::is_zero(f))
                continue;
            for (int j = 0; j <= dd; ++j)
                rem[static_cast<std::size_t>(k + j)] -= f * d.c_[static_cast<std::size_t>(j)];
        }
        rem.resize(static_cast<std::size_t>(dd));
        return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
    }

    [[nodiscard]] Polynomial monic() const
    {
        if (is_zero())
            return {};
        return *this * (T(1) / leading());
    }

private:
    void trim()
    {
        while (!c_.empty() && zcrit::is_zero(c_.back()))
            c_.pop_back();
    }

    std::vector<T> c_;
};

/// Monic greatest common divisor (zero if both inputs are zero).
template <typename T>
Polynomial<T> gcd(Polynomial<T> a, Polynomial<T> b)
{
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// p / gcd(p, p'), monic.
template <typename T>
Polynomial<T> square_free_part(const Polynomial<T>& p)
{
    if (p.degree() <= 0)
        return p.monic();
    auto g = gcd(p, p.derivative());
    return p.divmod(g).first.monic();
}

using RationalPolynomial = Polynomial<Rational>;

/// Real and imaginary parts of a Gaussian-rational polynomial.
inline RationalPolynomial real_part(const Polynomial<GaussianRational>& p)
{
    std::vector<Rational> c;
    for (const auto& z : p.coefficients())
        c.push_back(z.re);
    return RationalPolynomial(std::move(c));
}

inline RationalPolynomial imag_part(const Polynomial<GaussianRational>& p)
{
    std::vector<Rational> c;
    for (const auto& z : p.coefficients())
        c.push_back(z.im);
    return RationalPolynomial(std::move(c));
}

inline Polynomial<GaussianRational> conj(const Polynomial<GaussianRational>& p)
{
    std::vector<GaussianRational> c;
    for (const auto& z : p.coefficients())
        c.push_back(z.conj());
    return Polynomial<GaussianRational>(std::move(c));
}

/// Exact Lagrange interpolation through (xs[i], ys[i]); xs must be distinct.
template <typename T>
Polynomial<T> interpolate(const std::vector<Rational>& xs, const std::vector<T>& ys)
{
    if (xs.size() != ys.size())
        throw std::invalid_argument("interpolate: size mismatch");
    Polynomial<T> result;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Polynomial<T> basis = Polynomial<T>::constant(T(1));
        Rational denom(1);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j == i)
                continue;
            basis = basis * Polynomial<T>{T(Rational(-xs[j])), T(1)};
            denom *= xs[i] - xs[j];
        }
        if (sgn(denom) == 0)
            throw std::invalid_argument("interpolate: repeated abscissa");
        Rational inv = 1 / denom;
        result += basis * (ys[i] * T(inv));
    }
    return result;
}

} // namespace zcrit

#endif // ZCRIT_POLYNOMIAL_HPP
