#ifndef ZCRIT_RATIONAL_HPP
#define ZCRIT_RATIONAL_HPP

#include <gmpxx.h>

#include <cctype>
#include <complex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zcrit {

/// Base error for everything the library rejects as malformed input.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Rational = mpq_class;

inline Rational make_rational(long num, unsigned long den = 1)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p", "p/q", "-p/q" or a plain decimal "0.125" exactly.
inline Rational parse_rational(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw Error("empty rational literal");
    if (s.front() == '+')
        s.erase(0, 1);

    auto dot = s.find('.');
    if (dot != std::string::npos) {
        if (s.find('/') != std::string::npos)
            throw Error("malformed rational literal '" + std::string(text) + "'");
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::string den = "1" + std::string(s.size() - dot - 1, '0');
        s = digits + "/" + den;
    }

    auto slash = s.find('/');
    auto valid_int = [](const std::string& t) {
        std::size_t i = (!t.empty() && t[0] == '-') ? 1 : 0;
        if (i >= t.size())
            return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i])))
                return false;
        return true;
    };
    Rational r;
    if (slash == std::string::npos) {
        if (!valid_int(s))
            throw Error("malformed rational literal '" + std::string(text) + "'");
        r = Rational(mpz_class(s, 10));
    } else {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!valid_int(num) || !valid_int(den) || den[0] == '-')
            throw Error("malformed rational literal '" + std::string(text) + "'");
        mpz_class d(den, 10);
        if (d == 0)
            throw Error("zero denominator in '" + std::string(text) + "'");
        r = Rational(mpz_class(num, 10), d);
    }
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r)
{
    return r.get_str(10);
}

inline int sign(const Rational& r)
{
    return sgn(r);
}

/// Complex number with exact rational parts.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)), im(0) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r), im(0) {}

    [[nodiscard]] bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    [[nodiscard]] bool is_real() const { return sgn(im) == 0; }
    [[nodiscard]] Rational norm2() const { return re * re + im * im; }
    [[nodiscard]] GaussianRational conj() const { return {re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o)
    {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o)
    {
        Rational d = o.norm2();
        if (sgn(d) == 0)
            throw std::domain_error("division by zero Gaussian rational");
        *this *= o.conj();
        re /= d;
        im /= d;
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b)
    {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    [[nodiscard]] std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

inline const GaussianRational kI{Rational(0), Rational(1)};

/// Renders "a", "bi", "a + bi" or "a - bi"; zero renders as "0".
inline std::string to_string(const GaussianRational& z)
{
    if (z.is_real())
        return to_string(z.re);
    std::string imag;
    Rational mag = abs(z.im);
    imag = (mag == 1) ? "i" : to_string(mag) + "i";
    if (sgn(z.re) == 0)
        return (sgn(z.im) < 0 ? "-" : "") + imag;
    return to_string(z.re) + (sgn(z.im) < 0 ? " - " : " + ") + imag;
}

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& z)
{
    return os << to_string(z);
}

} // namespace zcrit

#endif // ZCRIT_RATIONAL_HPP
