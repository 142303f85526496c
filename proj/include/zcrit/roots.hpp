#ifndef ZCRIT_ROOTS_HPP
#define ZCRIT_ROOTS_HPP

// Exact real-root isolation for rational polynomials: Sturm sequences,
// bisection on the square-free part, and exact detection of rational roots.

#include "polynomial.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace zcrit {

/// A real root: exact when lo == hi, otherwise the unique root of the
/// isolating polynomial inside the open interval (lo, hi).
struct RealRoot {
    Rational lo;
    Rational hi;
    bool exact = false;

    [[nodiscard]] Rational midpoint() const { return exact ? lo : Rational((lo + hi) / 2); }
    [[nodiscard]] Rational width() const { return hi - lo; }
};

inline int sign_at(const RationalPolynomial& p, const Rational& x)
{
    return sgn(p.eval(x));
}

class SturmSequence {
public:
    explicit SturmSequence(const RationalPolynomial& square_free)
    {
        seq_.push_back(square_free);
        if (square_free.degree() <= 0)
            return;
        seq_.push_back(square_free.derivative());
        while (seq_.back().degree() > 0) {
            auto r = seq_[seq_.size() - 2].divmod(seq_.back()).second;
            if (r.is_zero())
                break;
            seq_.push_back(-r);
        }
    }

    [[nodiscard]] int variations(const Rational& x) const
    {
        int count = 0;
        int last = 0;
        for (const auto& p : seq_) {
            int s = sign_at(p, x);
            if (s == 0)
                continue;
            if (last != 0 && s != last)
                ++count;
            last = s;
        }
        return count;
    }

    /// Distinct roots in the open interval (a, b); a and b must not be roots.
    [[nodiscard]] int count(const Rational& a, const Rational& b) const { return variations(a) - variations(b); }

    [[nodiscard]] const RationalPolynomial& base() const { return seq_.front(); }

private:
    std::vector<RationalPolynomial> seq_;
};

/// Simplest rational (least denominator) in the open interval (lo, hi).
inline Rational simplest_rational_between(const Rational& lo, const Rational& hi)
{
    if (sgn(lo) < 0 && sgn(hi) > 0)
        return Rational(0);
    if (sgn(hi) <= 0)
        return -simplest_rational_between(-hi, -lo);

    // 0 <= lo < hi; continued-fraction descent with an optional infinite upper end.
    struct Descent {
        static Rational run(const Rational& l, const std::optional<Rational>& h)
        {
            mpz_class fl;
            mpz_fdiv_q(fl.get_mpz_t(), l.get_num_mpz_t(), l.get_den_mpz_t());
            Rational next(fl + 1);
            if (!h || next < *h)
                return next;
            Rational frac_lo = l - Rational(fl);
            Rational frac_hi = *h - Rational(fl);
            std::optional<Rational> inv_hi;
            if (sgn(frac_lo) > 0)
                inv_hi = Rational(1) / frac_lo;
            Rational r = Rational(fl) + Rational(1) / run(Rational(1) / frac_hi, inv_hi);
            return r;
        }
    };
    return Descent::run(lo, hi);
}

/// Upper bound on the absolute value of every root.
inline Rational cauchy_bound(const RationalPolynomial& p)
{
    Rational m(0);
    const auto& c = p.coefficients();
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        Rational r = abs(c[i] / p.leading());
        if (r > m)
            m = r;
    }
    return m + 1;
}

/// Largest absolute leading coefficient of the primitive integer multiple of p.
inline mpz_class primitive_leading(const RationalPolynomial& p)
{
    mpz_class l(1);
    for (const auto& x : p.coefficients())
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    mpz_class g(0);
    for (const auto& x : p.coefficients()) {
        mpz_class v = x.get_num() * (l / x.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    mpz_class lc = p.leading().get_num() * (l / p.leading().get_den());
    return abs(lc / g);
}

class RootIsolator {
public:
    /// `p` need not be square-free; roots are reported once each.
    explicit RootIsolator(const RationalPolynomial& p)
        : sf_(square_free_part(p)), sturm_(sf_), lead_(sf_.degree() > 0 ? primitive_leading(sf_) : mpz_class(1))
    {
        Rational d(lead_);
        rational_width_ = Rational(1) / (2 * d * d);
    }

    [[nodiscard]] const RationalPolynomial& square_free() const { return sf_; }
    [[nodiscard]] const SturmSequence& sturm() const { return sturm_; }

    /// All real roots, ordered, with non-exact enclosures narrower than `width`.
    [[nodiscard]] std::vector<RealRoot> all_roots(const Rational& width) const
    {
        std::vector<RealRoot> out;
        if (sf_.degree() <= 0)
            return out;
        Rational b = cauchy_bound(sf_);
        isolate(-b, b, out);
        std::sort(out.begin(), out.end(), [](const RealRoot& x, const RealRoot& y) { return x.lo < y.lo; });
        for (auto& r : out)
            finish(r, width);
        return out;
    }

    /// Real roots in the closed interval [a, b].
    [[nodiscard]] std::vector<RealRoot> roots_in(const Rational& a, const Rational& b, const Rational& width) const
    {
        std::vector<RealRoot> kept;
        for (auto r : all_roots(width)) {
            if (r.exact) {
                if (r.lo >= a && r.lo <= b)
                    kept.push_back(r);
                continue;
            }
            // Irrational root; a and b are rational so never equal to it.
            while ((r.lo < a && a < r.hi) || (r.lo < b && b < r.hi))
                bisect(r);
            if (r.lo >= a && r.hi <= b)
                kept.push_back(r);
        }
        return kept;
    }

    /// Halves a non-exact enclosure, keeping the root inside.
    void bisect(RealRoot& r) const
    {
        if (r.exact)
            return;
        Rational mid = (r.lo + r.hi) / 2;
        int sm = sign_at(sf_, mid);
        if (sm == 0) {
            r.lo = r.hi = mid;
            r.exact = true;
            return;
        }
        if (sign_at(sf_, r.lo) == sm)
            r.lo = mid;
        else
            r.hi = mid;
    }

    /// Sign of q at the root r (refines r as needed).
    [[nodiscard]] int sign_of(const RationalPolynomial& q, RealRoot& r) const
    {
        if (q.is_zero())
            return 0;
        if (r.exact)
            return sign_at(q, r.lo);
        auto g = gcd(q, sf_);
        if (g.degree() >= 1) {
            SturmSequence sg(g);
            if (sg.count(r.lo, r.hi) > 0)
                return 0;
        }
        auto qsf = square_free_part(q);
        SturmSequence sq(qsf);
        for (;;) {
            bool endpoint_root = sign_at(qsf, r.lo) == 0 || sign_at(qsf, r.hi) == 0;
            if (!endpoint_root && sq.count(r.lo, r.hi) == 0)
                break;
            bisect(r);
            if (r.exact)
                return sign_at(q, r.lo);
        }
        return sign_at(q, r.midpoint());
    }

private:
    void isolate(const Rational& lo, const Rational& hi, std::vector<RealRoot>& out) const
    {
        int c = sturm_.count(lo, hi);
        if (c == 0)
            return;
        if (c == 1) {
            out.push_back(RealRoot{lo, hi, false});
            return;
        }
        Rational mid = (lo + hi) / 2;
        if (sign_at(sf_, mid) != 0) {
            isolate(lo, mid, out);
            isolate(mid, hi, out);
            return;
        }
        out.push_back(RealRoot{mid, mid, true});
        Rational delta = (hi - lo) / 4;
        for (;;) {
            Rational l = mid - delta, h = mid + delta;
            if (sign_at(sf_, l) != 0 && sign_at(sf_, h) != 0 && sturm_.count(l, h) == 1) {
                isolate(lo, l, out);
                isolate(h, hi, out);
                return;
            }
            delta /= 2;
        }
    }

    void finish(RealRoot& r, const Rational& width) const
    {
        while (!r.exact && r.width() >= rational_width_)
            bisect(r);
        if (!r.exact) {
            Rational cand = simplest_rational_between(r.lo, r.hi);
            if (sign_at(sf_, cand) == 0) {
                r.lo = r.hi = cand;
                r.exact = true;
                return;
            }
        }
        while (!r.exact && r.width() >= width)
            bisect(r);
    }

    RationalPolynomial sf_;
    SturmSequence sturm_;
    mpz_class lead_;
    Rational rational_width_;
};

} // namespace zcrit

#endif // ZCRIT_ROOTS_HPP
