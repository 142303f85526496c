#ifndef ZCRIT_CHARGE_HPP
#define ZCRIT_CHARGE_HPP

#include "numring.hpp"
#include "polynomial.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zcrit {

/// Weights rho_0..rho_n of the powers of the Kähler class.
struct StabilityVector {
    std::vector<GaussianRational> rho;

    [[nodiscard]] int dimension() const { return static_cast<int>(rho.size()) - 1; }

    friend StabilityVector operator*(const Rational& t, StabilityVector v)
    {
        for (auto& r : v.rho)
            r *= GaussianRational(t);
        return v;
    }
};

struct StabilityVectorReport {
    bool ok = true;
    /// First violated condition: index n stands for Im(rho_n) > 0, index
    /// d < n for Im(rho_d / rho_{d+1}) > 0. Checked in the order n, 0, .., n-1.
    std::optional<int> violated_index;
    /// Set when rho_n is a positive real and the ratio conditions hold, i.e.
    /// rho is the limit of the valid vectors e^{i theta} rho as theta -> 0+.
    bool boundary_normalised = false;
};

inline StabilityVectorReport validate_stability_vector(const StabilityVector& v)
{
    StabilityVectorReport rep;
    const auto& rho = v.rho;
    if (rho.empty()) {
        rep.ok = false;
        rep.violated_index = 0;
        return rep;
    }
    int n = v.dimension();
    for (int d = 0; d <= n; ++d)
        if (rho[static_cast<std::size_t>(d)].is_zero()) {
            rep.ok = false;
            rep.violated_index = d;
            return rep;
        }

    std::optional<int> ratio_violation;
    for (int d = 0; d < n; ++d) {
        auto q = rho[static_cast<std::size_t>(d)] / rho[static_cast<std::size_t>(d) + 1];
        if (sgn(q.im) <= 0) {
            ratio_violation = d;
            break;
        }
    }

    const auto& top = rho.back();
    if (sgn(top.im) <= 0) {
        bool limit = sgn(top.im) == 0 && sgn(top.re) > 0 && !ratio_violation;
        if (!limit) {
            rep.ok = false;
            rep.violated_index = n;
            return rep;
        }
        rep.boundary_normalised = true;
    }
    if (ratio_violation) {
        rep.ok = false;
        rep.violated_index = ratio_violation;
    }
    return rep;
}

/// U = 1 + N with N of positive degree; real by construction.
struct UnipotentOperator {
    GradedClass u;

    UnipotentOperator() = default;
    explicit UnipotentOperator(GradedClass cls) : u(std::move(cls))
    {
        if (u.scalar_part() != 1)
            throw Error("unipotent operator must have degree-0 part equal to 1");
    }
    /// Degree-two component U_2.
    [[nodiscard]] GradedClass degree_two() const { return u.degree_part(1); }
};

/// ch_0..ch_n as a graded class; ch_0 is the (integer) rank.
struct ChernCharacter {
    GradedClass ch;

    ChernCharacter() = default;
    explicit ChernCharacter(GradedClass cls) : ch(std::move(cls))
    {
        if (ch.scalar_part().get_den() != 1)
            throw Error("rank (ch_0) must be an integer");
    }

    [[nodiscard]] Rational rank() const { return ch.scalar_part(); }
    [[nodiscard]] GradedClass c1() const { return ch.degree_part(1); }

    friend ChernCharacter operator+(const ChernCharacter& a, const ChernCharacter& b)
    {
        return ChernCharacter(a.ch + b.ch);
    }
    friend ChernCharacter operator-(const ChernCharacter& a, const ChernCharacter& b)
    {
        return ChernCharacter(a.ch - b.ch);
    }
    friend bool operator==(const ChernCharacter& a, const ChernCharacter& b) { return a.ch == b.ch; }
};

/// ch of the dual bundle: ch_j(E*) = (-1)^j ch_j(E).
inline ChernCharacter dual(const ChernCharacter& e)
{
    GradedClass out = e.ch * Rational(0);
    for (const auto& [j, v] : e.ch.components()) {
        GradedClass part = e.ch.degree_part(j);
        out += (j % 2 == 0) ? part : part * Rational(-1);
    }
    return ChernCharacter(out);
}

/// Z(k) = sum_d c_d k^d with Gaussian-rational coefficients.
using CentralChargePolynomial = Polynomial<GaussianRational>;

/// Everything needed to evaluate a polynomial central charge on a ring.
struct ChargeData {
    const NumericalRing* ring = nullptr;
    GradedClass omega;
    StabilityVector rho;
    UnipotentOperator U;
};

inline void check_charge_data(const NumericalRing& ring, const GradedClass& omega, const StabilityVector& rho,
    const UnipotentOperator& U)
{
    ring.check(omega);
    ring.check(U.u);
    for (const auto& [j, v] : omega.components())
        if (j != 1)
            throw Error("Kähler class must be of degree 2");
    if (rho.dimension() != ring.dimension())
        throw Error("stability vector length must be dim + 1 = " + std::to_string(ring.dimension() + 1));
    if (sgn(ring.integrate(ring.power(omega, ring.dimension()))) <= 0)
        throw Error("Kähler class has non-positive volume");
}

/// Coefficient of k^d is rho_d * int omega^d . ch . U.
inline CentralChargePolynomial central_charge(const NumericalRing& ring, const GradedClass& omega,
    const StabilityVector& rho, const UnipotentOperator& U, const ChernCharacter& ch)
{
    check_charge_data(ring, omega, rho, U);
    ring.check(ch.ch);
    GradedClass chU = ring.product(ch.ch, U.u);
    std::vector<GaussianRational> c;
    GradedClass wd = ring.one();
    for (int d = 0; d <= ring.dimension(); ++d) {
        c.push_back(rho.rho[static_cast<std::size_t>(d)] * GaussianRational(ring.integrate(ring.product(wd, chU))));
        wd = ring.product(wd, omega);
    }
    return CentralChargePolynomial(std::move(c));
}

inline CentralChargePolynomial central_charge(const ChargeData& data, const ChernCharacter& ch)
{
    return central_charge(*data.ring, data.omega, data.rho, data.U, ch);
}

/// [omega]^{n-1} . (c_1 + rk U_2).
inline Rational deg_U(const NumericalRing& ring, const GradedClass& omega, const UnipotentOperator& U,
    const ChernCharacter& ch)
{
    GradedClass twisted = ch.c1() + U.degree_two() * ch.rank();
    return ring.integrate(ring.product(ring.power(omega, ring.dimension() - 1), twisted));
}

enum class ChargePreset { dhym, todd };

/// rho_d = -(-i)^d / d!.
inline StabilityVector dhym_vector(int n)
{
    StabilityVector v;
    GaussianRational minus_i{Rational(0), Rational(-1)};
    GaussianRational p(1);
    Rational fact(1);
    for (int d = 0; d <= n; ++d) {
        if (d > 0)
            fact *= d;
        v.rho.push_back(-(p * GaussianRational(Rational(1) / fact)));
        p *= minus_i;
    }
    return v;
}

/// dhym: (rho, e^{-B}); todd: (rho, e^{-B} sqrt(Td)).
inline std::pair<StabilityVector, UnipotentOperator> charge_preset(ChargePreset preset, const NumericalRing& ring,
    const GradedClass& bfield)
{
    ring.check(bfield);
    for (const auto& [j, v] : bfield.components())
        if (j != 1)
            throw Error("B-field must be of degree 2");
    GradedClass u = ring.power_series_apply(Series::exp, bfield * Rational(-1));
    if (preset == ChargePreset::todd) {
        if (!ring.todd_class())
            throw Error("ring " + ring.name() + " carries no Todd class");
        u = ring.product(u, ring.power_series_apply(Series::sqrt, *ring.todd_class()));
    }
    return {dhym_vector(ring.dimension()), UnipotentOperator(std::move(u))};
}

inline ChargeData make_charge(ChargePreset preset, const NumericalRing& ring, const GradedClass& omega,
    const GradedClass& bfield)
{
    auto [rho, U] = charge_preset(preset, ring, bfield);
    check_charge_data(ring, omega, rho, U);
    return ChargeData{&ring, omega, std::move(rho), std::move(U)};
}

} // namespace zcrit

#endif // ZCRIT_CHARGE_HPP
