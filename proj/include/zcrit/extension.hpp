#ifndef ZCRIT_EXTENSION_HPP
#define ZCRIT_EXTENSION_HPP

// Discrepancy profiles of quotients and the positive tau-system attached to
// the extension graph of a filtration.

#include "lp.hpp"
#include "stability.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zcrit {

/// Series of Im(Z_Q(k) / Z_E(k)) in w = 1/k.
struct AbsCriticalProfile {
    std::vector<Rational> coefficients; // w^0 .. w^{max_order}
    std::optional<int> order;           // first nonzero, k-convention
    Rational value;                     // coefficient at `order`
    [[nodiscard]] std::optional<int> epsilon_order() const
    {
        if (!order)
            return std::nullopt;
        return 2 * *order;
    }
    [[nodiscard]] bool all_zero() const { return !order; }
};

/// Expands Z_Q/Z_E by exact division in w to order `max_order` (default 2n).
inline AbsCriticalProfile abs_critical_profile(const CentralChargePolynomial& zq, const CentralChargePolynomial& ze,
    int n, int max_order = -1)
{
    if (ze.degree() != n)
        throw Error("abs_critical_profile: Z(E) must have degree n in k");
    if (zq.degree() > n)
        throw Error("abs_critical_profile: Z(Q) has degree above n");
    if (max_order < 0)
        max_order = 2 * n;
    auto rev = [n](const CentralChargePolynomial& z, int j) {
        return j <= n ? z[static_cast<std::size_t>(n - j)] : GaussianRational(0);
    };
    // a(w) = Z_Q(1/w) w^n, e(w) = Z_E(1/w) w^n, s = a / e.
    std::vector<GaussianRational> s;
    GaussianRational inv_e0 = GaussianRational(1) / ze.leading();
    for (int j = 0; j <= max_order; ++j) {
        GaussianRational acc = rev(zq, j);
        for (int i = 1; i <= j; ++i)
            acc -= rev(ze, i) * s[static_cast<std::size_t>(j - i)];
        s.push_back(acc * inv_e0);
    }
    AbsCriticalProfile prof;
    for (const auto& c : s) {
        prof.coefficients.push_back(c.im);
        if (!prof.order && sgn(c.im) != 0) {
            prof.order = static_cast<int>(prof.coefficients.size()) - 1;
            prof.value = c.im;
        }
    }
    return prof;
}

struct FiltrationQuotient {
    std::string name;
    CentralChargePolynomial charge;
};

struct FiltrationEdge {
    int u = 0; // 0-based, u < v
    int v = 0;
    std::optional<int> order; // per-edge discrepancy order, must equal the graph's
};

struct FiltrationGraph {
    std::vector<FiltrationQuotient> quotients;
    std::vector<FiltrationEdge> edges;
    int q = 1;

    [[nodiscard]] CentralChargePolynomial total_charge() const
    {
        CentralChargePolynomial z;
        for (const auto& x : quotients)
            z += x.charge;
        return z;
    }
};

inline void check_graph(const FiltrationGraph& g)
{
    auto m = static_cast<int>(g.quotients.size());
    if (m == 0)
        throw Error("filtration graph has no quotients");
    if (g.q < 0)
        throw Error("discrepancy order must be non-negative");
    std::vector<int> touched(static_cast<std::size_t>(m), 0);
    for (const auto& e : g.edges) {
        if (e.u < 0 || e.v >= m || e.u >= e.v)
            throw Error("edge (" + std::to_string(e.u + 1) + "," + std::to_string(e.v + 1) + ") must satisfy u < v");
        if (e.order && *e.order != g.q)
            throw Error("edge orders must all equal q = " + std::to_string(g.q));
        touched[static_cast<std::size_t>(e.u)] = touched[static_cast<std::size_t>(e.v)] = 1;
    }
    if (m > 1)
        for (int i = 0; i < m; ++i)
            if (!touched[static_cast<std::size_t>(i)])
                throw Error("quotient '" + g.quotients[static_cast<std::size_t>(i)].name + "' touches no edge");
}

/// Row i: b_i + sum_l a_il tau_l = 0.
struct TauSystem {
    RationalMatrix a;
    std::vector<Rational> b;
    int q = 1;
    [[nodiscard]] std::size_t rows() const { return b.size(); }
    [[nodiscard]] std::size_t columns() const { return a.empty() ? 0 : a.front().size(); }
};

/// b_i is the order-q coefficient of Im(Z(Q_i)/Z(E)); this is the order-2q
/// epsilon coefficient of Im(e^{-i phi} Z(Q_i)) up to the common positive factor |Z(E)|.
inline TauSystem assemble_tau_system(const FiltrationGraph& g, int n)
{
    check_graph(g);
    auto ze = g.total_charge();
    TauSystem sys;
    sys.q = g.q;
    for (const auto& x : g.quotients) {
        auto prof = abs_critical_profile(x.charge, ze, n, g.q);
        if (prof.order && *prof.order < g.q)
            throw Error("quotient '" + x.name + "' is discrepant at order " + std::to_string(*prof.order) +
                " < q = " + std::to_string(g.q));
        sys.b.push_back(prof.coefficients[static_cast<std::size_t>(g.q)]);
        std::vector<Rational> row(g.edges.size(), Rational(0));
        sys.a.push_back(std::move(row));
    }
    for (std::size_t l = 0; l < g.edges.size(); ++l) {
        sys.a[static_cast<std::size_t>(g.edges[l].u)][l] += 1;
        sys.a[static_cast<std::size_t>(g.edges[l].v)][l] -= 1;
    }
    return sys;
}

struct TauSolution {
    bool feasible = false;
    std::vector<Rational> tau;  // every entry >= delta > 0
    Rational delta;             // maximal common lower bound
    std::vector<Rational> certificate; // y: y^T A >= 0, y^T b >= 0, not both zero
};

/// True when y proves that no tau > 0 solves the system.
inline bool is_infeasibility_certificate(const TauSystem& s, const std::vector<Rational>& y)
{
    if (y.size() != s.rows())
        return false;
    bool nonzero = false;
    for (std::size_t l = 0; l < s.columns(); ++l) {
        Rational c(0);
        for (std::size_t i = 0; i < s.rows(); ++i)
            c += y[i] * s.a[i][l];
        if (sgn(c) < 0)
            return false;
        nonzero = nonzero || sgn(c) != 0;
    }
    Rational yb(0);
    for (std::size_t i = 0; i < s.rows(); ++i)
        yb += y[i] * s.b[i];
    // A tau = -b, so y^T A tau = -y^T b.
    if (sgn(yb) < 0)
        return false;
    return nonzero || sgn(yb) > 0;
}

/// Maximises delta subject to A tau = -b, tau >= delta; reports a
/// certificate when the optimum is not positive.
inline TauSolution solve_tau_positive(const TauSystem& s)
{
    std::size_t m = s.rows(), L = s.columns();
    TauSolution out;
    if (L == 0) {
        bool zero = true;
        for (const auto& x : s.b)
            zero = zero && sgn(x) == 0;
        out.feasible = zero;
        if (!zero) {
            // y = sign(b) works: y^T b > 0.
            for (const auto& x : s.b)
                out.certificate.push_back(Rational(sgn(x)));
        } else {
            out.delta = 0;
        }
        return out;
    }

    // Variables: s_l >= 0 (tau = s + delta 1), delta >= 0. Minimise -delta.
    RationalMatrix a(m, std::vector<Rational>(L + 1, Rational(0)));
    std::vector<Rational> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        Rational rowsum(0);
        for (std::size_t l = 0; l < L; ++l) {
            a[i][l] = s.a[i][l];
            rowsum += s.a[i][l];
        }
        a[i][L] = rowsum;
        rhs[i] = -s.b[i];
    }
    std::vector<Rational> c(L + 1, Rational(0));
    c[L] = -1;
    auto res = solve_lp(a, rhs, c);
    if (res.status == LpStatus::unbounded)
        throw std::logic_error("tau system admits a positive kernel vector (cyclic graph?)");
    if (res.status == LpStatus::optimal && sgn(res.x[L]) > 0) {
        out.feasible = true;
        out.delta = res.x[L];
        for (std::size_t l = 0; l < L; ++l)
            out.tau.push_back(res.x[l] + out.delta);
        return out;
    }

    // Certificate: y = yp - yn, w = A^T y >= 0, y.b >= 0, sum w + y.b = 1.
    // Variables: yp (m), yn (m), w (L), z (1) with z = y.b.
    std::size_t nv = 2 * m + L + 1;
    RationalMatrix ca;
    std::vector<Rational> cb;
    for (std::size_t l = 0; l < L; ++l) {
        std::vector<Rational> row(nv, Rational(0));
        for (std::size_t i = 0; i < m; ++i) {
            row[i] = s.a[i][l];
            row[m + i] = -s.a[i][l];
        }
        row[2 * m + l] = -1;
        ca.push_back(std::move(row));
        cb.emplace_back(0);
    }
    {
        std::vector<Rational> row(nv, Rational(0));
        for (std::size_t i = 0; i < m; ++i) {
            row[i] = s.b[i];
            row[m + i] = -s.b[i];
        }
        row[nv - 1] = -1;
        ca.push_back(std::move(row));
        cb.emplace_back(0);
    }
    {
        std::vector<Rational> row(nv, Rational(0));
        for (std::size_t l = 0; l < L; ++l)
            row[2 * m + l] = 1;
        row[nv - 1] = 1;
        ca.push_back(std::move(row));
        cb.emplace_back(1);
    }
    auto cert = solve_lp(ca, cb, std::vector<Rational>(nv, Rational(0)));
    if (cert.status != LpStatus::optimal)
        throw std::logic_error("tau system: neither a positive solution nor a certificate was found");
    for (std::size_t i = 0; i < m; ++i)
        out.certificate.push_back(cert.x[i] - cert.x[m + i]);
    if (!is_infeasibility_certificate(s, out.certificate))
        throw std::logic_error("tau system: certificate failed verification");
    return out;
}

} // namespace zcrit

#endif // ZCRIT_EXTENSION_HPP
