#ifndef ZCRIT_STABILITY_HPP
#define ZCRIT_STABILITY_HPP

#include "charge.hpp"
#include "roots.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace zcrit {

enum class Sign { Less, Equal, Greater };

inline const char* to_string(Sign s)
{
    switch (s) {
    case Sign::Less:
        return "less";
    case Sign::Equal:
        return "equal";
    case Sign::Greater:
        return "greater";
    }
    return "?";
}

/// Asymptotic comparison of phi_k(F) against phi_k(E) as k -> infinity.
///
/// `discrepancy_order` is q in the k-convention: the phase difference is of
/// order k^{-q}. The epsilon^2 = 1/k convention doubles it to 2q.
struct PhaseVerdict {
    Sign sign = Sign::Equal;
    std::optional<int> discrepancy_order;
    Rational witness; // leading nonzero coefficient of Im(Z_F conj Z_E)

    [[nodiscard]] std::optional<int> epsilon_order() const
    {
        if (!discrepancy_order)
            return std::nullopt;
        return 2 * *discrepancy_order;
    }
    friend bool operator==(const PhaseVerdict& a, const PhaseVerdict& b)
    {
        return a.sign == b.sign && a.discrepancy_order == b.discrepancy_order && a.witness == b.witness;
    }
};

/// P(k) = Im(Z_F(k) conj Z_E(k)), a real polynomial of degree <= 2n.
inline RationalPolynomial comparison_polynomial(const CentralChargePolynomial& zf, const CentralChargePolynomial& ze)
{
    return imag_part(zf * conj(ze));
}

inline PhaseVerdict verdict_from_comparison(const RationalPolynomial& p, int n)
{
    PhaseVerdict v;
    if (p.is_zero())
        return v;
    v.witness = p.leading();
    v.sign = sgn(v.witness) < 0 ? Sign::Less : Sign::Greater;
    v.discrepancy_order = 2 * n - p.degree();
    return v;
}

/// Sign of phi_k(F) - phi_k(E) for k >> 0. Both charges must be nonzero with
/// leading coefficients not on opposite rays (true for positive-rank sheaves).
inline PhaseVerdict phase_compare(const CentralChargePolynomial& zf, const CentralChargePolynomial& ze, int n)
{
    if (ze.is_zero())
        throw Error("phase_compare: Z(E) vanishes identically");
    if (!zf.is_zero()) {
        auto cross = zf.leading() * ze.leading().conj();
        if (sgn(cross.im) == 0 && sgn(cross.re) < 0)
            throw Error("phase_compare: leading coefficients point in opposite directions");
    }
    return verdict_from_comparison(comparison_polynomial(zf, ze), n);
}

/// Z(Q) for 0 -> F -> E -> Q -> 0.
inline CentralChargePolynomial quotient_charge(const CentralChargePolynomial& ze, const CentralChargePolynomial& zf)
{
    return ze - zf;
}

enum class CandidateKind { subbundle, quotient };

struct SubobjectCandidate {
    std::string name;
    ChernCharacter ch;
    CandidateKind kind = CandidateKind::subbundle;
};

enum class Verdict { stable, semistable, unstable };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::stable:
        return "stable";
    case Verdict::semistable:
        return "semistable";
    case Verdict::unstable:
        return "unstable";
    }
    return "?";
}

/// Verdict for one candidate: a subbundle must compare Less, a quotient Greater.
inline Verdict candidate_verdict(CandidateKind kind, Sign s)
{
    if (s == Sign::Equal)
        return Verdict::semistable;
    bool good = (kind == CandidateKind::subbundle) ? s == Sign::Less : s == Sign::Greater;
    return good ? Verdict::stable : Verdict::unstable;
}

struct StabilityResult {
    Verdict verdict = Verdict::stable;
    std::optional<std::string> witness; // first violating (or equal) candidate
    std::optional<PhaseVerdict> witness_verdict;
    bool no_candidates = false;
};

inline StabilityResult stability_verdict(const ChernCharacter& e, const std::vector<SubobjectCandidate>& candidates,
    const ChargeData& charge)
{
    StabilityResult res;
    res.no_candidates = candidates.empty();
    auto ze = central_charge(charge, e);
    int n = charge.ring->dimension();
    std::optional<std::size_t> first_equal;
    std::vector<PhaseVerdict> verdicts;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        if (c.ch.rank() < 1 || c.ch.rank() >= e.rank())
            throw Error("candidate '" + c.name + "' must have rank in [1, rk E)");
        auto v = phase_compare(central_charge(charge, c.ch), ze, n);
        auto cv = candidate_verdict(c.kind, v.sign);
        if (cv == Verdict::unstable) {
            res.verdict = Verdict::unstable;
            res.witness = c.name;
            res.witness_verdict = v;
            return res;
        }
        if (cv == Verdict::semistable && !first_equal)
            first_equal = i;
        verdicts.push_back(v);
    }
    if (first_equal) {
        res.verdict = Verdict::semistable;
        res.witness = candidates[*first_equal].name;
        res.witness_verdict = verdicts[*first_equal];
    }
    return res;
}

struct SlopeBracket {
    Rational bracket;      // deg_U(F) rk E - deg_U(E) rk F
    Rational coefficient;  // k^{2n-1} coefficient of Im(Z_F conj Z_E)
    Rational scale;        // V |rho_n|^2 Im(rho_{n-1}/rho_n) > 0
};

/// Leading (slope) order of the comparison. The k^{2n-1} coefficient of
/// Im(Z_F conj Z_E) equals scale * bracket with scale > 0.
inline SlopeBracket slope_semistability_leading(const ChargeData& charge, const ChernCharacter& e,
    const ChernCharacter& f)
{
    const auto& ring = *charge.ring;
    int n = ring.dimension();
    if (sgn(e.rank()) <= 0 || sgn(f.rank()) <= 0)
        throw Error("slope comparison requires positive ranks");
    SlopeBracket out;
    out.bracket = deg_U(ring, charge.omega, charge.U, f) * e.rank() - deg_U(ring, charge.omega, charge.U, e) * f.rank();
    auto p = comparison_polynomial(central_charge(charge, f), central_charge(charge, e));
    out.coefficient = p[static_cast<std::size_t>(2 * n - 1)];
    const auto& rn = charge.rho.rho[static_cast<std::size_t>(n)];
    const auto& rn1 = charge.rho.rho[static_cast<std::size_t>(n - 1)];
    Rational vol = ring.integrate(ring.power(charge.omega, n));
    out.scale = vol * rn.norm2() * (rn1 / rn).im;
    if (out.coefficient != out.scale * out.bracket)
        throw std::logic_error("slope bracket disagrees with the comparison polynomial");
    return out;
}

/// A point of the parameter line, exact or enclosed.
struct WallPoint {
    RealRoot location;
    Verdict at = Verdict::semistable;
    std::optional<int> order_at;
    Verdict left = Verdict::semistable;
    Verdict right = Verdict::semistable;
};

struct WallCell {
    Rational lo;
    Rational hi;
    Verdict verdict = Verdict::semistable;
    std::optional<int> order; // discrepancy order of the witness inside the cell
};

struct WallScanResult {
    std::vector<WallCell> cells; // merged open cells in increasing order
    std::vector<WallPoint> walls;
    std::vector<RationalPolynomial> coefficient_polys; // p_j(t), j = k-degree
};

/// Family of charges indexed by a rational parameter t.
using ChargeFamily = std::function<ChargeData(const Rational&)>;

/// Partitions [t_min, t_max] into cells of constant asymptotic verdict for a
/// single candidate of E. Coefficients of Im(Z_F conj Z_E) are polynomials in
/// t of degree <= `t_degree`; they are recovered by exact interpolation.
inline WallScanResult wall_scan(const ChargeFamily& family, const ChernCharacter& e, const SubobjectCandidate& cand,
    const Rational& t_min, const Rational& t_max, int t_degree = -1,
    const Rational& width = Rational(1, 1000000000) / 2)
{
    if (t_min >= t_max)
        throw Error("wall_scan: empty parameter range");
    auto sample = [&](const Rational& t) {
        auto charge = family(t);
        return comparison_polynomial(central_charge(charge, cand.ch), central_charge(charge, e));
    };
    int n = family(t_min).ring->dimension();
    if (t_degree < 0)
        t_degree = 2 * n;

    std::vector<Rational> ts;
    std::vector<RationalPolynomial> ps;
    for (int i = 0; i <= t_degree + 1; ++i) {
        ts.push_back(t_min + (t_max - t_min) * make_rational(i, static_cast<unsigned long>(t_degree + 1)));
        ps.push_back(sample(ts.back()));
    }
    WallScanResult res;
    for (int j = 0; j <= 2 * n; ++j) {
        std::vector<Rational> xs, ys;
        for (int i = 0; i <= t_degree; ++i) {
            xs.push_back(ts[static_cast<std::size_t>(i)]);
            ys.push_back(ps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
        auto pj = interpolate(xs, ys);
        if (pj.eval(ts.back()) != ps.back()[static_cast<std::size_t>(j)])
            throw Error("wall_scan: family is not polynomial of the declared degree in t");
        res.coefficient_polys.push_back(std::move(pj));
    }

    auto verdict_with = [&](const std::function<int(const RationalPolynomial&)>& sign_of) {
        for (int j = 2 * n; j >= 0; --j) {
            int s = sign_of(res.coefficient_polys[static_cast<std::size_t>(j)]);
            if (s != 0)
                return std::pair{candidate_verdict(cand.kind, s < 0 ? Sign::Less : Sign::Greater),
                    std::optional<int>(2 * n - j)};
        }
        return std::pair{Verdict::semistable, std::optional<int>()};
    };
    auto verdict_at_rational = [&](const Rational& t) {
        return verdict_with([&](const RationalPolynomial& p) { return sign_at(p, t); });
    };

    RationalPolynomial prod = RationalPolynomial::constant(Rational(1));
    for (const auto& p : res.coefficient_polys)
        if (p.degree() >= 1)
            prod = prod * square_free_part(p);
    RootIsolator iso(prod);
    auto roots = iso.roots_in(t_min, t_max, width);

    // Sample points strictly between consecutive partition points.
    std::vector<Rational> bounds_lo{t_min}, bounds_hi;
    for (auto& r : roots) {
        bounds_hi.push_back(r.lo);
        bounds_lo.push_back(r.hi);
    }
    bounds_hi.push_back(t_max);

    std::vector<WallCell> raw;
    for (std::size_t i = 0; i < bounds_lo.size(); ++i) {
        const auto& lo = bounds_lo[i];
        const auto& hi = bounds_hi[i];
        if (lo >= hi)
            continue; // root sits on an endpoint of the range
        auto [v, ord] = verdict_at_rational((lo + hi) / 2);
        raw.push_back(WallCell{lo, hi, v, ord});
    }

    std::vector<WallPoint> points;
    for (auto& r : roots) {
        WallPoint w;
        w.location = r;
        auto [v, ord] = verdict_with([&](const RationalPolynomial& p) { return iso.sign_of(p, w.location); });
        w.at = v;
        w.order_at = ord;
        points.push_back(w);
    }

    // Attach neighbours, keep points where the verdict changes.
    for (auto& w : points) {
        const WallCell* left = nullptr;
        const WallCell* right = nullptr;
        for (const auto& c : raw) {
            if (c.hi <= w.location.lo)
                left = &c;
            if (!right && c.lo >= w.location.hi)
                right = &c;
        }
        w.left = left ? left->verdict : w.at;
        w.right = right ? right->verdict : w.at;
        if (w.left != w.at || w.right != w.at)
            res.walls.push_back(w);
    }

    for (const auto& c : raw) {
        if (!res.cells.empty() && res.cells.back().verdict == c.verdict) {
            bool wall_between = false;
            for (const auto& w : res.walls)
                if (w.location.lo >= res.cells.back().hi && w.location.hi <= c.lo)
                    wall_between = true;
            if (!wall_between) {
                res.cells.back().hi = c.hi;
                continue;
            }
        }
        res.cells.push_back(c);
    }
    return res;
}

/// One row of a combined scan: an open cell (lo, hi) or a wall point
/// (is_point; exact when lo == hi, else an isolating enclosure).
struct ScanRow {
    Rational lo;
    Rational hi;
    bool is_point = false;
    bool exact = false;
    Verdict verdict = Verdict::stable;
    std::optional<std::string> witness;
    std::optional<int> order;
};

struct StabilityScan {
    std::vector<ScanRow> rows;
    [[nodiscard]] std::vector<ScanRow> walls() const
    {
        std::vector<ScanRow> w;
        for (const auto& r : rows)
            if (r.is_point)
                w.push_back(r);
        return w;
    }
};

inline int verdict_rank(Verdict v)
{
    return v == Verdict::unstable ? 0 : (v == Verdict::semistable ? 1 : 2);
}

/// Verdict of E against all candidates over [t_min, t_max]: the per-candidate
/// scans are merged and the worst candidate decides each cell and wall.
inline StabilityScan stability_scan(const ChargeFamily& family, const ChernCharacter& e,
    const std::vector<SubobjectCandidate>& candidates, const Rational& t_min, const Rational& t_max)
{
    std::vector<WallScanResult> scans;
    std::vector<RealRoot> pts;
    for (const auto& c : candidates) {
        scans.push_back(wall_scan(family, e, c, t_min, t_max));
        for (const auto& w : scans.back().walls)
            pts.push_back(w.location);
    }
    std::sort(pts.begin(), pts.end(), [](const RealRoot& a, const RealRoot& b) { return a.lo < b.lo; });
    // Merge enclosures that touch (the same wall seen by several candidates).
    std::vector<RealRoot> merged;
    for (const auto& r : pts) {
        if (!merged.empty() && r.lo <= merged.back().hi) {
            auto& m = merged.back();
            if (r.exact && m.exact && r.lo == m.lo)
                continue;
            if (r.hi > m.hi)
                m.hi = r.hi;
            m.exact = false;
            continue;
        }
        merged.push_back(r);
    }

    auto at_rational = [&](const Rational& t, ScanRow& row) {
        auto res = stability_verdict(e, candidates, family(t));
        row.verdict = res.verdict;
        row.witness = res.witness;
        if (res.witness_verdict)
            row.order = res.witness_verdict->discrepancy_order;
    };

    StabilityScan out;
    Rational lo = t_min;
    for (std::size_t i = 0; i <= merged.size(); ++i) {
        Rational hi = i < merged.size() ? merged[i].lo : t_max;
        if (lo < hi) {
            ScanRow cell{lo, hi, false, true, Verdict::stable, std::nullopt, std::nullopt};
            at_rational((lo + hi) / 2, cell);
            out.rows.push_back(cell);
        }
        if (i == merged.size())
            break;
        const auto& r = merged[i];
        ScanRow pt{r.lo, r.hi, true, r.exact, Verdict::stable, std::nullopt, std::nullopt};
        if (r.exact) {
            at_rational(r.lo, pt);
        } else {
            // Worst verdict among the candidates' own wall verdicts.
            pt.verdict = Verdict::stable;
            for (std::size_t c = 0; c < scans.size(); ++c)
                for (const auto& w : scans[c].walls)
                    if (w.location.hi >= r.lo && w.location.lo <= r.hi &&
                        verdict_rank(w.at) < verdict_rank(pt.verdict)) {
                        pt.verdict = w.at;
                        pt.witness = candidates[c].name;
                        pt.order = w.order_at;
                    }
        }
        out.rows.push_back(pt);
        lo = r.hi;
    }

    // Drop points that do not change the combined verdict, merge equal cells.
    std::vector<ScanRow> rows;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        const auto& r = out.rows[i];
        if (r.is_point) {
            bool left_same = i == 0 || out.rows[i - 1].verdict == r.verdict;
            bool right_same = i + 1 == out.rows.size() || out.rows[i + 1].verdict == r.verdict;
            if (left_same && right_same)
                continue;
        }
        if (!r.is_point && !rows.empty() && !rows.back().is_point && rows.back().verdict == r.verdict) {
            rows.back().hi = r.hi;
            continue;
        }
        rows.push_back(r);
    }
    out.rows = std::move(rows);
    return out;
}

} // namespace zcrit

#endif // ZCRIT_STABILITY_HPP
