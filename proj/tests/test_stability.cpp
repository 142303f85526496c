#include <zcrit/stability.hpp>

#include "common/random_charges.hpp"

#include <gtest/gtest.h>

using namespace zcrit;
using zcrit::testing::ChargeRng;

namespace {

Rational q(long p, unsigned long d = 1) { return make_rational(p, d); }

struct Maruyama {
    NumericalRing ring = projective_space(2);
    Rational sigma;
    ChernCharacter e, f;
    explicit Maruyama(Rational s = q(1))
        : sigma(std::move(s)), e(ring.from_coordinates({q(3), q(0), -sigma})),
          f(ring.from_coordinates({q(2), q(0), -sigma}))
    {
    }
    ChargeData charge(ChargePreset p, const Rational& b) const
    {
        return make_charge(p, ring, ring.generator("h"), ring.generator("h", b));
    }
};

} // namespace

TEST(Stability, MaruyamaComparisonPolynomial)
{
    Maruyama m(q(5, 2));
    for (Rational b : {q(-1), q(-1, 7), q(2, 3)}) {
        auto c = m.charge(ChargePreset::dhym, b);
        auto p = comparison_polynomial(central_charge(c, m.f), central_charge(c, m.e));
        EXPECT_EQ(p, (RationalPolynomial{q(0), m.sigma * b}));
    }
}

TEST(Stability, MaruyamaPhaseCompare)
{
    Maruyama m;
    auto neg = m.charge(ChargePreset::dhym, q(-1, 2));
    auto v = phase_compare(central_charge(neg, m.f), central_charge(neg, m.e), 2);
    EXPECT_EQ(v.sign, Sign::Less);
    EXPECT_EQ(v.discrepancy_order, 3);
    EXPECT_EQ(v.epsilon_order(), 6);
    EXPECT_EQ(v.witness, q(-1, 2));
    auto pos = m.charge(ChargePreset::dhym, q(1, 2));
    EXPECT_EQ(phase_compare(central_charge(pos, m.f), central_charge(pos, m.e), 2).sign, Sign::Greater);
    auto ze = central_charge(pos, m.e);
    auto eq = phase_compare(ze, ze, 2);
    EXPECT_EQ(eq.sign, Sign::Equal);
    EXPECT_FALSE(eq.discrepancy_order);
}

TEST(Stability, MaruyamaVerdicts)
{
    Maruyama m;
    std::vector<SubobjectCandidate> cands{{"F", m.f, CandidateKind::subbundle}};
    EXPECT_EQ(stability_verdict(m.e, cands, m.charge(ChargePreset::dhym, q(-1))).verdict, Verdict::stable);
    auto un = stability_verdict(m.e, cands, m.charge(ChargePreset::dhym, q(1)));
    EXPECT_EQ(un.verdict, Verdict::unstable);
    EXPECT_EQ(un.witness, "F");
    EXPECT_EQ(stability_verdict(m.e, cands, m.charge(ChargePreset::todd, q(3, 4))).verdict, Verdict::semistable);
    EXPECT_EQ(stability_verdict(m.e, cands, m.charge(ChargePreset::todd, q(1, 2))).verdict, Verdict::stable);
    EXPECT_EQ(stability_verdict(m.e, cands, m.charge(ChargePreset::todd, q(1))).verdict, Verdict::unstable);
}

TEST(Stability, EmptyCandidateList)
{
    Maruyama m;
    auto r = stability_verdict(m.e, {}, m.charge(ChargePreset::dhym, q(1)));
    EXPECT_EQ(r.verdict, Verdict::stable);
    EXPECT_TRUE(r.no_candidates);
}

TEST(Stability, CandidateRankChecked)
{
    Maruyama m;
    std::vector<SubobjectCandidate> bad{{"E", m.e, CandidateKind::subbundle}};
    EXPECT_THROW(stability_verdict(m.e, bad, m.charge(ChargePreset::dhym, q(1))), Error);
}

TEST(Stability, DualFlip)
{
    // F* is a quotient of E*; with c_1 = 0 the characters agree, the role flips.
    for (Rational sigma : {q(1), q(3), q(1, 2)}) {
        Maruyama m(sigma);
        auto es = dual(m.e);
        std::vector<SubobjectCandidate> sub{{"F", m.f, CandidateKind::subbundle}};
        std::vector<SubobjectCandidate> quo{{"F*", dual(m.f), CandidateKind::quotient}};
        for (Rational b : {q(-2), q(-1, 3), q(1, 5), q(4)}) {
            auto c = m.charge(ChargePreset::dhym, b);
            auto ve = stability_verdict(m.e, sub, c).verdict;
            auto vd = stability_verdict(es, quo, c).verdict;
            EXPECT_EQ(ve == Verdict::stable, vd == Verdict::unstable);
            EXPECT_EQ(ve == Verdict::unstable, vd == Verdict::stable);
        }
        auto c = m.charge(ChargePreset::todd, q(1, 4));
        EXPECT_EQ(stability_verdict(m.e, sub, c).verdict, Verdict::stable);
        EXPECT_EQ(stability_verdict(es, quo, c).verdict, Verdict::unstable);
    }
}

TEST(Stability, QuotientCharge)
{
    Maruyama m;
    auto c = m.charge(ChargePreset::todd, q(1, 3));
    auto ze = central_charge(c, m.e), zf = central_charge(c, m.f);
    EXPECT_EQ(zf + quotient_charge(ze, zf), ze);
    EXPECT_TRUE(quotient_charge(ze, ze).is_zero());
    EXPECT_EQ(quotient_charge(ze, zf), central_charge(c, m.e - m.f));
}

TEST(Stability, SeeSawProperty)
{
    ChargeRng g(101);
    for (int t = 0; t < 100; ++t) {
        auto tr = zcrit::testing::random_charge_triple(g, 2, t % 3);
        auto vf = phase_compare(tr.f, tr.e, 2);
        auto vq = phase_compare(tr.qt, tr.e, 2);
        if (vf.sign == Sign::Equal) {
            EXPECT_EQ(vq.sign, Sign::Equal);
            continue;
        }
        EXPECT_NE(vf.sign, vq.sign);
        EXPECT_NE(vq.sign, Sign::Equal);
        EXPECT_EQ(vf.discrepancy_order, vq.discrepancy_order);
        long double gap = zcrit::testing::float_phase_gap(tr.f, tr.e, 1e6L);
        EXPECT_EQ(vf.sign == Sign::Less, gap < 0) << "trial " << t;
    }
}

TEST(Stability, FloatOracleAgreement)
{
    ChargeRng g(77);
    int compared = 0;
    for (int t = 0; t < 500; ++t) {
        int n = 1 + t % 3;
        auto tr = zcrit::testing::random_charge_triple(g, n, t % 3);
        auto v = phase_compare(tr.f, tr.e, n);
        if (v.sign == Sign::Equal)
            continue;
        // Only compare once the float sign has stabilised over the k ladder.
        std::vector<long double> gaps;
        for (long double k : {1e3L, 1e4L, 1e5L, 1e6L})
            gaps.push_back(zcrit::testing::float_phase_gap(tr.f, tr.e, k));
        bool stable = true;
        for (auto x : gaps)
            stable = stable && (x < 0) == (gaps.back() < 0) && std::fabs(x) > 1e-15L;
        if (!stable)
            continue;
        ++compared;
        EXPECT_EQ(v.sign == Sign::Less, gaps.back() < 0) << "trial " << t;
    }
    EXPECT_GT(compared, 400);
}

TEST(Stability, RescalingInvariance)
{
    Maruyama m;
    std::vector<SubobjectCandidate> cands{{"F", m.f, CandidateKind::subbundle}};
    for (Rational b : {q(-1), q(0), q(1, 2)}) {
        auto c = m.charge(ChargePreset::dhym, b);
        auto base = stability_verdict(m.e, cands, c).verdict;
        for (Rational s : {q(1, 3), q(7)}) {
            auto cs = c;
            cs.rho = s * c.rho;
            EXPECT_EQ(stability_verdict(m.e, cands, cs).verdict, base);
        }
    }
    ChargeRng g(5);
    for (int t = 0; t < 50; ++t) {
        auto tr = zcrit::testing::random_charge_triple(g, 2, t % 3);
        GaussianRational s(g.r(1, 9));
        EXPECT_EQ(phase_compare(tr.f * s, tr.e * s, 2).sign, phase_compare(tr.f, tr.e, 2).sign);
    }
}

TEST(Stability, SlopeBracket)
{
    Maruyama m;
    auto c = m.charge(ChargePreset::dhym, q(0));
    EXPECT_EQ(slope_semistability_leading(c, m.e, m.e).bracket, 0);
    EXPECT_EQ(slope_semistability_leading(c, m.e, m.f).bracket, 0);
    ChernCharacter f1(m.ring.from_coordinates({q(1), q(1), q(0)}));
    ChernCharacter e2(m.ring.from_coordinates({q(2), q(0), q(-1)}));
    auto s = slope_semistability_leading(c, e2, f1);
    EXPECT_EQ(s.bracket, 2);
    EXPECT_GT(sgn(s.scale), 0);
    EXPECT_EQ(s.coefficient, s.scale * s.bracket);
    auto v = phase_compare(central_charge(c, f1), central_charge(c, e2), 2);
    EXPECT_EQ(v.sign, Sign::Greater);
    EXPECT_EQ(v.discrepancy_order, 1);
}

TEST(Stability, SlopeBracketRandomTwists)
{
    ChargeRng g(8);
    auto ring = projective_space(3);
    for (int t = 0; t < 30; ++t) {
        auto c = make_charge(t % 2 ? ChargePreset::todd : ChargePreset::dhym, ring, ring.generator("h", g.r(1, 4)),
            ring.generator("h", g.r(-3, 3)));
        ChernCharacter e(ring.from_coordinates({Rational(g.i(2, 5)), g.r(-5, 5), g.r(-5, 5), g.r(-5, 5)}));
        ChernCharacter f(ring.from_coordinates({Rational(g.i(1, 4)), g.r(-5, 5), g.r(-5, 5), g.r(-5, 5)}));
        EXPECT_NO_THROW((void)slope_semistability_leading(c, e, f));
    }
}

TEST(Stability, WallScanDhym)
{
    Maruyama m;
    auto fam = [&m](const Rational& t) { return m.charge(ChargePreset::dhym, t); };
    auto r = wall_scan(fam, m.e, {"F", m.f, CandidateKind::subbundle}, q(-1), q(1));
    ASSERT_EQ(r.walls.size(), 1u);
    EXPECT_TRUE(r.walls[0].location.exact);
    EXPECT_EQ(r.walls[0].location.lo, 0);
    EXPECT_EQ(r.walls[0].left, Verdict::stable);
    EXPECT_EQ(r.walls[0].at, Verdict::semistable);
    EXPECT_EQ(r.walls[0].right, Verdict::unstable);
    ASSERT_EQ(r.cells.size(), 2u);
    EXPECT_EQ(r.cells[0].order, 3);
}

TEST(Stability, WallScanTodd)
{
    Maruyama m(q(2));
    auto fam = [&m](const Rational& t) { return m.charge(ChargePreset::todd, t); };
    auto r = wall_scan(fam, m.e, {"F", m.f, CandidateKind::subbundle}, q(0), q(2));
    ASSERT_EQ(r.walls.size(), 1u);
    EXPECT_TRUE(r.walls[0].location.exact);
    EXPECT_EQ(r.walls[0].location.lo, q(3, 4));
    EXPECT_EQ(r.walls[0].left, Verdict::stable);
    EXPECT_EQ(r.walls[0].right, Verdict::unstable);
}

TEST(Stability, WallScanSelfHasNoWalls)
{
    Maruyama m;
    auto fam = [&m](const Rational& t) { return m.charge(ChargePreset::dhym, t); };
    auto r = wall_scan(fam, m.e, {"E", m.e, CandidateKind::subbundle}, q(-1), q(1));
    EXPECT_TRUE(r.walls.empty());
    ASSERT_EQ(r.cells.size(), 1u);
    EXPECT_EQ(r.cells[0].verdict, Verdict::semistable);
}

TEST(Stability, WallScanIrrationalWall)
{
    // U(t) = 1 + (t^2 - 2)h gives P(k) = k (t^2 - 2)(3 d_F - d_E): walls at +-sqrt 2.
    auto ring = projective_space(2);
    ChernCharacter e(ring.from_coordinates({q(3), q(0), q(-1)}));
    ChernCharacter f(ring.from_coordinates({q(1), q(0), q(-1)}));
    auto fam = [&ring](const Rational& t) {
        return ChargeData{&ring, ring.generator("h"), dhym_vector(2),
            UnipotentOperator(ring.from_coordinates({q(1), t * t - 2, q(0)}))};
    };
    SubobjectCandidate cand{"F", f, CandidateKind::subbundle};
    auto r = wall_scan(fam, e, cand, q(-5), q(5));
    ASSERT_EQ(r.walls.size(), 2u);
    EXPECT_NEAR(r.walls[0].location.midpoint().get_d(), -std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(r.walls[1].location.midpoint().get_d(), std::sqrt(2.0), 1e-9);
    for (const auto& w : r.walls) {
        EXPECT_FALSE(w.location.exact);
        EXPECT_LT(w.location.width(), Rational(1, 1000000000));
        EXPECT_EQ(w.at, Verdict::semistable);
        auto vl = stability_verdict(e, {cand}, fam(w.location.lo)).verdict;
        auto vr = stability_verdict(e, {cand}, fam(w.location.hi)).verdict;
        EXPECT_EQ(vl, w.left);
        EXPECT_EQ(vr, w.right);
        EXPECT_NE(vl, vr);
    }
    ASSERT_EQ(r.cells.size(), 3u);
    EXPECT_EQ(r.cells[1].verdict, Verdict::unstable);
}
