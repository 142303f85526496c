#include <zcrit/extension.hpp>

#include "common/polytope_oracle.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace zcrit;
using namespace zcrit::testing;

namespace {

Rational q(long p, unsigned long d = 1) { return make_rational(p, d); }

void expect_solution_valid(const TauSystem& s, const TauSolution& sol)
{
    ASSERT_TRUE(sol.feasible);
    ASSERT_EQ(sol.tau.size(), s.columns());
    EXPECT_GT(sgn(sol.delta), 0);
    for (const auto& t : sol.tau)
        EXPECT_GE(t, sol.delta);
    for (std::size_t i = 0; i < s.rows(); ++i) {
        Rational acc = s.b[i];
        for (std::size_t l = 0; l < s.columns(); ++l)
            acc += s.a[i][l] * sol.tau[l];
        EXPECT_EQ(acc, 0);
    }
}

} // namespace

TEST(Lp, SmallProblems)
{
    // min -x - y  s.t. x + y + s = 4, x + 3y + t = 6
    RationalMatrix a{{q(1), q(1), q(1), q(0)}, {q(1), q(3), q(0), q(1)}};
    auto r = solve_lp(a, {q(4), q(6)}, {q(-1), q(-2), q(0), q(0)});
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_EQ(r.objective, -5);
    EXPECT_EQ(r.x[0], 3);
    EXPECT_EQ(r.x[1], 1);
    EXPECT_EQ(solve_lp({{q(1), q(1)}}, {q(-1)}, {q(0), q(0)}).status, LpStatus::infeasible);
    EXPECT_EQ(solve_lp({{q(1), q(-1)}}, {q(0)}, {q(-1), q(0)}).status, LpStatus::unbounded);
    // Redundant rows.
    auto red = solve_lp({{q(1), q(1)}, {q(2), q(2)}}, {q(1), q(2)}, {q(1), q(2)});
    ASSERT_EQ(red.status, LpStatus::optimal);
    EXPECT_EQ(red.objective, 1);
}

TEST(Extension, ProportionalChargesVanish)
{
    auto ze = maruyama_charge(3, q(1), q(-1, 2));
    auto prof = abs_critical_profile(ze * GaussianRational(q(2, 5)), ze, 2);
    EXPECT_TRUE(prof.all_zero());
    EXPECT_EQ(prof.coefficients.size(), 5u);
}

TEST(Extension, MaruyamaQuotientProfile)
{
    Rational sigma = q(2), b = q(-1, 2);
    auto ze = maruyama_charge(3, sigma, b);
    auto zf = maruyama_charge(2, sigma, b);
    auto zq = quotient_charge(ze, zf);
    auto prof = abs_critical_profile(zq, ze, 2);
    ASSERT_TRUE(prof.order);
    EXPECT_EQ(*prof.order, 3);
    EXPECT_EQ(prof.epsilon_order(), 6);
    EXPECT_GT(sgn(prof.value), 0);
    // Dual route: first nonzero equals the comparison coefficient over |lc_E|^2.
    auto p = comparison_polynomial(zq, ze);
    EXPECT_EQ(prof.value, p.leading() / ze.leading().norm2());
    EXPECT_EQ(p.leading(), -sigma * b); // k sigma b (rkE - rkF) with the quotient's flipped sign
    auto sub = abs_critical_profile(zf, ze, 2);
    EXPECT_EQ(sub.value, -prof.value);
}

TEST(Extension, LeadingOrderProfile)
{
    ChargeRng g(2);
    for (int t = 0; t < 50; ++t) {
        auto tr = zcrit::testing::random_charge_triple(g, 2, t % 3);
        auto prof = abs_critical_profile(tr.qt, tr.e, 2);
        auto v = phase_compare(tr.qt, tr.e, 2);
        ASSERT_EQ(prof.order, v.discrepancy_order);
        if (v.discrepancy_order) {
            EXPECT_EQ(prof.value, v.witness / tr.e.leading().norm2());
            for (int j = 0; j < *prof.order; ++j)
                EXPECT_EQ(sgn(prof.coefficients[static_cast<std::size_t>(j)]), 0);
        }
        if (t % 3 == 0) {
            EXPECT_EQ(prof.order, 0);
        }
    }
}

TEST(Extension, TwoComponentSystem)
{
    for (Rational b : {q(-1), q(1, 2)}) {
        FiltrationGraph g;
        g.q = 3;
        g.quotients = {{"F", maruyama_charge(2, q(1), b)}, {"Q", maruyama_charge(1, q(0), b)}};
        g.edges = {{0, 1, 3}};
        auto sys = assemble_tau_system(g, 2);
        ASSERT_EQ(sys.rows(), 2u);
        EXPECT_EQ(sys.a[0][0], 1);
        EXPECT_EQ(sys.a[1][0], -1);
        EXPECT_EQ(sys.b[0] + sys.b[1], 0);
        auto sol = solve_tau_positive(sys);
        bool stable = sgn(b) < 0;
        EXPECT_EQ(sol.feasible, stable);
        EXPECT_EQ(sgn(sys.b[0]) < 0, stable);
        if (stable) {
            expect_solution_valid(sys, sol);
            EXPECT_EQ(sol.tau[0], -sys.b[0]);
        } else {
            EXPECT_TRUE(is_infeasibility_certificate(sys, sol.certificate));
        }
    }
}

TEST(Extension, ChainPartialSums)
{
    ChargeRng g(13);
    for (int t = 0; t < 30; ++t) {
        int m = static_cast<int>(g.i(2, 6));
        auto graph = random_graph(g, m, true, q(-1, 3));
        auto sys = assemble_tau_system(graph, 2);
        auto ze = graph.total_charge();
        // j-th partial sum equals the constant of S_j = Q_1 + .. + Q_j.
        Rational acc(0);
        CentralChargePolynomial zs;
        bool all_neg = true;
        for (int j = 0; j < m; ++j) {
            acc += sys.b[static_cast<std::size_t>(j)];
            zs += graph.quotients[static_cast<std::size_t>(j)].charge;
            auto prof = abs_critical_profile(zs, ze, 2, 3);
            EXPECT_EQ(acc, prof.coefficients[3]);
            if (j + 1 < m)
                all_neg = all_neg && sgn(acc) < 0;
        }
        EXPECT_EQ(acc, 0);
        auto sol = solve_tau_positive(sys);
        EXPECT_EQ(sol.feasible, all_neg);
        if (all_neg) {
            // Unique solution tau_j = -(b_1 + .. + b_j).
            Rational s(0);
            for (int j = 0; j + 1 < m; ++j) {
                s += sys.b[static_cast<std::size_t>(j)];
                EXPECT_EQ(sol.tau[static_cast<std::size_t>(j)], -s);
            }
        } else {
            EXPECT_TRUE(is_infeasibility_certificate(sys, sol.certificate));
        }
    }
}

TEST(Extension, BruteForceOracle)
{
    ChargeRng g(99);
    int feasible = 0;
    for (int t = 0; t < 100; ++t) {
        int m = static_cast<int>(g.i(2, 6));
        auto graph = random_graph(g, m, t % 2 == 0, q(t % 4 == 1 ? 1 : -1, 2));
        auto sys = assemble_tau_system(graph, 2);
        auto sol = solve_tau_positive(sys);
        EXPECT_EQ(sol.feasible, brute_force_feasible(sys)) << "instance " << t;
        if (sol.feasible) {
            ++feasible;
            expect_solution_valid(sys, sol);
        } else {
            EXPECT_TRUE(is_infeasibility_certificate(sys, sol.certificate));
        }
    }
    EXPECT_GT(feasible, 10);
    EXPECT_LT(feasible, 90);
}

TEST(Extension, DecoupledComponents)
{
    auto block = [](const TauSystem& x, const TauSystem& y) {
        TauSystem s;
        std::size_t lx = x.columns(), ly = y.columns();
        for (std::size_t i = 0; i < x.rows(); ++i) {
            auto row = x.a[i];
            row.resize(lx + ly, Rational(0));
            s.a.push_back(row);
            s.b.push_back(x.b[i]);
        }
        for (std::size_t i = 0; i < y.rows(); ++i) {
            std::vector<Rational> row(lx, Rational(0));
            row.insert(row.end(), y.a[i].begin(), y.a[i].end());
            s.a.push_back(row);
            s.b.push_back(y.b[i]);
        }
        return s;
    };
    ChargeRng g(31);
    for (int t = 0; t < 40; ++t) {
        auto gx = random_graph(g, static_cast<int>(g.i(2, 4)), t % 2 == 0, q(-1, 2));
        auto gy = random_graph(g, static_cast<int>(g.i(2, 4)), t % 3 == 0, q(-1, 2));
        auto sx = assemble_tau_system(gx, 2), sy = assemble_tau_system(gy, 2);
        bool fx = solve_tau_positive(sx).feasible, fy = solve_tau_positive(sy).feasible;
        auto joint = solve_tau_positive(block(sx, sy));
        EXPECT_EQ(joint.feasible, fx && fy);
        if (!joint.feasible) {
            EXPECT_TRUE(is_infeasibility_certificate(block(sx, sy), joint.certificate));
        }
    }
}

TEST(Extension, GraphValidation)
{
    FiltrationGraph g;
    g.q = 3;
    auto z = maruyama_charge(1, q(1), q(-1));
    g.quotients = {{"A", z}, {"B", z}, {"C", z}};
    g.edges = {{0, 1, 3}};
    EXPECT_THROW(assemble_tau_system(g, 2), Error); // C untouched
    g.edges = {{0, 1, 3}, {2, 1, 3}};
    EXPECT_THROW(assemble_tau_system(g, 2), Error); // u > v
    g.edges = {{0, 1, 3}, {1, 2, 2}};
    EXPECT_THROW(assemble_tau_system(g, 2), Error); // mixed q
    // q above the true discrepancy order is rejected.
    FiltrationGraph h;
    h.q = 3;
    h.quotients = {{"F", maruyama_charge(1, q(0), q(-1))}, {"Q", maruyama_charge(1, q(1), q(0))}};
    h.edges = {{0, 1, std::nullopt}};
    EXPECT_THROW(assemble_tau_system(h, 2), Error);
}
