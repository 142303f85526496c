#include "zcrit/surface.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <numbers>
#include <random>

using namespace zcrit;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double pi2 = pi * pi;

// Band-limited random potential: a few low Fourier modes.
ScalarField random_potential(int n, std::mt19937_64& rng, int modes = 6, int kmax = 3)
{
    std::uniform_int_distribution<int> kd(-kmax, kmax);
    std::uniform_real_distribution<double> ad(-0.05, 0.05), ph(0, 2 * pi);
    std::vector<std::array<double, 6>> terms;
    for (int m = 0; m < modes; ++m)
        terms.push_back({double(kd(rng)), double(kd(rng)), double(kd(rng)), double(kd(rng)), ad(rng), ph(rng)});
    return sample(n, [&](double x1, double y1, double x2, double y2) {
        double s = 0;
        for (const auto& t : terms)
            s += t[4] * std::cos(2 * pi * (t[0] * x1 + t[1] * y1 + t[2] * x2 + t[3] * y2) + t[5]);
        return s;
    });
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

const SurfaceRho kDhym{2.0, cplx(0, -2), -1.0};

struct PerturbedCase {
    TorusGeometry geo{16, Herm2::identity()};
    Herm2 alpha0 = Herm2::identity() * 2.0;
    SurfaceCharge ch;
    ScalarField h;

    PerturbedCase()
    {
        h = sample(16, [](double x1, double, double, double) { return 0.1 * std::cos(2 * pi * x1); });
        ch = SurfaceCharge::trivial(16, kDhym);
        ch.u11 = ddc(*geo.grid, h);
    }
};

} // namespace

TEST(Ddc, ConstantIsZero)
{
    TorusGrid grid(8);
    auto f = ddc(grid, ScalarField(8, 3.5));
    for (std::size_t i = 0; i < f.size(); ++i) {
        EXPECT_NEAR(f.a11[i], 0, 1e-13);
        EXPECT_NEAR(f.a22[i], 0, 1e-13);
        EXPECT_NEAR(std::abs(f.a12[i]), 0, 1e-13);
    }
}

TEST(Ddc, SingleModes)
{
    int n = 16;
    TorusGrid grid(n);
    // u = cos 2 pi x1: u_{1 1bar} = (1/4)(d_x^2 + d_y^2) u = -pi^2 cos.
    auto u = sample(n, [](double x1, double, double, double) { return std::cos(2 * pi * x1); });
    auto f = ddc(grid, u);
    for (std::size_t i = 0; i < f.size(); ++i) {
        EXPECT_NEAR(f.a11[i], -pi2 * u.v[i], 1e-12 * pi2);
        EXPECT_NEAR(f.a22[i], 0, 1e-12);
        EXPECT_NEAR(std::abs(f.a12[i]), 0, 1e-12);
    }
    // u = cos 2 pi (x1 + y2): a11 = a22 = -pi^2 cos, a12 = -i pi^2 cos.
    auto w = sample(n, [](double x1, double, double, double y2) { return std::cos(2 * pi * (x1 + y2)); });
    auto g = ddc(grid, w);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(g.a11[i], -pi2 * w.v[i], 1e-12 * pi2);
        EXPECT_NEAR(g.a22[i], -pi2 * w.v[i], 1e-12 * pi2);
        EXPECT_NEAR(g.a12[i].real(), 0, 1e-12 * pi2);
        EXPECT_NEAR(g.a12[i].imag(), -pi2 * w.v[i], 1e-12 * pi2);
    }
}

TEST(Ddc, SpectralExactnessMixedMode)
{
    // u = sin(2 pi (2 x1 - y1 + 3 x2 + y2)); compare with hand derivatives.
    int n = 16;
    TorusGrid grid(n);
    const double k[4] = {2, -1, 3, 1};
    auto u = sample(n, [&](double x1, double y1, double x2, double y2) {
        return std::sin(2 * pi * (k[0] * x1 + k[1] * y1 + k[2] * x2 + k[3] * y2));
    });
    auto f = ddc(grid, u);
    // For e^{i theta}: d_z1 -> i pi (k0 - i k1), d_zbar2 -> i pi (k2 + i k3).
    cplx dz1(pi * k[1], pi * k[0]);   // i pi (k0 - i k1)
    cplx dzb2(-pi * k[3], pi * k[2]); // i pi (k2 + i k3)
    cplx sym12 = dz1 * dzb2;
    double s11 = -pi2 * (k[0] * k[0] + k[1] * k[1]);
    double s22 = -pi2 * (k[2] * k[2] + k[3] * k[3]);
    double scale = pi2 * 14;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto x = grid_point(n, i);
        double th = 2 * pi * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + k[3] * x[3]);
        cplx e = std::polar(1.0, th);
        EXPECT_NEAR(f.a11[i], s11 * std::sin(th), 1e-12 * scale);
        EXPECT_NEAR(f.a22[i], s22 * std::sin(th), 1e-12 * scale);
        // sin th = (e - conj e)/(2i); the conjugate mode has wavenumbers -k.
        cplx symm = cplx(pi * -k[1], pi * -k[0]) * cplx(pi * k[3], -pi * k[2]);
        cplx expect = (sym12 * e - symm * std::conj(e)) / cplx(0, 2);
        EXPECT_NEAR(std::abs(f.a12[i] - expect), 0, 1e-12 * scale);
    }
}

TEST(Ddc, Linearity)
{
    int n = 16;
    TorusGrid grid(n);
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 3; ++rep) {
        auto u = random_potential(n, rng), v = random_potential(n, rng);
        ScalarField w(n);
        for (std::size_t i = 0; i < w.size(); ++i)
            w.v[i] = u.v[i] + v.v[i];
        auto a = ddc(grid, u), b = ddc(grid, v), c = ddc(grid, w);
        for (std::size_t i = 0; i < c.size(); ++i) {
            EXPECT_NEAR(c.a11[i], a.a11[i] + b.a11[i], 1e-12);
            EXPECT_NEAR(c.a22[i], a.a22[i] + b.a22[i], 1e-12);
            EXPECT_NEAR(std::abs(c.a12[i] - a.a12[i] - b.a12[i]), 0, 1e-12);
        }
    }
}

TEST(Torus, GridValidation)
{
    EXPECT_THROW(TorusGrid(4), Error);
    EXPECT_THROW(TorusGrid(12), Error);
    EXPECT_THROW(TorusGeometry(8, Herm2::diag(1, -1)), Error);
}

TEST(FormAlgebra, CompletingTheSquare)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-2, 2);
    for (int rep = 0; rep < 1000; ++rep) {
        Herm2 a{d(rng), d(rng), {d(rng), d(rng)}}, b{d(rng), d(rng), {d(rng), d(rng)}};
        double c = d(rng);
        // alpha^2 + alpha^beta + gamma = (alpha + beta/2)^2 + gamma - beta^2/4
        double lhs = 2 * a.det() + wedge(a, b) + c;
        double rhs = 2 * (a + b * 0.5).det() + c - 2 * b.det() / 4;
        EXPECT_NEAR(lhs, rhs, 1e-12);
    }
}

TEST(FormAlgebra, DhymIdentityCoefficientwise)
{
    // Unnormalised dHYM vector rho = (-1, i, 1/2) for n = 2.
    SurfaceRho rho{-1.0, cplx(0, 1), 0.5};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-2, 2);
    for (int rep = 0; rep < 200; ++rep) {
        Herm2 g = Herm2::diag(1 + std::fabs(d(rng)), 1 + std::fabs(d(rng)));
        Herm2 a{d(rng), d(rng), {d(rng), d(rng)}};
        cplx z = z_tilde_density(rho, g, a, Herm2{}, 0);
        // ch(L) = e^alpha: Z~ = rho_2 omega^2 + rho_1 omega alpha + rho_0 alpha^2/2.
        cplx expect = 0.5 * 2 * g.det() + cplx(0, 1) * wedge(g, a) - a.det();
        EXPECT_NEAR(std::abs(z - expect), 0, 1e-12);
        // = (1/2)(omega + i alpha)^2 as a density.
        cplx sq = 0.5 * (2 * g.det() + 2.0 * cplx(0, 1) * wedge(g, a) - 2 * a.det());
        EXPECT_NEAR(std::abs(z - sq), 0, 1e-12);
    }
}

TEST(BetaGamma, ConstantDhymDataIsConstant)
{
    TorusGeometry geo(8, Herm2::diag(1, 2));
    auto ch = SurfaceCharge::trivial(8, kDhym);
    auto bg = assemble_beta_gamma(geo, ch, Herm2::diag(0.7, 1.3));
    for (std::size_t i = 1; i < bg.beta.size(); ++i) {
        EXPECT_EQ(bg.beta.a11[i], bg.beta.a11[0]);
        EXPECT_EQ(bg.gamma.v[i], bg.gamma.v[0]);
    }
}

TEST(BetaGamma, BetaFormula)
{
    PerturbedCase pc;
    auto bg = assemble_beta_gamma(pc.geo, pc.ch, pc.alpha0);
    double sn = std::sin(bg.phi);
    cplx rot = std::polar(1.0, -bg.phi);
    auto alpha = curvature_form(pc.geo, pc.alpha0, pc.h);
    for (std::size_t i = 0; i < alpha.size(); i += 97) {
        Herm2 a = alpha.at(i), u = pc.ch.u11.at(i);
        // Z~' = rho_1 omega + 2 U11 + 2 alpha, componentwise.
        auto comp = [&](cplx w, double ui, double ai) { return (rot * (w + 2 * ui + 2 * ai)).imag() / -sn; };
        EXPECT_NEAR(bg.beta.a11[i], comp(kDhym[1] * pc.geo.g.a11, u.a11, a.a11) - 2 * a.a11, 1e-12);
        EXPECT_NEAR(bg.beta.a22[i], comp(kDhym[1] * pc.geo.g.a22, u.a22, a.a22) - 2 * a.a22, 1e-12);
    }
}

TEST(BetaGamma, PhaseShiftByPi)
{
    // beta and gamma come from Im(e^{-i phi} .)/(-sin phi): shifting phi by pi
    // negates numerator and denominator, so the normalised fields are unchanged
    // while the raw equation density flips sign.
    PerturbedCase pc;
    double phi = surface_phase(pc.geo, pc.ch, pc.alpha0);
    auto a = assemble_beta_gamma(pc.geo, pc.ch, phi);
    auto b = assemble_beta_gamma(pc.geo, pc.ch, phi + pi);
    EXPECT_LT(max_diff(a.beta.a11, b.beta.a11), 1e-12);
    EXPECT_LT(max_diff(a.gamma.v, b.gamma.v), 1e-12);
    auto alpha = curvature_form(pc.geo, pc.alpha0, ScalarField(16));
    auto za = z_residual(pc.geo, pc.ch, phi, alpha), zb = z_residual(pc.geo, pc.ch, phi + pi, alpha);
    for (std::size_t i = 0; i < za.density.size(); i += 101)
        EXPECT_NEAR(za.density.v[i], -zb.density.v[i], 1e-12);
}

TEST(BetaGamma, RequiresNormalisedRhoAndPhase)
{
    TorusGeometry geo(8, Herm2::identity());
    auto ch = SurfaceCharge::trivial(8, {-1.0, cplx(0, 1), 0.5});
    EXPECT_THROW(assemble_beta_gamma(geo, ch, 1.0), Error);
    ch.rho = normalise_rho(ch.rho);
    EXPECT_NEAR(std::abs(ch.rho[1] - cplx(0, -2)), 0, 1e-15);
    EXPECT_THROW(assemble_beta_gamma(geo, ch, 0.0), DegeneratePhase);
    EXPECT_THROW(assemble_beta_gamma(geo, ch, pi), DegeneratePhase);
}

TEST(VolumeForm, DhymDensity)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.2, 3);
    for (int rep = 0; rep < 20; ++rep) {
        Herm2 g{d(rng), d(rng), 0};
        g.a12 = cplx(0.1, -0.05);
        TorusGeometry geo(8, g);
        auto ch = SurfaceCharge::trivial(8, kDhym);
        Herm2 a0{d(rng) - 1.5, d(rng) - 1.5, {0.2, 0.1}};
        double phi;
        try {
            phi = surface_phase(geo, ch, a0);
            auto bg = assemble_beta_gamma(geo, ch, phi);
            double cot = std::cos(phi) / std::sin(phi);
            double expect = (1 + cot * cot) * geo.volume_density();
            auto dens = volume_form_density(bg);
            EXPECT_LT(std::fabs(dens.v[0] - expect), 1e-10 * expect);
            EXPECT_TRUE(check_volume_form_hypothesis(bg).ok);
        } catch (const DegeneratePhase&) {
        }
    }
}

TEST(VolumeForm, FailureLocationAndScaling)
{
    PerturbedCase pc;
    auto bg = assemble_beta_gamma(pc.geo, pc.ch, pc.alpha0);
    auto good = check_volume_form_hypothesis(bg);
    ASSERT_TRUE(good.ok);
    BetaGamma scaled = bg;
    scaled.beta *= 2.0;
    for (auto& x : scaled.gamma.v)
        x *= 4;
    auto d1 = volume_form_density(bg), d2 = volume_form_density(scaled);
    for (std::size_t i = 0; i < d1.size(); i += 37)
        EXPECT_NEAR(d2.v[i], 4 * d1.v[i], 1e-11);
    EXPECT_TRUE(check_volume_form_hypothesis(scaled).ok);

    BetaGamma bad = bg;
    std::size_t idx = 12345;
    bad.gamma.v[idx] += 1000;
    auto rep = check_volume_form_hypothesis(bad);
    EXPECT_FALSE(rep.ok);
    EXPECT_LT(rep.min_density, 0);
    EXPECT_EQ(rep.location, grid_location(16, idx));
}

TEST(Positivity, Modes)
{
    auto id = check_positivity(FormField(8, Herm2::identity()), PositivityMode::pointwise);
    EXPECT_TRUE(id.positive);
    EXPECT_DOUBLE_EQ(id.margin, 1);
    EXPECT_FALSE(check_positivity(FormField(8, Herm2::diag(1, -1)), PositivityMode::pointwise).positive);
    EXPECT_FALSE(check_positivity(FormField(8, Herm2::diag(1, -1)), PositivityMode::cls).positive);
    // Oscillating field: positive class, not pointwise positive.
    TorusGrid grid(8);
    auto h = sample(8, [](double x1, double, double, double) { return std::cos(2 * pi * x1); });
    auto f = ddc(grid, h) + Herm2::identity();
    EXPECT_TRUE(check_positivity(f, PositivityMode::cls).positive);
    EXPECT_FALSE(check_positivity(f, PositivityMode::pointwise).positive);
}

TEST(Solver, ConstantDataGivesZero)
{
    TorusGeometry geo(16, Herm2::diag(1, 1.5));
    auto ch = SurfaceCharge::trivial(16, kDhym);
    Herm2 a0{2, 1, {0.3, -0.2}};
    auto bg = assemble_beta_gamma(geo, ch, a0);
    auto rep = solve_monge_ampere(geo, a0, bg);
    ASSERT_EQ(rep.status, SolveStatus::converged) << rep.reason;
    EXPECT_LT(rep.u.sup(), 1e-12);
    EXPECT_LT(rep.residual, 1e-12);
    EXPECT_LT(std::fabs(rep.compatibility_shift), 1e-12);
}

TEST(Solver, PerturbedDhymConverges)
{
    PerturbedCase pc;
    double phi = surface_phase(pc.geo, pc.ch, pc.alpha0);
    EXPECT_NEAR(std::cos(phi) / std::sin(phi), -0.75, 1e-12);
    auto bg = assemble_beta_gamma(pc.geo, pc.ch, phi);
    ASSERT_TRUE(check_volume_form_hypothesis(bg).ok);
    auto t0 = std::chrono::steady_clock::now();
    auto rep = solve_monge_ampere(pc.geo, pc.alpha0, bg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ASSERT_EQ(rep.status, SolveStatus::converged) << rep.reason;
    EXPECT_LT(secs, 60);
    EXPECT_LT(rep.residual, 1e-8);
    EXPECT_GT(rep.min_eigenvalue, 0);
    EXPECT_LT(std::fabs(rep.compatibility_shift), 1e-10);
    // Exact solution: u = -h.
    for (std::size_t i = 0; i < rep.u.size(); ++i)
        EXPECT_NEAR(rep.u.v[i], -pc.h.v[i], 1e-8);
    // Quadratic tail on the final stage.
    const auto& hist = rep.final_history;
    ASSERT_GE(hist.size(), 2U);
    std::size_t last = hist.size() - 1;
    double ratio = hist[last] / (hist[last - 1] * hist[last - 1]);
    for (double e : hist)
        std::printf("newton residual %.3e\n", e);
    EXPECT_LT(ratio, 10) << "e_n = " << hist[last - 1] << ", e_n+1 = " << hist[last];
    // Z-critical residual follows through the normalisation.
    auto alpha = curvature_form(pc.geo, pc.alpha0, rep.u);
    auto z = z_residual(pc.geo, pc.ch, phi, alpha);
    EXPECT_LT(z.sup, 1e-8 * std::fabs(std::sin(phi)) * 1.0000001);
    EXPECT_TRUE(z.mean_vanishes);
    // alpha + beta/2 is pointwise positive at the solution.
    auto sub = alpha + bg.beta * 0.5;
    EXPECT_TRUE(check_positivity(sub, PositivityMode::pointwise).positive);
}

TEST(Solver, NonPositiveClassIsObstruction)
{
    TorusGeometry geo(16, Herm2::identity());
    auto ch = SurfaceCharge::trivial(16, kDhym);
    Herm2 a0 = Herm2::diag(0.5, -3);
    auto bg = assemble_beta_gamma(geo, ch, a0);
    ASSERT_TRUE(check_volume_form_hypothesis(bg).ok);
    auto rep = solve_monge_ampere(geo, a0, bg);
    EXPECT_EQ(rep.status, SolveStatus::no_solution);
    EXPECT_NE(rep.reason.find("class-not-positive"), std::string::npos);
    EXPECT_TRUE(rep.stages.empty());
    // The reversed branch is solvable when explicitly allowed.
    SolverOptions opt;
    opt.allow_negative_class = true;
    auto neg = solve_monge_ampere(geo, a0, bg, opt);
    EXPECT_EQ(neg.status, SolveStatus::converged);
    EXPECT_EQ(neg.orientation, -1);
}

TEST(Solver, VolumeHypothesisFailure)
{
    PerturbedCase pc;
    auto bg = assemble_beta_gamma(pc.geo, pc.ch, pc.alpha0);
    for (auto& x : bg.gamma.v)
        x += 100;
    auto rep = solve_monge_ampere(pc.geo, pc.alpha0, bg);
    EXPECT_EQ(rep.status, SolveStatus::volume_hypothesis_failed);
}

TEST(ZResidual, MeanVanishesInClass)
{
    // Criterion: 20 random in-class alpha = alpha0 + dd^c u.
    PerturbedCase pc;
    std::mt19937_64 rng(2024);
    double phi = surface_phase(pc.geo, pc.ch, pc.alpha0);
    for (int rep = 0; rep < 20; ++rep) {
        auto u = random_potential(16, rng);
        auto alpha = curvature_form(pc.geo, pc.alpha0, u);
        auto z = z_residual(pc.geo, pc.ch, phi, alpha);
        EXPECT_LT(std::fabs(z.mean), 1e-10);
        EXPECT_TRUE(z.mean_vanishes);
    }
    auto out = curvature_form(pc.geo, pc.alpha0 * 1.3, ScalarField(16));
    auto z = z_residual(pc.geo, pc.ch, phi, out);
    EXPECT_GT(std::fabs(z.mean), 1e-3);
    EXPECT_FALSE(z.mean_vanishes);
}

TEST(LargeVolume, MatchesClosedForm)
{
    Herm2 g{1.2, 0.8, {0.1, 0.05}};
    SurfaceRho rho = kDhym;
    Herm2 u11{0.1, -0.05, {0.02, 0}};
    Herm2 ref = Herm2::diag(1, 1);
    Herm2 alpha{1.3, 0.6, {0.2, -0.1}};
    auto rows = large_volume_check(g, rho, u11, 0.3, ref, alpha, {10, 100});
    ASSERT_EQ(rows.size(), 2U);
    for (const auto& r : rows) {
        EXPECT_NE(r.predicted, 0);
        EXPECT_LT(r.relative_error(), 1e-8) << r.k << " " << r.measured << " " << r.predicted;
    }
    // A weak Hermite-Einstein constant representative: alpha + U11 proportional to g.
    Herm2 he = g * 0.7 - u11;
    auto zero = large_volume_check(g, rho, u11, 0.3, he, he, {10, 100});
    for (const auto& r : zero) {
        EXPECT_NEAR(r.predicted, 0, 1e-12);
        EXPECT_LT(std::fabs(r.measured), 1e-8);
    }
}

TEST(LargeVolume, DegreeShift)
{
    // Rank 1: changing U11 by t g shifts both degree terms equally, leaving the
    // bracket V w^(alpha+U) - deg w^2 unchanged.
    Herm2 g = Herm2::diag(1, 2);
    Herm2 ref = Herm2::diag(1, 1), alpha{1.5, 0.4, {0.1, 0}};
    auto a = large_volume_check(g, kDhym, Herm2{}, 0, ref, alpha, {10});
    auto b = large_volume_check(g, kDhym, g * 0.25, 0, ref, alpha, {10});
    EXPECT_NEAR(a[0].predicted, b[0].predicted, 1e-10);
    EXPECT_NEAR(a[0].measured, b[0].measured, 1e-6 * std::fabs(a[0].measured));
}

TEST(Zcrt, RoundTrip)
{
    std::mt19937_64 rng(1);
    ZcrtFile f;
    f.n = 8;
    for (int c = 0; c < 3; ++c)
        f.fields.push_back(random_potential(8, rng).v);
    std::string path = ::testing::TempDir() + "zcrit_roundtrip.zcrt";
    write_zcrt(path, f);
    auto g = read_zcrt(path);
    EXPECT_EQ(g.version, kZcrtVersion);
    EXPECT_EQ(g.n, 8U);
    ASSERT_EQ(g.fields.size(), 3U);
    for (int c = 0; c < 3; ++c)
        EXPECT_EQ(g.fields[static_cast<std::size_t>(c)], f.fields[static_cast<std::size_t>(c)]);
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    char magic[5] = {};
    ASSERT_EQ(std::fread(magic, 1, 4, fp), 4U);
    std::fclose(fp);
    EXPECT_STREQ(magic, "ZCRT");
    std::remove(path.c_str());
}

TEST(Solver, NonlinearInstanceHasQuadraticTail)
{
    // U11 mixing both directions makes det M(u) genuinely quadratic in u.
    TorusGeometry geo(16, Herm2::identity());
    auto ch = SurfaceCharge::trivial(16, kDhym);
    auto h = sample(16, [](double x1, double y1, double x2, double y2) {
        return 0.04 * std::cos(2 * pi * x1) + 0.03 * std::sin(2 * pi * (x2 + y1)) + 0.02 * std::cos(2 * pi * (x1 - y2));
    });
    ch.u11 = ddc(*geo.grid, h);
    ch.u22 = sample(16, [](double x1, double, double x2, double) { return 0.2 * std::cos(2 * pi * (x1 + x2)); });
    Herm2 a0 = Herm2::identity() * 2.0;
    auto bg = assemble_beta_gamma(geo, ch, a0);
    ASSERT_TRUE(check_volume_form_hypothesis(bg).ok);
    auto rep = solve_monge_ampere(geo, a0, bg);
    ASSERT_EQ(rep.status, SolveStatus::converged) << rep.reason;
    EXPECT_LT(rep.residual, 1e-8);
    const auto& hist = rep.final_history;
    for (double e : hist)
        std::printf("newton residual %.3e\n", e);
    ASSERT_GE(hist.size(), 3U);
    std::size_t last = hist.size() - 1;
    EXPECT_LT(hist[last] / (hist[last - 1] * hist[last - 1]), 10);
    EXPECT_LT(hist[last - 1] / (hist[last - 2] * hist[last - 2]), 10);
}
