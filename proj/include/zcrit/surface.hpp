#ifndef ZCRIT_SURFACE_HPP
#define ZCRIT_SURFACE_HPP

// Z-critical equation for a line bundle on the flat 2-torus, reduced to the
// complex Monge-Ampere equation (alpha + beta/2)^2 = beta^2/4 - gamma.

#include "torus.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <utility>

namespace zcrit {

struct TorusGeometry {
    std::shared_ptr<TorusGrid> grid;
    Herm2 g = Herm2::identity();

    TorusGeometry() = default;
    TorusGeometry(int n, const Herm2& metric) : grid(std::make_shared<TorusGrid>(n)), g(metric)
    {
        if (!(g.min_eigenvalue() > 0))
            throw Error("Kähler matrix g must be positive definite");
    }
    [[nodiscard]] int n() const { return grid->n(); }
    [[nodiscard]] double volume_density() const { return 2 * g.det(); } // omega^2 / dV0
};

using SurfaceRho = std::array<cplx, 3>; // rho_0, rho_1, rho_2

/// Rescales rho so that rho_0 = 2.
inline SurfaceRho normalise_rho(const SurfaceRho& rho)
{
    if (std::abs(rho[0]) == 0)
        throw Error("rho_0 must be nonzero");
    cplx c = 2.0 / rho[0];
    return {2.0, rho[1] * c, rho[2] * c};
}

/// Unipotent data at the form level: U_{1,1} and the U_{2,2} density.
struct SurfaceCharge {
    SurfaceRho rho{2.0, cplx(0, -2), -1.0};
    FormField u11;
    ScalarField u22;

    static SurfaceCharge trivial(int n, const SurfaceRho& rho)
    {
        return {rho, FormField(n), ScalarField(n)};
    }
};

/// Density of Z~ = k^2 rho_2 w^2 + k rho_1 w^(a + U11) + rho_0 (a^2/2 + a^U11 + U22).
inline cplx z_tilde_density(const SurfaceRho& rho, const Herm2& g, const Herm2& a, const Herm2& u11, double u22,
    double k = 1)
{
    return rho[2] * (k * k * 2 * g.det()) + rho[1] * (k * wedge(g, a + u11)) +
        rho[0] * (a.det() + wedge(a, u11) + u22);
}

/// phi = arg Z_Omega(L), integrating Z~ over the grid for the class of alpha.
inline double surface_phase(const TorusGeometry& geo, const SurfaceCharge& ch, const FormField& alpha)
{
    cplx s = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        s += z_tilde_density(ch.rho, geo.g, alpha.at(i), ch.u11.at(i), ch.u22.v[i]);
    return std::arg(s);
}

inline double surface_phase(const TorusGeometry& geo, const SurfaceCharge& ch, const Herm2& alpha0)
{
    return surface_phase(geo, ch, FormField(geo.n(), alpha0));
}

class DegeneratePhase : public Error {
public:
    using Error::Error;
};

struct BetaGamma {
    FormField beta;
    ScalarField gamma; // density
    double phi = 0;
};

/// Im(e^{-i phi} Z~) / (-sin phi) = alpha^2 + alpha ^ beta + gamma.
inline BetaGamma assemble_beta_gamma(const TorusGeometry& geo, const SurfaceCharge& ch, double phi)
{
    if (std::abs(ch.rho[0] - cplx(2.0)) > 1e-14)
        throw Error("assemble_beta_gamma expects rho_0 = 2 (see normalise_rho)");
    double sn = std::sin(phi);
    if (std::fabs(sn) <= 1e-12)
        throw DegeneratePhase("sin(phi) vanishes: the equation has no Monge-Ampere form");
    cplx rot = std::polar(1.0, -phi);
    double c1 = (rot * ch.rho[1]).imag() / -sn;
    double c2 = (rot * ch.rho[2]).imag() / -sn;
    BetaGamma out;
    out.phi = phi;
    int n = geo.n();
    out.beta = FormField(n);
    out.gamma = ScalarField(n);
    double vol = geo.volume_density();
    for (std::size_t i = 0; i < out.beta.size(); ++i) {
        Herm2 u = ch.u11.at(i);
        out.beta.set(i, geo.g * c1 + u * 2.0);
        out.gamma.v[i] = c2 * vol + c1 * wedge(geo.g, u) + 2 * ch.u22.v[i];
    }
    return out;
}

inline BetaGamma assemble_beta_gamma(const TorusGeometry& geo, const SurfaceCharge& ch, const Herm2& alpha0)
{
    return assemble_beta_gamma(geo, ch, surface_phase(geo, ch, alpha0));
}

/// Density of beta^2/4 - gamma.
inline ScalarField volume_form_density(const BetaGamma& bg)
{
    ScalarField d(bg.beta.n);
    for (std::size_t i = 0; i < d.size(); ++i)
        d.v[i] = bg.beta.at(i).det() / 2 - bg.gamma.v[i];
    return d;
}

struct VolumeFormReport {
    bool ok = false;
    double min_density = 0;
    std::array<int, 4> location{}; // grid point of the minimum
};

inline VolumeFormReport check_volume_form_hypothesis(const BetaGamma& bg)
{
    auto d = volume_form_density(bg);
    auto it = std::min_element(d.v.begin(), d.v.end());
    VolumeFormReport r;
    r.min_density = *it;
    r.ok = r.min_density > 0;
    r.location = grid_location(d.n, static_cast<std::size_t>(it - d.v.begin()));
    return r;
}

enum class PositivityMode { pointwise, cls };

struct PositivityReport {
    bool positive = false;
    double margin = 0; // smallest eigenvalue found
};

inline PositivityReport check_positivity(const FormField& f, PositivityMode mode)
{
    PositivityReport r;
    if (mode == PositivityMode::cls) {
        r.margin = f.mean().min_eigenvalue();
    } else {
        r.margin = f.at(0).min_eigenvalue();
        for (std::size_t i = 1; i < f.size(); ++i)
            r.margin = std::min(r.margin, f.at(i).min_eigenvalue());
    }
    r.positive = r.margin > 0;
    return r;
}

struct SolverOptions {
    double tol = 1e-8;
    int max_newton = 50;
    int stages = 10;
    int max_attempts = 200;            // Newton solves across the whole continuation
    bool allow_negative_class = false; // solve -M when [alpha0 + beta/2] < 0
};

enum class SolveStatus { converged, no_solution, numerical_failure, volume_hypothesis_failed };

inline const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::converged:
        return "converged";
    case SolveStatus::no_solution:
        return "no-solution";
    case SolveStatus::numerical_failure:
        return "numerical-failure";
    case SolveStatus::volume_hypothesis_failed:
        return "volume-hypothesis-failed";
    }
    return "?";
}

struct StageRecord {
    double s = 0;
    int newton_steps = 0;
    double residual = 0;
};

struct SolveReport {
    SolveStatus status = SolveStatus::numerical_failure;
    std::string reason;
    ScalarField u;
    double residual = 0;     // sup |M^2 - (beta^2/4 - gamma)| density
    double min_eigenvalue = 0; // of orientation * M(u) over the grid
    double compatibility_shift = 0;
    int orientation = 1;       // -1 when the class is negative definite
    std::optional<double> failed_at_s;
    std::vector<StageRecord> stages;
    std::vector<double> final_history; // residual per Newton iterate, last stage
    int linear_iterations = 0;
};

/// Newton/continuation solver for det M(u) = f with M(u) = alpha0 + beta/2 + dd^c u.
class MongeAmpereSolver {
public:
    MongeAmpereSolver(const TorusGeometry& geo, const Herm2& alpha0, const BetaGamma& bg, SolverOptions opt = {})
        : grid_(*geo.grid), opt_(opt), n_(geo.n())
    {
        if (bg.beta.n != n_ || bg.gamma.n != n_)
            throw Error("solver: field grid does not match geometry");
        Herm2 bbar = bg.beta.mean();
        mbar_ = alpha0 + bbar * 0.5;
        osc_ = FormField(n_);
        for (std::size_t i = 0; i < osc_.size(); ++i)
            osc_.set(i, (bg.beta.at(i) - bbar) * 0.5);
        f_ = volume_form_density(bg);
        for (auto& x : f_.v)
            x /= 2;
    }

    SolveReport solve()
    {
        SolveReport rep;
        rep.u = ScalarField(n_);
        auto ev = mbar_.eigenvalues();
        if (ev[0] > 0) {
            orient_ = 1;
        } else if (ev[1] < 0 && opt_.allow_negative_class) {
            orient_ = -1;
        } else {
            rep.status = SolveStatus::no_solution;
            rep.reason = "class-not-positive: [alpha0 + beta/2] has eigenvalues " + std::to_string(ev[0]) + ", " +
                std::to_string(ev[1]);
            return rep;
        }
        rep.orientation = orient_;
        if (!(f_.min() > 0)) {
            rep.status = SolveStatus::volume_hypothesis_failed;
            rep.reason = "volume form hypothesis fails";
            return rep;
        }
        rep.compatibility_shift = shift(1.0);

        const double ds0 = 1.0 / std::max(1, opt_.stages);
        double s = 0, ds = ds0;
        int attempts = 0;
        ScalarField u(n_);
        while (s < 1) {
            if (attempts++ >= opt_.max_attempts) {
                rep.status = SolveStatus::numerical_failure;
                rep.failed_at_s = s;
                rep.reason = "continuation budget exhausted at s = " + std::to_string(s);
                rep.u = u;
                return rep;
            }
            double st = std::min(1.0, s + ds);
            if (1 - st < 1e-12)
                st = 1;
            ScalarField trial = u;
            std::vector<double> hist;
            double tol = st == 1 ? opt_.tol : std::max(opt_.tol, 1e-6);
            int steps = 0;
            if (newton(st, trial, tol, hist, steps, rep.linear_iterations)) {
                s = st;
                u = std::move(trial);
                rep.stages.push_back({s, steps, hist.back()});
                if (s == 1)
                    rep.final_history = hist;
                ds = std::min(ds0, 2 * ds);
            } else {
                ds /= 2;
                if (ds < 1e-4) {
                    rep.status = SolveStatus::numerical_failure;
                    rep.failed_at_s = st;
                    rep.reason = "continuation stalled at s = " + std::to_string(st) +
                        " (positivity or Newton convergence lost)";
                    rep.u = u;
                    return rep;
                }
            }
        }
        rep.u = std::move(u);
        auto m = matrix(1.0, rep.u);
        rep.residual = residual(1.0, m).sup();
        rep.min_eigenvalue = check_positivity(m * static_cast<double>(orient_), PositivityMode::pointwise).margin;
        rep.status = SolveStatus::converged;
        return rep;
    }

    /// M_s(u) = Mbar + s (beta - beta_bar)/2 + dd^c u.
    [[nodiscard]] FormField matrix(double s, const ScalarField& u) const
    {
        FormField m = ddc(grid_, u);
        for (std::size_t i = 0; i < m.size(); ++i)
            m.set(i, m.at(i) + mbar_ + osc_.at(i) * s);
        return m;
    }

    /// 2 (det M - f_s): the mismatch of the two 4-form densities.
    [[nodiscard]] ScalarField residual(double s, const FormField& m) const
    {
        ScalarField r(n_);
        double c = shift(s);
        double d0 = mbar_.det();
        for (std::size_t i = 0; i < r.size(); ++i)
            r.v[i] = 2 * (m.at(i).det() - ((1 - s) * d0 + s * f_.v[i] + c));
        return r;
    }

    [[nodiscard]] const Herm2& class_matrix() const { return mbar_; }
    [[nodiscard]] const ScalarField& target() const { return f_; }

private:
    /// Additive constant making mean f_s equal the mean of det M_s(0).
    [[nodiscard]] double shift(double s) const
    {
        auto m = matrix_no_u(s);
        double mean_det = 0;
        for (std::size_t i = 0; i < m.size(); ++i)
            mean_det += m.at(i).det();
        mean_det /= static_cast<double>(m.size());
        return mean_det - (1 - s) * mbar_.det() - s * f_.mean();
    }

    [[nodiscard]] FormField matrix_no_u(double s) const
    {
        FormField m(n_, mbar_);
        for (std::size_t i = 0; i < m.size(); ++i)
            m.set(i, m.at(i) + osc_.at(i) * s);
        return m;
    }

    static double dot(const std::vector<double>& a, const std::vector<double>& b)
    {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i] * b[i];
        return s;
    }

    static void project_mean(std::vector<double>& v)
    {
        double m = 0;
        for (double x : v)
            m += x;
        m /= static_cast<double>(v.size());
        for (auto& x : v)
            x -= m;
    }

    /// Linearisation tr(adj M dd^c d), mean removed.
    std::vector<double> apply_jacobian(const FormField& m, const std::vector<double>& d) const
    {
        ScalarField ds(n_);
        ds.v = d;
        auto h = ddc(grid_, ds);
        std::vector<double> out(d.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = wedge(m.at(i), h.at(i));
        project_mean(out);
        return out;
    }

    /// Inverse of the constant-coefficient operator built from the class matrix.
    std::vector<double> precondition(const std::vector<double>& r) const
    {
        std::vector<cplx> rh;
        grid_.forward(r, rh);
        grid_.for_each_mode([&](std::size_t i, const std::array<int, 4>& k) {
            auto s = ddc_symbol(k, n_);
            double p = mbar_.a22 * s.s11 + mbar_.a11 * s.s22 - 2 * (mbar_.a12.real() * s.re12 + mbar_.a12.imag() * s.im12);
            rh[i] = (k[0] == 0 && k[1] == 0 && k[2] == 0 && k[3] == 0) ? cplx(0) : rh[i] / p;
        });
        std::vector<double> out;
        grid_.backward(rh, out);
        return out;
    }

    /// Right-preconditioned BiCGSTAB for J x = b, relative tolerance eta.
    std::vector<double> bicgstab(const FormField& m, const std::vector<double>& b, double eta, int& iters) const
    {
        std::size_t n = b.size();
        std::vector<double> x(n, 0.0), r = b, rhat = b, p(n, 0.0), v(n, 0.0);
        double rho = 1, alpha = 1, omega = 1;
        double bnorm = std::sqrt(dot(b, b));
        if (bnorm == 0)
            return x;
        for (int it = 0; it < 300; ++it) {
            ++iters;
            double rho_new = dot(rhat, r);
            if (rho_new == 0)
                break;
            double beta = (rho_new / rho) * (alpha / omega);
            for (std::size_t i = 0; i < n; ++i)
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            auto phat = precondition(p);
            v = apply_jacobian(m, phat);
            alpha = rho_new / dot(rhat, v);
            std::vector<double> s(n);
            for (std::size_t i = 0; i < n; ++i)
                s[i] = r[i] - alpha * v[i];
            if (std::sqrt(dot(s, s)) <= eta * bnorm) {
                for (std::size_t i = 0; i < n; ++i)
                    x[i] += alpha * phat[i];
                return x;
            }
            auto shat = precondition(s);
            auto t = apply_jacobian(m, shat);
            omega = dot(t, s) / dot(t, t);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * phat[i] + omega * shat[i];
                r[i] = s[i] - omega * t[i];
            }
            rho = rho_new;
            if (std::sqrt(dot(r, r)) <= eta * bnorm)
                break;
        }
        return x;
    }

    [[nodiscard]] bool positive(const FormField& m) const
    {
        for (std::size_t i = 0; i < m.size(); ++i)
            if (!((m.at(i) * static_cast<double>(orient_)).min_eigenvalue() > 0))
                return false;
        return true;
    }

    bool newton(double s, ScalarField& u, double tol, std::vector<double>& hist, int& steps, int& lin_iters) const
    {
        auto m = matrix(s, u);
        if (!positive(m))
            return false;
        auto r = residual(s, m);
        double l2 = std::sqrt(dot(r.v, r.v));
        for (steps = 0;; ++steps) {
            double sup = r.sup();
            hist.push_back(sup);
            if (sup < tol)
                return true;
            if (steps >= opt_.max_newton)
                return false;
            std::vector<double> rhs(r.v.size());
            for (std::size_t i = 0; i < rhs.size(); ++i)
                rhs[i] = -r.v[i] / 2; // Newton on det M - f_s
            project_mean(rhs);
            auto delta = bicgstab(m, rhs, std::min(1e-2, sup), lin_iters);
            bool accepted = false;
            for (double lam = 1; lam > 1e-6; lam /= 2) {
                ScalarField cand = u;
                for (std::size_t i = 0; i < cand.size(); ++i)
                    cand.v[i] += lam * delta[i];
                auto mc = matrix(s, cand);
                if (!positive(mc))
                    continue;
                auto rc = residual(s, mc);
                double l2c = std::sqrt(dot(rc.v, rc.v));
                if (l2c < (1 - 1e-4 * lam) * l2 || rc.sup() < tol) {
                    u = std::move(cand);
                    m = std::move(mc);
                    r = std::move(rc);
                    l2 = l2c;
                    accepted = true;
                    break;
                }
            }
            if (!accepted)
                return false;
        }
    }

    TorusGrid& grid_;
    SolverOptions opt_;
    int n_;
    Herm2 mbar_;
    FormField osc_;
    ScalarField f_;
    int orient_ = 1;
};

inline SolveReport solve_monge_ampere(const TorusGeometry& geo, const Herm2& alpha0, const BetaGamma& bg,
    SolverOptions opt = {})
{
    MongeAmpereSolver solver(geo, alpha0, bg, opt);
    return solver.solve();
}

/// alpha = alpha0 + dd^c u.
inline FormField curvature_form(const TorusGeometry& geo, const Herm2& alpha0, const ScalarField& u)
{
    return ddc(*geo.grid, u) + alpha0;
}

struct ZResidual {
    ScalarField density; // Im(e^{-i phi} Z~) per dV0
    double sup = 0;
    double mean = 0;
    bool mean_vanishes = false;
};

inline ZResidual z_residual(const TorusGeometry& geo, const SurfaceCharge& ch, double phi, const FormField& alpha)
{
    ZResidual z;
    z.density = ScalarField(geo.n());
    cplx rot = std::polar(1.0, -phi);
    double scale = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        cplx zt = z_tilde_density(ch.rho, geo.g, alpha.at(i), ch.u11.at(i), ch.u22.v[i]);
        z.density.v[i] = (rot * zt).imag();
        scale = std::max(scale, std::abs(zt));
    }
    z.sup = z.density.sup();
    z.mean = z.density.mean();
    z.mean_vanishes = std::fabs(z.mean) <= 1e-10 * (1 + scale);
    return z;
}

struct LargeVolumeRow {
    double k = 0;
    double measured = 0;
    double predicted = 0;
    [[nodiscard]] double relative_error() const
    {
        double d = std::fabs(measured - predicted);
        return predicted == 0 ? d : d / std::fabs(predicted);
    }
};

/// k^3 coefficient of Im(conj(Z_k) Z~_k(alpha)) for constant forms, with Z_k
/// the charge of the class alpha_ref, against the weak Hermite-Einstein form
/// c (V omega ^ (alpha + U11) - deg_U omega^2).
inline std::vector<LargeVolumeRow> large_volume_check(const Herm2& g, const SurfaceRho& rho, const Herm2& u11,
    double u22, const Herm2& alpha_ref, const Herm2& alpha, const std::vector<double>& ks)
{
    auto measure = [&](double k) {
        cplx zk = 4.0 * z_tilde_density(rho, g, alpha_ref, u11, u22, k);
        cplx zt = z_tilde_density(rho, g, alpha, u11, u22, k);
        return (std::conj(zk) * zt).imag();
    };
    double c = rho[2].real() * rho[1].imag() - rho[2].imag() * rho[1].real();
    double vol = 4 * 2 * g.det();
    double deg = 4 * wedge(g, alpha_ref + u11);
    double predicted = c * (vol * wedge(g, alpha + u11) - deg * 2 * g.det());
    std::vector<LargeVolumeRow> rows;
    for (double k : ks) {
        double d3 = measure(3 * k) - 3 * measure(2 * k) + 3 * measure(k) - measure(0);
        rows.push_back({k, d3 / (6 * k * k * k), predicted});
    }
    return rows;
}

// ZCRT dump: "ZCRT", u32 version, u32 N, u32 count, then count arrays of
// N^4 little-endian float64 in grid order.
inline constexpr std::uint32_t kZcrtVersion = 1;

struct ZcrtFile {
    std::uint32_t version = kZcrtVersion;
    std::uint32_t n = 0;
    std::vector<std::vector<double>> fields;
};

namespace detail {
template <typename T>
void put_le(std::ostream& os, T v)
{
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(b, b + sizeof(T));
    os.write(reinterpret_cast<const char*>(b), sizeof(T));
}
template <typename T>
T get_le(std::istream& is)
{
    unsigned char b[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(b), sizeof(T)))
        throw Error("ZCRT file truncated");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}
} // namespace detail

inline void write_zcrt(const std::string& path, const ZcrtFile& f)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot open " + path + " for writing");
    os.write("ZCRT", 4);
    detail::put_le<std::uint32_t>(os, f.version);
    detail::put_le<std::uint32_t>(os, f.n);
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.fields.size()));
    std::size_t expect = static_cast<std::size_t>(f.n) * f.n * f.n * f.n;
    for (const auto& a : f.fields) {
        if (a.size() != expect)
            throw Error("ZCRT field has wrong size");
        for (double x : a)
            detail::put_le<double>(os, x);
    }
}

inline ZcrtFile read_zcrt(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error("cannot open " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "ZCRT", 4) != 0)
        throw Error(path + " is not a ZCRT file");
    ZcrtFile f;
    f.version = detail::get_le<std::uint32_t>(is);
    f.n = detail::get_le<std::uint32_t>(is);
    auto count = detail::get_le<std::uint32_t>(is);
    std::size_t size = static_cast<std::size_t>(f.n) * f.n * f.n * f.n;
    for (std::uint32_t c = 0; c < count; ++c) {
        std::vector<double> a(size);
        for (auto& x : a)
            x = detail::get_le<double>(is);
        f.fields.push_back(std::move(a));
    }
    return f;
}

} // namespace zcrit

#endif // ZCRIT_SURFACE_HPP
