#ifndef ZCRIT_CLI_HPP
#define ZCRIT_CLI_HPP

// Subcommand bodies. Each writes its report to `out` and returns the process
// exit code; run_guarded maps exceptions onto the same contract.

#include "serialize.hpp"

#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

namespace zcrit::cli {

enum Exit : int {
    kOk = 0,
    kUnstable = 2,
    kSemistable = 3,
    kConfig = 64,
    kNumerical = 65,
    kObstruction = 66,
};

enum class Format { tsv, json };

struct Options {
    Format format = Format::tsv;
    std::string bundle;
    std::string candidate;
    std::string charge;
    std::string bfield;
    std::string t;
    std::string range;
    int grid = 0;
    double tol = 0;
    std::string dump;
    bool allow_negative_class = false;
};

using config::ConfigError;
using config::RunConfig;
using json = nlohmann::json;

inline std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline int verdict_exit(Verdict v)
{
    return v == Verdict::stable ? kOk : (v == Verdict::unstable ? kUnstable : kSemistable);
}

/// Charge spec from the config with command-line overrides applied.
inline config::ChargeSpec effective_charge(const RunConfig& cfg, const Options& opt)
{
    const auto& ring = cfg.require_ring();
    config::ChargeSpec spec;
    if (cfg.charge) {
        spec = *cfg.charge;
    } else {
        if (opt.charge.empty())
            throw ConfigError("charge", "no charge in the config and no --charge given");
        spec.u_extra = ring.one();
        spec.bfield = {ring.zero(), ring.zero()};
    }
    if (!opt.charge.empty()) {
        spec.preset = config::parse_preset(opt.charge, "--charge");
        spec.rho = {};
    }
    if (!opt.bfield.empty()) {
        try {
            spec.bfield = config::parse_bfield(ring, opt.bfield);
        } catch (const Error& e) {
            throw ConfigError("--bfield", e.what());
        }
        spec.bfield_text = opt.bfield;
    }
    if (!opt.t.empty())
        spec.t = config::rational(json(opt.t), "--t");
    return spec;
}

inline Rational point_t(const config::ChargeSpec& spec)
{
    if (spec.t)
        return *spec.t;
    if (spec.bfield.uses_t())
        throw ConfigError("charge.t", "the B-field depends on t; give t (or a --range)");
    return Rational(0);
}

/// Task section value with a flag override.
inline std::string task_value(const RunConfig& cfg, const char* task, const char* key, const std::string& flag)
{
    if (!flag.empty())
        return flag;
    if (cfg.raw.contains(task) && cfg.raw[task].contains(key))
        return cfg.raw[task][key].get<std::string>();
    return {};
}

inline std::pair<Rational, Rational> parse_range(const std::string& text)
{
    // "a:b"; the first ':' not inside a rational separates the ends.
    auto c = text.find(':');
    if (c == std::string::npos)
        throw ConfigError("range", "expected 'a:b'");
    try {
        auto lo = parse_rational(text.substr(0, c));
        auto hi = parse_rational(text.substr(c + 1));
        if (lo >= hi)
            throw ConfigError("range", "empty range '" + text + "'");
        return {lo, hi};
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("range", e.what());
    }
}

inline const config::Sheaf& bundle_of(const RunConfig& cfg, const char* task, const Options& opt)
{
    auto name = task_value(cfg, task, "bundle", opt.bundle);
    if (name.empty())
        throw ConfigError(std::string(task) + ".bundle", "no bundle given (--bundle)");
    return cfg.sheaf(name);
}

// ---------------------------------------------------------------- charge

inline int cmd_charge(const RunConfig& cfg, const Options& opt, std::ostream& out)
{
    const auto& sh = bundle_of(cfg, "charge", opt);
    auto spec = effective_charge(cfg, opt);
    auto z = central_charge(cfg.charge_at(spec, point_t(spec)), sh.ch);
    if (opt.format == Format::json) {
        out << json{{"sheaf", sh.name}, {"charge", io::charge_json(z)}}.dump(2) << "\n";
        return kOk;
    }
    out << "power\tcoefficient\n";
    for (int d = z.degree(); d >= 0; --d)
        out << "k^" << d << "\t" << to_string(z[static_cast<std::size_t>(d)]) << "\n";
    return kOk;
}

// ---------------------------------------------------------------- stability

inline std::string order_text(const std::optional<int>& o) { return o ? std::to_string(*o) : "-"; }

inline int cmd_stability(const RunConfig& cfg, const Options& opt, std::ostream& out)
{
    const auto& sh = bundle_of(cfg, "stability", opt);
    auto spec = effective_charge(cfg, opt);
    auto range = task_value(cfg, "stability", "range", opt.range);
    if (!range.empty()) {
        auto [lo, hi] = parse_range(range);
        auto scan = stability_scan(cfg.family(spec), sh.ch, sh.candidates, lo, hi);
        if (opt.format == Format::json) {
            out << io::scan_json(scan).dump(2) << "\n";
            return kOk;
        }
        out << "t_left\tt_right\tverdict\twitness_order\twitness\n";
        for (const auto& r : scan.rows)
            out << to_string(r.lo) << "\t" << to_string(r.hi) << "\t" << to_string(r.verdict) << "\t"
                << order_text(r.order) << "\t" << r.witness.value_or("-") << "\n";
        return kOk;
    }
    auto t = point_t(spec);
    auto charge = cfg.charge_at(spec, t);
    auto res = stability_verdict(sh.ch, sh.candidates, charge);
    if (opt.format == Format::json) {
        json j = io::stability_json(res);
        j["bundle"] = sh.name;
        j["t"] = to_string(t);
        out << j.dump(2) << "\n";
        return verdict_exit(res.verdict);
    }
    out << "candidate\tkind\tsign\torder\tcoefficient\tverdict\n";
    auto ze = central_charge(charge, sh.ch);
    for (const auto& c : sh.candidates) {
        auto v = phase_compare(central_charge(charge, c.ch), ze, charge.ring->dimension());
        out << c.name << "\t" << (c.kind == CandidateKind::subbundle ? "subbundle" : "quotient") << "\t"
            << io::sign_name(v.sign) << "\t" << order_text(v.discrepancy_order) << "\t" << to_string(v.witness) << "\t"
            << to_string(candidate_verdict(c.kind, v.sign)) << "\n";
    }
    out << "*\t" << sh.name << "\t-\t-\t-\t" << to_string(res.verdict) << "\n";
    if (res.no_candidates)
        std::cerr << "warning: no candidates given for " << sh.name << "; reported stable\n";
    return verdict_exit(res.verdict);
}

// ---------------------------------------------------------------- walls

inline int cmd_walls(const RunConfig& cfg, const Options& opt, std::ostream& out)
{
    const auto& sh = bundle_of(cfg, "walls", opt);
    auto spec = effective_charge(cfg, opt);
    if (!spec.bfield.uses_t())
        std::cerr << "warning: B-field does not depend on t; no walls possible\n";
    auto range = task_value(cfg, "walls", "range", opt.range);
    if (range.empty())
        throw ConfigError("walls.range", "no range given (--range a:b)");
    auto [lo, hi] = parse_range(range);
    auto cands = sh.candidates;
    auto only = task_value(cfg, "walls", "candidate", opt.candidate);
    if (!only.empty()) {
        std::erase_if(cands, [&](const SubobjectCandidate& c) { return c.name != only; });
        if (cands.empty())
            throw ConfigError("walls.candidate", "no candidate named '" + only + "'");
    }
    auto scan = stability_scan(cfg.family(spec), sh.ch, cands, lo, hi);
    if (opt.format == Format::json) {
        StabilityScan w;
        w.rows = scan.walls();
        out << io::scan_json(w).dump(2) << "\n";
        return kOk;
    }
    out << "wall\tlo\thi\tleft\tat\tright\n";
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        const auto& r = scan.rows[i];
        if (!r.is_point)
            continue;
        auto left = i > 0 ? to_string(scan.rows[i - 1].verdict) : "-";
        auto right = i + 1 < scan.rows.size() ? to_string(scan.rows[i + 1].verdict) : "-";
        std::string where = r.exact ? to_string(r.lo) : "~" + num(Rational((r.lo + r.hi) / 2).get_d());
        out << where << "\t" << to_string(r.lo) << "\t" << to_string(r.hi) << "\t" << left << "\t"
            << to_string(r.verdict) << "\t" << right << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- tau

inline int cmd_tau(const RunConfig& cfg, const Options& opt, std::ostream& out)
{
    if (!cfg.raw.contains("tau"))
        throw ConfigError("tau", "missing 'tau' section");
    std::optional<config::ChargeSpec> spec;
    if (cfg.ring && (cfg.charge || !opt.charge.empty()))
        spec = effective_charge(cfg, opt);
    auto [graph, n] = config::load_tau(cfg, spec, cfg.raw["tau"], "tau");
    TauSystem sys;
    try {
        sys = assemble_tau_system(graph, n);
    } catch (const Error& e) {
        throw ConfigError("tau", e.what());
    }
    auto sol = solve_tau_positive(sys);
    int code = sol.feasible ? kOk : kUnstable;
    if (opt.format == Format::json) {
        out << io::tau_json(sys, sol).dump(2) << "\n";
        return code;
    }
    auto edge_name = [&](std::size_t l) {
        return std::to_string(graph.edges[l].u + 1) + "-" + std::to_string(graph.edges[l].v + 1);
    };
    out << "row\tquotient\tb";
    for (std::size_t l = 0; l < sys.columns(); ++l)
        out << "\ttau_" << edge_name(l);
    out << "\n";
    for (std::size_t i = 0; i < sys.rows(); ++i) {
        out << "row\t" << graph.quotients[i].name << "\t" << to_string(sys.b[i]);
        for (const auto& a : sys.a[i])
            out << "\t" << to_string(a);
        out << "\n";
    }
    out << "status\t" << (sol.feasible ? "feasible" : "infeasible") << "\n";
    if (sol.feasible) {
        for (std::size_t l = 0; l < sol.tau.size(); ++l)
            out << "tau\t" << edge_name(l) << "\t" << to_string(sol.tau[l]) << "\n";
        out << "delta\t" << to_string(sol.delta) << "\n";
    } else {
        for (std::size_t i = 0; i < sol.certificate.size(); ++i)
            out << "certificate\t" << graph.quotients[i].name << "\t" << to_string(sol.certificate[i]) << "\n";
    }
    return code;
}

// ---------------------------------------------------------------- surface

struct SurfaceRun {
    io::SurfaceSummary summary;
    SolveReport report;
    int exit = kNumerical;
};

inline SurfaceRun run_surface(const config::SurfaceSpec& spec)
{
    SurfaceRun run;
    TorusGeometry geo(spec.n, spec.g);
    auto ch = SurfaceCharge::trivial(spec.n, spec.rho);
    ch.u11 = ddc(*geo.grid, config::sample_modes(spec.n, spec.u11_potential));
    ch.u22 = config::sample_modes(spec.n, spec.u22);
    double phi = surface_phase(geo, ch, spec.alpha0);
    BetaGamma bg;
    try {
        bg = assemble_beta_gamma(geo, ch, phi);
    } catch (const DegeneratePhase& e) {
        throw ConfigError("surface", e.what());
    }
    auto vol = check_volume_form_hypothesis(bg);
    SolverOptions so;
    so.tol = spec.tol;
    so.max_newton = spec.max_newton;
    so.stages = spec.stages;
    so.allow_negative_class = spec.allow_negative_class;
    run.report = solve_monge_ampere(geo, spec.alpha0, bg, so);
    auto& s = run.summary;
    const auto& r = run.report;
    s.status = r.status;
    s.reason = r.reason;
    s.phi = phi;
    s.residual = r.residual;
    s.min_eigenvalue = r.min_eigenvalue;
    s.compatibility_shift = r.compatibility_shift;
    s.volume_min_density = vol.min_density;
    s.orientation = r.orientation;
    s.failed_at_s = r.failed_at_s;
    s.stages = r.stages;
    s.final_history = r.final_history;
    s.linear_iterations = r.linear_iterations;
    if (r.status == SolveStatus::volume_hypothesis_failed) {
        auto loc = vol.location;
        s.reason += " at grid point (" + std::to_string(loc[0]) + ", " + std::to_string(loc[1]) + ", " +
            std::to_string(loc[2]) + ", " + std::to_string(loc[3]) + ")";
    }
    if (r.status == SolveStatus::converged) {
        auto alpha = curvature_form(geo, spec.alpha0, r.u);
        auto z = z_residual(geo, ch, phi, alpha);
        s.z_residual = z.sup;
        if (spec.dump) {
            ZcrtFile f;
            f.n = static_cast<std::uint32_t>(spec.n);
            std::vector<double> re(alpha.size()), im(alpha.size());
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                re[i] = alpha.a12[i].real();
                im[i] = alpha.a12[i].imag();
            }
            f.fields = {r.u.v, alpha.a11, alpha.a22, re, im, z.density.v};
            write_zcrt(*spec.dump, f);
        }
    }
    switch (r.status) {
    case SolveStatus::converged:
        run.exit = kOk;
        break;
    case SolveStatus::no_solution:
        run.exit = kObstruction;
        break;
    case SolveStatus::volume_hypothesis_failed:
        run.exit = kConfig; // input outside the existence hypothesis
        break;
    default:
        run.exit = kNumerical;
    }
    return run;
}

inline int cmd_solve_surface(const RunConfig& cfg, const Options& opt, std::ostream& out)
{
    auto spec = config::load_surface(cfg.raw.contains("surface") ? cfg.raw["surface"] : json::object(), "surface");
    if (opt.grid) {
        if (opt.grid < 8 || (opt.grid & (opt.grid - 1)) != 0)
            throw ConfigError("--N", "grid size must be a power of two >= 8");
        spec.n = opt.grid;
    }
    if (opt.tol > 0)
        spec.tol = opt.tol;
    if (!opt.dump.empty())
        spec.dump = opt.dump;
    spec.allow_negative_class = spec.allow_negative_class || opt.allow_negative_class;
    auto run = run_surface(spec);
    const auto& s = run.summary;
    if (opt.format == Format::json) {
        out << io::surface_json(s).dump(2) << "\n";
        return run.exit;
    }
    out << "key\tvalue\n";
    out << "status\t" << to_string(s.status) << "\n";
    out << "reason\t" << (s.reason.empty() ? "-" : s.reason) << "\n";
    out << "phi\t" << num(s.phi) << "\n";
    out << "residual\t" << num(s.residual) << "\n";
    out << "z_residual\t" << num(s.z_residual) << "\n";
    out << "min_eigenvalue\t" << num(s.min_eigenvalue) << "\n";
    out << "compatibility_shift\t" << num(s.compatibility_shift) << "\n";
    out << "volume_min_density\t" << num(s.volume_min_density) << "\n";
    out << "orientation\t" << s.orientation << "\n";
    if (s.failed_at_s)
        out << "failed_at_s\t" << num(*s.failed_at_s) << "\n";
    out << "linear_iterations\t" << s.linear_iterations << "\n";
    for (const auto& st : s.stages)
        out << "stage\t" << num(st.s) << "\t" << st.newton_steps << "\t" << num(st.residual) << "\n";
    for (std::size_t i = 0; i < s.final_history.size(); ++i)
        out << "newton\t" << i << "\t" << num(s.final_history[i]) << "\n";
    return run.exit;
}

/// Runs a command body, mapping failures onto exit codes.
inline int run_guarded(const std::function<int()>& body, std::ostream& err = std::cerr)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "zcrit: " << e.what() << "\n";
        return kConfig;
    } catch (const nlohmann::json::exception& e) {
        err << "zcrit: config error: " << e.what() << "\n";
        return kConfig;
    } catch (const Error& e) {
        err << "zcrit: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        err << "zcrit: internal failure: " << e.what() << "\n";
        return kNumerical;
    }
}

} // namespace zcrit::cli

#endif // ZCRIT_CLI_HPP
