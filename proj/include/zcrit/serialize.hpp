#ifndef ZCRIT_SERIALIZE_HPP
#define ZCRIT_SERIALIZE_HPP

// JSON form of every CLI result, with readers so that outputs re-parse into
// the structures that produced them.

#include "config.hpp"

namespace zcrit::io {

using json = nlohmann::json;
using config::rational;
using config::gaussian;
using config::to_json;

inline Rational rat(const json& j) { return rational(j, "value"); }

// ---------------------------------------------------------------- charges

/// Highest degree first: [{"degree": 2, "value": {"re", "im"}}, ...].
inline json charge_json(const CentralChargePolynomial& z)
{
    json a = json::array();
    for (int d = z.degree(); d >= 0; --d)
        a.push_back({{"degree", d}, {"value", to_json(z[static_cast<std::size_t>(d)])}});
    return a;
}

inline CentralChargePolynomial charge_from_json(const json& j)
{
    std::vector<GaussianRational> c;
    for (const auto& e : j) {
        auto d = e.at("degree").get<std::size_t>();
        if (c.size() <= d)
            c.resize(d + 1, GaussianRational(0));
        c[d] = gaussian(e.at("value"), "value");
    }
    return CentralChargePolynomial(c);
}

// ---------------------------------------------------------------- verdicts

inline const char* sign_name(Sign s)
{
    return s == Sign::Less ? "less" : (s == Sign::Equal ? "equal" : "greater");
}

inline Sign sign_from(const std::string& s)
{
    if (s == "less")
        return Sign::Less;
    if (s == "equal")
        return Sign::Equal;
    if (s == "greater")
        return Sign::Greater;
    throw Error("unknown sign '" + s + "'");
}

inline Verdict verdict_from(const std::string& s)
{
    if (s == "stable")
        return Verdict::stable;
    if (s == "semistable")
        return Verdict::semistable;
    if (s == "unstable")
        return Verdict::unstable;
    throw Error("unknown verdict '" + s + "'");
}

template <typename T>
json opt(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> opt_from(const json& j, const char* key)
{
    if (!j.contains(key) || j[key].is_null())
        return std::nullopt;
    return j[key].get<T>();
}

inline json verdict_json(const PhaseVerdict& v)
{
    return {{"sign", sign_name(v.sign)}, {"order", opt(v.discrepancy_order)}, {"witness", to_json(v.witness)}};
}

inline PhaseVerdict phase_verdict_from_json(const json& j)
{
    PhaseVerdict v;
    v.sign = sign_from(j.at("sign").get<std::string>());
    v.discrepancy_order = opt_from<int>(j, "order");
    v.witness = rat(j.at("witness"));
    return v;
}

inline json stability_json(const StabilityResult& r)
{
    json j{{"verdict", to_string(r.verdict)}, {"witness", opt(r.witness)}, {"no_candidates", r.no_candidates}};
    j["comparison"] = r.witness_verdict ? verdict_json(*r.witness_verdict) : json(nullptr);
    return j;
}

inline StabilityResult stability_from_json(const json& j)
{
    StabilityResult r;
    r.verdict = verdict_from(j.at("verdict").get<std::string>());
    r.witness = opt_from<std::string>(j, "witness");
    r.no_candidates = j.at("no_candidates").get<bool>();
    if (!j.at("comparison").is_null())
        r.witness_verdict = phase_verdict_from_json(j["comparison"]);
    return r;
}

inline json scan_json(const StabilityScan& s)
{
    json rows = json::array();
    for (const auto& r : s.rows)
        rows.push_back({{"lo", to_json(r.lo)}, {"hi", to_json(r.hi)}, {"point", r.is_point}, {"exact", r.exact},
            {"verdict", to_string(r.verdict)}, {"witness", opt(r.witness)}, {"order", opt(r.order)}});
    return {{"rows", rows}};
}

inline StabilityScan scan_from_json(const json& j)
{
    StabilityScan s;
    for (const auto& r : j.at("rows")) {
        ScanRow row;
        row.lo = rat(r.at("lo"));
        row.hi = rat(r.at("hi"));
        row.is_point = r.at("point").get<bool>();
        row.exact = r.at("exact").get<bool>();
        row.verdict = verdict_from(r.at("verdict").get<std::string>());
        row.witness = opt_from<std::string>(r, "witness");
        row.order = opt_from<int>(r, "order");
        s.rows.push_back(row);
    }
    return s;
}

// ---------------------------------------------------------------- tau

inline json tau_json(const TauSystem& sys, const TauSolution& sol)
{
    json a = json::array(), b = json::array();
    for (std::size_t i = 0; i < sys.rows(); ++i) {
        json row = json::array();
        for (const auto& x : sys.a[i])
            row.push_back(to_json(x));
        a.push_back(row);
        b.push_back(to_json(sys.b[i]));
    }
    auto vec = [](const std::vector<Rational>& v) {
        json out = json::array();
        for (const auto& x : v)
            out.push_back(to_json(x));
        return out;
    };
    return {{"system", {{"q", sys.q}, {"a", a}, {"b", b}}},
        {"solution",
            {{"feasible", sol.feasible}, {"tau", vec(sol.tau)}, {"delta", to_json(sol.delta)},
                {"certificate", vec(sol.certificate)}}}};
}

inline std::pair<TauSystem, TauSolution> tau_from_json(const json& j)
{
    TauSystem sys;
    const auto& s = j.at("system");
    sys.q = s.at("q").get<int>();
    for (const auto& row : s.at("a")) {
        std::vector<Rational> r;
        for (const auto& x : row)
            r.push_back(rat(x));
        sys.a.push_back(r);
    }
    for (const auto& x : s.at("b"))
        sys.b.push_back(rat(x));
    TauSolution sol;
    const auto& t = j.at("solution");
    sol.feasible = t.at("feasible").get<bool>();
    for (const auto& x : t.at("tau"))
        sol.tau.push_back(rat(x));
    sol.delta = rat(t.at("delta"));
    for (const auto& x : t.at("certificate"))
        sol.certificate.push_back(rat(x));
    return {sys, sol};
}

// ---------------------------------------------------------------- surface

/// Summary of a surface solve; the potential itself goes to the ZCRT dump.
struct SurfaceSummary {
    SolveStatus status = SolveStatus::numerical_failure;
    std::string reason;
    double phi = 0;
    double residual = 0;
    double z_residual = 0;
    double min_eigenvalue = 0;
    double compatibility_shift = 0;
    double volume_min_density = 0;
    int orientation = 1;
    std::optional<double> failed_at_s;
    std::vector<StageRecord> stages;
    std::vector<double> final_history;
    int linear_iterations = 0;
};

inline SolveStatus status_from(const std::string& s)
{
    for (auto st : {SolveStatus::converged, SolveStatus::no_solution, SolveStatus::numerical_failure,
             SolveStatus::volume_hypothesis_failed})
        if (s == to_string(st))
            return st;
    throw Error("unknown solve status '" + s + "'");
}

inline json surface_json(const SurfaceSummary& s)
{
    json st = json::array();
    for (const auto& r : s.stages)
        st.push_back({{"s", r.s}, {"newton_steps", r.newton_steps}, {"residual", r.residual}});
    return {{"status", to_string(s.status)}, {"reason", s.reason}, {"phi", s.phi}, {"residual", s.residual},
        {"z_residual", s.z_residual}, {"min_eigenvalue", s.min_eigenvalue},
        {"compatibility_shift", s.compatibility_shift}, {"volume_min_density", s.volume_min_density},
        {"orientation", s.orientation}, {"failed_at_s", opt(s.failed_at_s)}, {"stages", st},
        {"final_history", s.final_history}, {"linear_iterations", s.linear_iterations}};
}

inline SurfaceSummary surface_from_json(const json& j)
{
    SurfaceSummary s;
    s.status = status_from(j.at("status").get<std::string>());
    s.reason = j.at("reason").get<std::string>();
    s.phi = j.at("phi").get<double>();
    s.residual = j.at("residual").get<double>();
    s.z_residual = j.at("z_residual").get<double>();
    s.min_eigenvalue = j.at("min_eigenvalue").get<double>();
    s.compatibility_shift = j.at("compatibility_shift").get<double>();
    s.volume_min_density = j.at("volume_min_density").get<double>();
    s.orientation = j.at("orientation").get<int>();
    s.failed_at_s = opt_from<double>(j, "failed_at_s");
    for (const auto& r : j.at("stages"))
        s.stages.push_back({r.at("s").get<double>(), r.at("newton_steps").get<int>(), r.at("residual").get<double>()});
    s.final_history = j.at("final_history").get<std::vector<double>>();
    s.linear_iterations = j.at("linear_iterations").get<int>();
    return s;
}

} // namespace zcrit::io

#endif // ZCRIT_SERIALIZE_HPP
