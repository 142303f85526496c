#ifndef ZCRIT_CONFIG_HPP
#define ZCRIT_CONFIG_HPP

// JSON run configuration shared by all subcommands. Exact quantities are
// strings ("p/q") or integers; Gaussian rationals are {"re": .., "im": ..}.

#include "extension.hpp"
#include "stability.hpp"
#include "surface.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace zcrit::config {

using json = nlohmann::json;

class ConfigError : public Error {
public:
    ConfigError(const std::string& path, const std::string& what)
        : Error("config error at " + (path.empty() ? std::string("<root>") : path) + ": " + what)
    {
    }
};

inline const json& field(const json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object())
        throw ConfigError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(path, "missing field '" + key + "'");
    return *it;
}

inline Rational rational(const json& j, const std::string& path)
{
    try {
        if (j.is_string())
            return parse_rational(j.get<std::string>());
        if (j.is_number_integer())
            return Rational(mpz_class(std::to_string(j.get<long long>()), 10));
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path, "expected a rational as a \"p/q\" string or an integer");
}

inline GaussianRational gaussian(const json& j, const std::string& path)
{
    if (j.is_object())
        return {j.contains("re") ? rational(j["re"], path + ".re") : Rational(0),
            j.contains("im") ? rational(j["im"], path + ".im") : Rational(0)};
    return GaussianRational(rational(j, path));
}

/// Real number for the floating-point surface data: number or rational string.
inline double real(const json& j, const std::string& path)
{
    if (j.is_number())
        return j.get<double>();
    return rational(j, path).get_d();
}

inline cplx complex(const json& j, const std::string& path)
{
    if (j.is_object())
        return {j.contains("re") ? real(j["re"], path + ".re") : 0.0, j.contains("im") ? real(j["im"], path + ".im") : 0.0};
    return {real(j, path), 0.0};
}

inline json to_json(const Rational& r) { return to_string(r); }
inline json to_json(const GaussianRational& z) { return json{{"re", to_string(z.re)}, {"im", to_string(z.im)}}; }

// ---------------------------------------------------------------- rings

/// A class either as full-basis coordinates or as {"generator": "p/q"}.
inline GradedClass graded_class(const NumericalRing& ring, const json& j, const std::string& path)
{
    if (j.is_array()) {
        if (j.size() != ring.basis().size())
            throw ConfigError(path, "expected " + std::to_string(ring.basis().size()) + " coordinates");
        std::vector<Rational> c;
        for (std::size_t i = 0; i < j.size(); ++i)
            c.push_back(rational(j[i], path + "[" + std::to_string(i) + "]"));
        return ring.from_coordinates(c);
    }
    if (j.is_object()) {
        GradedClass out = ring.zero();
        for (const auto& [k, v] : j.items()) {
            auto idx = ring.find(k);
            if (!idx)
                throw ConfigError(path, "unknown generator '" + k + "' in ring " + ring.name());
            out += ring.basis_class(*idx, rational(v, path + "." + k));
        }
        return out;
    }
    throw ConfigError(path, "expected a coordinate array or a generator map");
}

inline std::unique_ptr<NumericalRing> load_ring(const json& j, const std::string& path)
{
    try {
        if (j.contains("preset")) {
            auto name = j["preset"].get<std::string>();
            if (name == "projective_space")
                return std::make_unique<NumericalRing>(projective_space(j.value("n", 2)));
            if (name == "torus_line")
                return std::make_unique<NumericalRing>(
                    torus_line(j.contains("volume") ? rational(j["volume"], path + ".volume") : Rational(2)));
            throw ConfigError(path + ".preset", "unknown ring preset '" + name + "'");
        }
        const json& r = j.contains("ring") ? j["ring"] : j;
        std::string rp = j.contains("ring") ? path + ".ring" : path;
        std::vector<Generator> basis;
        for (const auto& g : field(r, "generators", rp))
            basis.push_back({field(g, "name", rp + ".generators").get<std::string>(),
                field(g, "degree", rp + ".generators").get<int>()});
        auto index = [&](const std::string& name, const std::string& p) {
            for (std::size_t i = 0; i < basis.size(); ++i)
                if (basis[i].name == name)
                    return i;
            throw ConfigError(p, "unknown generator '" + name + "'");
        };
        std::map<std::pair<std::size_t, std::size_t>, std::vector<Rational>> products;
        if (r.contains("products")) {
            std::size_t i = 0;
            for (const auto& t : r["products"]) {
                std::string p = rp + ".products[" + std::to_string(i++) + "]";
                if (!t.is_array() || t.size() != 3)
                    throw ConfigError(p, "expected [gen_i, gen_j, [coefficients]]");
                std::vector<Rational> c;
                for (const auto& x : t[2])
                    c.push_back(rational(x, p));
                products[{index(t[0].get<std::string>(), p), index(t[1].get<std::string>(), p)}] = c;
            }
        }
        std::vector<Rational> integ;
        for (const auto& x : field(r, "integration", rp))
            integ.push_back(rational(x, rp + ".integration"));
        auto ring = std::make_unique<NumericalRing>(r.value("name", std::string("custom")),
            field(r, "dimension", rp).get<int>(), basis, products, integ);
        if (!ring->is_commutative_associative())
            throw ConfigError(rp + ".products", "multiplication table is not commutative and associative");
        if (r.contains("todd"))
            ring->set_todd_class(graded_class(*ring, r["todd"], rp + ".todd"));
        return ring;
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(path, e.what());
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

// ---------------------------------------------------------------- B-field

/// B(t) = constant + t * slope, both of degree 2.
struct BFieldExpr {
    GradedClass constant;
    GradedClass slope;
    [[nodiscard]] bool uses_t() const { return !slope.is_zero(); }
    [[nodiscard]] GradedClass at(const Rational& t) const { return constant + slope * t; }
};

/// Parses sums of products of rationals, `t` and one generator name,
/// e.g. "t*h", "-1/2*h", "h - 2*t*w".
inline BFieldExpr parse_bfield(const NumericalRing& ring, const std::string& text)
{
    BFieldExpr out{ring.zero(), ring.zero()};
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    auto fail = [&](const std::string& what) -> Error {
        return Error("B-field '" + text + "': " + what + " at position " + std::to_string(i));
    };
    skip();
    if (i == text.size())
        throw fail("empty expression");
    bool first = true;
    while (true) {
        skip();
        if (i == text.size())
            break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw fail("expected '+' or '-'");
        }
        first = false;
        Rational coeff(sign);
        int tpow = 0;
        std::optional<std::string> gen;
        while (true) {
            skip();
            if (i == text.size())
                throw fail("expected a factor");
            if (std::isdigit(static_cast<unsigned char>(text[i]))) {
                std::size_t s = i;
                while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/' || text[i] == '.'))
                    ++i;
                coeff *= parse_rational(text.substr(s, i - s));
            } else if (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_') {
                std::size_t s = i;
                while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '^'))
                    ++i;
                std::string name = text.substr(s, i - s);
                if (name == "t") {
                    if (++tpow > 1)
                        throw fail("B must be affine in t");
                } else {
                    if (gen)
                        throw fail("at most one generator per term");
                    if (!ring.find(name))
                        throw fail("unknown generator '" + name + "'");
                    gen = name;
                }
            } else {
                throw fail("unexpected character '" + std::string(1, text[i]) + "'");
            }
            skip();
            if (i < text.size() && text[i] == '*') {
                ++i;
                continue;
            }
            break;
        }
        if (!gen)
            throw fail("term without a generator");
        auto cls = ring.generator(*gen, coeff);
        for (const auto& [j, v] : cls.components())
            if (j != 1)
                throw fail("generator '" + *gen + "' is not of degree 2");
        (tpow ? out.slope : out.constant) += cls;
    }
    return out;
}

// ---------------------------------------------------------------- charges

struct ChargeSpec {
    std::optional<ChargePreset> preset;
    StabilityVector rho;    // explicit vector when no preset
    GradedClass u_extra;    // explicit U, multiplied by e^{-B}
    BFieldExpr bfield;
    std::string bfield_text;
    std::optional<Rational> t;
};

inline ChargePreset parse_preset(const std::string& s, const std::string& path)
{
    if (s == "dhym")
        return ChargePreset::dhym;
    if (s == "todd")
        return ChargePreset::todd;
    throw ConfigError(path, "unknown charge preset '" + s + "' (dhym, todd)");
}

inline const char* to_string(ChargePreset p) { return p == ChargePreset::dhym ? "dhym" : "todd"; }

struct Sheaf {
    std::string name;
    ChernCharacter ch;
    std::vector<SubobjectCandidate> candidates;
};

struct SurfaceSpec {
    int n = 16;
    double tol = 1e-8;
    int max_newton = 50;
    int stages = 10;
    bool allow_negative_class = false;
    Herm2 g = Herm2::identity();
    Herm2 alpha0 = Herm2::identity() * 2.0;
    SurfaceRho rho{2.0, cplx(0, -2), -1.0};
    struct Mode {
        double amplitude = 0;
        std::array<int, 4> k{};
        double phase = 0;
    };
    std::vector<Mode> u11_potential; // U11 = dd^c of this potential
    std::vector<Mode> u22;           // U22 density
    std::optional<std::string> dump;
};

struct RunConfig {
    std::shared_ptr<NumericalRing> ring;
    std::optional<GradedClass> omega;
    std::map<std::string, Sheaf> sheaves;
    std::optional<ChargeSpec> charge;
    json raw;

    [[nodiscard]] const NumericalRing& require_ring() const
    {
        if (!ring)
            throw ConfigError("manifold", "this command needs a manifold");
        return *ring;
    }

    [[nodiscard]] const Sheaf& sheaf(const std::string& name) const
    {
        auto it = sheaves.find(name);
        if (it == sheaves.end())
            throw ConfigError("sheaves", "no sheaf named '" + name + "'");
        return it->second;
    }

    [[nodiscard]] const ChargeSpec& require_charge() const
    {
        if (!charge)
            throw ConfigError("charge", "this command needs a charge specification");
        return *charge;
    }

    /// Charge data at parameter t.
    [[nodiscard]] ChargeData charge_at(const ChargeSpec& spec, const Rational& t) const
    {
        const auto& r = require_ring();
        auto b = spec.bfield.at(t);
        try {
            if (spec.preset)
                return make_charge(*spec.preset, r, *omega, b);
            GradedClass u = r.product(spec.u_extra, r.power_series_apply(Series::exp, b * Rational(-1)));
            UnipotentOperator U(u);
            check_charge_data(r, *omega, spec.rho, U);
            return ChargeData{&r, *omega, spec.rho, U};
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError("charge", e.what());
        }
    }

    [[nodiscard]] ChargeFamily family(const ChargeSpec& spec) const
    {
        return [this, spec](const Rational& t) { return charge_at(spec, t); };
    }
};

inline ChargeSpec load_charge(const NumericalRing& ring, const json& j, const std::string& path)
{
    ChargeSpec s;
    s.u_extra = ring.one();
    if (j.contains("preset")) {
        s.preset = parse_preset(j["preset"].get<std::string>(), path + ".preset");
    } else {
        for (const auto& x : field(j, "rho", path))
            s.rho.rho.push_back(gaussian(x, path + ".rho"));
        if (s.rho.dimension() != ring.dimension())
            throw ConfigError(path + ".rho", "needs dim + 1 = " + std::to_string(ring.dimension() + 1) + " entries");
        auto rep = validate_stability_vector(s.rho);
        if (!rep.ok)
            throw ConfigError(path + ".rho", "not a stability vector (condition " + std::to_string(*rep.violated_index) +
                " fails)");
        if (j.contains("U")) {
            s.u_extra = graded_class(ring, j["U"], path + ".U");
            if (s.u_extra.scalar_part() != 1)
                throw ConfigError(path + ".U", "degree-0 part must be 1");
        }
    }
    s.bfield_text = j.value("bfield", std::string());
    try {
        s.bfield = s.bfield_text.empty() ? BFieldExpr{ring.zero(), ring.zero()} : parse_bfield(ring, s.bfield_text);
    } catch (const Error& e) {
        throw ConfigError(path + ".bfield", e.what());
    }
    if (j.contains("t"))
        s.t = rational(j["t"], path + ".t");
    return s;
}

inline CandidateKind parse_kind(const std::string& s, const std::string& path)
{
    if (s == "subbundle" || s == "sub")
        return CandidateKind::subbundle;
    if (s == "quotient")
        return CandidateKind::quotient;
    throw ConfigError(path, "candidate kind must be 'subbundle' or 'quotient'");
}

inline ChernCharacter chern(const NumericalRing& ring, const json& j, const std::string& path)
{
    try {
        return ChernCharacter(graded_class(ring, j, path));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

inline std::map<std::string, Sheaf> load_sheaves(const NumericalRing& ring, const json& j, const std::string& path)
{
    std::map<std::string, Sheaf> out;
    if (!j.is_object())
        throw ConfigError(path, "expected an object of named sheaves");
    // Plain sheaves first so that "dual_of" can refer to them.
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& [name, s] : j.items()) {
            std::string p = path + "." + name;
            bool is_dual = s.contains("dual_of");
            if ((pass == 0) == is_dual)
                continue;
            Sheaf sh;
            sh.name = name;
            if (is_dual) {
                auto base = s["dual_of"].get<std::string>();
                auto it = out.find(base);
                if (it == out.end())
                    throw ConfigError(p + ".dual_of", "no sheaf named '" + base + "'");
                sh.ch = dual(it->second.ch);
            } else {
                sh.ch = chern(ring, field(s, "ch", p), p + ".ch");
            }
            if (s.contains("candidates")) {
                std::size_t i = 0;
                for (const auto& c : s["candidates"]) {
                    std::string cp = p + ".candidates[" + std::to_string(i++) + "]";
                    SubobjectCandidate cand;
                    cand.name = field(c, "name", cp).get<std::string>();
                    cand.kind = parse_kind(c.value("kind", std::string("subbundle")), cp + ".kind");
                    if (c.contains("ch"))
                        cand.ch = chern(ring, c["ch"], cp + ".ch");
                    else if (c.contains("sheaf")) {
                        auto ref = c["sheaf"].get<std::string>();
                        auto it = out.find(ref);
                        if (it == out.end())
                            throw ConfigError(cp + ".sheaf", "no sheaf named '" + ref + "' (define it first)");
                        cand.ch = it->second.ch;
                    } else if (c.contains("dual_of")) {
                        auto ref = c["dual_of"].get<std::string>();
                        auto it = out.find(ref);
                        if (it == out.end())
                            throw ConfigError(cp + ".dual_of", "no sheaf named '" + ref + "'");
                        cand.ch = dual(it->second.ch);
                    } else {
                        throw ConfigError(cp, "candidate needs 'ch', 'sheaf' or 'dual_of'");
                    }
                    sh.candidates.push_back(std::move(cand));
                }
            }
            out[name] = std::move(sh);
        }
    return out;
}

inline Herm2 herm(const json& j, const std::string& path)
{
    if (!j.is_object())
        throw ConfigError(path, "expected {\"a11\", \"a22\", \"a12\"}");
    Herm2 h;
    h.a11 = real(field(j, "a11", path), path + ".a11");
    h.a22 = real(field(j, "a22", path), path + ".a22");
    if (j.contains("a12"))
        h.a12 = complex(j["a12"], path + ".a12");
    return h;
}

inline std::vector<SurfaceSpec::Mode> modes(const json& j, const std::string& path)
{
    std::vector<SurfaceSpec::Mode> out;
    std::size_t i = 0;
    for (const auto& m : j) {
        std::string p = path + "[" + std::to_string(i++) + "]";
        SurfaceSpec::Mode md;
        md.amplitude = real(field(m, "amplitude", p), p + ".amplitude");
        const auto& k = field(m, "k", p);
        if (!k.is_array() || k.size() != 4)
            throw ConfigError(p + ".k", "expected four integer wavenumbers (x1, y1, x2, y2)");
        for (std::size_t d = 0; d < 4; ++d)
            md.k[d] = k[d].get<int>();
        if (m.contains("phase"))
            md.phase = real(m["phase"], p + ".phase");
        out.push_back(md);
    }
    return out;
}

inline SurfaceSpec load_surface(const json& j, const std::string& path)
{
    SurfaceSpec s;
    try {
        s.n = j.value("N", s.n);
        s.tol = j.contains("tol") ? real(j["tol"], path + ".tol") : s.tol;
        s.max_newton = j.value("max_newton", s.max_newton);
        s.stages = j.value("stages", s.stages);
        s.allow_negative_class = j.value("allow_negative_class", false);
        if (j.contains("g"))
            s.g = herm(j["g"], path + ".g");
        if (j.contains("alpha0"))
            s.alpha0 = herm(j["alpha0"], path + ".alpha0");
        if (j.contains("rho")) {
            const auto& r = j["rho"];
            if (!r.is_array() || r.size() != 3)
                throw ConfigError(path + ".rho", "expected three entries rho_0, rho_1, rho_2");
            for (std::size_t d = 0; d < 3; ++d)
                s.rho[d] = complex(r[d], path + ".rho");
            if (std::abs(s.rho[0]) == 0)
                throw ConfigError(path + ".rho", "rho_0 must be nonzero");
            s.rho = normalise_rho(s.rho);
        }
        if (j.contains("u11_potential"))
            s.u11_potential = modes(j["u11_potential"], path + ".u11_potential");
        if (j.contains("u22"))
            s.u22 = modes(j["u22"], path + ".u22");
        if (j.contains("dump"))
            s.dump = j["dump"].get<std::string>();
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(path, e.what());
    }
    if (s.n < 8 || (s.n & (s.n - 1)) != 0)
        throw ConfigError(path + ".N", "grid size must be a power of two >= 8");
    if (!(s.g.min_eigenvalue() > 0))
        throw ConfigError(path + ".g", "Kähler matrix must be positive definite");
    if (!(s.tol > 0))
        throw ConfigError(path + ".tol", "tolerance must be positive");
    return s;
}

inline ScalarField sample_modes(int n, const std::vector<SurfaceSpec::Mode>& ms)
{
    constexpr double tau = 2 * std::numbers::pi;
    return sample(n, [&](double x1, double y1, double x2, double y2) {
        double s = 0;
        for (const auto& m : ms)
            s += m.amplitude * std::cos(tau * (m.k[0] * x1 + m.k[1] * y1 + m.k[2] * x2 + m.k[3] * y2) + m.phase);
        return s;
    });
}

inline json parse_text(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source, e.what());
    }
}

inline RunConfig load_config(const json& j)
{
    RunConfig c;
    c.raw = j;
    if (!j.is_object())
        throw ConfigError("", "top level must be an object");
    if (j.contains("manifold")) {
        c.ring = load_ring(j["manifold"], "manifold");
        if (j.contains("kahler")) {
            c.omega = graded_class(*c.ring, j["kahler"], "kahler");
        } else {
            const auto& deg1 = c.ring->degree_basis(1);
            if (deg1.size() != 1)
                throw ConfigError("kahler", "ring has several degree-2 generators; give the Kähler class");
            c.omega = c.ring->basis_class(deg1[0]);
        }
        for (const auto& [jdeg, v] : c.omega->components())
            if (jdeg != 1)
                throw ConfigError("kahler", "Kähler class must be of degree 2");
        if (sgn(c.ring->integrate(c.ring->power(*c.omega, c.ring->dimension()))) <= 0)
            throw ConfigError("kahler", "Kähler class has non-positive volume");
        if (j.contains("sheaves"))
            c.sheaves = load_sheaves(*c.ring, j["sheaves"], "sheaves");
        if (j.contains("charge"))
            c.charge = load_charge(*c.ring, j["charge"], "charge");
    } else {
        for (const char* k : {"sheaves", "charge"})
            if (j.contains(k))
                throw ConfigError(k, "needs a 'manifold'");
    }
    return c;
}

inline RunConfig load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config(parse_text(ss.str(), path));
}

// ---------------------------------------------------------------- tau graphs

/// "tau": {"q": 3, "n": 2, "quotients": [{"name", "ch" | "Z"}], "edges": [[1, 2], {"u":, "v":, "order":}]}
/// Edge endpoints are 1-based; "Z" lists charge coefficients by ascending power of k.
inline std::pair<FiltrationGraph, int> load_tau(const RunConfig& c, const std::optional<ChargeSpec>& spec,
    const json& j, const std::string& path)
{
    FiltrationGraph g;
    g.q = field(j, "q", path).get<int>();
    int n = j.contains("n") ? j["n"].get<int>() : (c.ring ? c.ring->dimension() : -1);
    if (n < 1)
        throw ConfigError(path + ".n", "dimension unknown: give 'n' or a manifold");
    std::optional<ChargeData> charge;
    std::size_t i = 0;
    for (const auto& q : field(j, "quotients", path)) {
        std::string p = path + ".quotients[" + std::to_string(i++) + "]";
        FiltrationQuotient fq;
        fq.name = q.value("name", "Q" + std::to_string(i));
        if (q.contains("Z")) {
            std::vector<GaussianRational> z;
            for (const auto& x : q["Z"])
                z.push_back(gaussian(x, p + ".Z"));
            fq.charge = CentralChargePolynomial(z);
        } else {
            if (!charge) {
                if (!spec)
                    throw ConfigError(p, "quotient given by 'ch' needs a charge specification");
                charge = c.charge_at(*spec, spec->t.value_or(Rational(0)));
            }
            fq.charge = central_charge(*charge, chern(c.require_ring(), field(q, "ch", p), p + ".ch"));
        }
        g.quotients.push_back(std::move(fq));
    }
    i = 0;
    for (const auto& e : field(j, "edges", path)) {
        std::string p = path + ".edges[" + std::to_string(i++) + "]";
        FiltrationEdge fe;
        if (e.is_array() && e.size() == 2) {
            fe.u = e[0].get<int>() - 1;
            fe.v = e[1].get<int>() - 1;
        } else if (e.is_object()) {
            fe.u = field(e, "u", p).get<int>() - 1;
            fe.v = field(e, "v", p).get<int>() - 1;
            if (e.contains("order"))
                fe.order = e["order"].get<int>();
        } else {
            throw ConfigError(p, "edge must be [u, v] or {\"u\", \"v\", \"order\"}");
        }
        g.edges.push_back(fe);
    }
    try {
        check_graph(g);
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    return {g, n};
}

} // namespace zcrit::config

#endif // ZCRIT_CONFIG_HPP
