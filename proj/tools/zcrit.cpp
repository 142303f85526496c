#include <zcrit/cli.hpp>

#include "acceptance/criteria.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace zcrit;

namespace {

int selftest()
{
    int failed = 0;
    for (std::size_t i = 0; i < acceptance::all().size(); ++i) {
        auto r = acceptance::run(i);
        std::cout << acceptance::line(r) << std::endl;
        failed += !r.pass;
    }
    return failed ? cli::kNumerical : cli::kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"zcrit: Z-critical stability and surface solver"};
    app.require_subcommand(1);
    std::string config_path;
    std::string format = "tsv";
    cli::Options opt;

    auto common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("-c,--config", config_path, "JSON config file");
        if (needs_config)
            c->required();
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"tsv", "json"}));
    };
    auto charge_flags = [&](CLI::App* sub) {
        sub->add_option("--charge", opt.charge, "charge preset override (dhym|todd)");
        sub->add_option("--bfield", opt.bfield, "B-field override, e.g. 't*h' or '-1/2*h'");
        sub->add_option("--t", opt.t, "parameter value (rational)");
    };

    auto* charge = app.add_subcommand("charge", "central charge polynomial Z(k) of a sheaf");
    common(charge, true);
    charge_flags(charge);
    charge->add_option("--sheaf,--bundle", opt.bundle, "sheaf name");

    auto* stab = app.add_subcommand("stability", "asymptotic Z-stability verdict (exit 0/2/3)");
    common(stab, true);
    charge_flags(stab);
    stab->add_option("--bundle", opt.bundle, "bundle name");
    stab->add_option("--range", opt.range, "scan t over a:b instead of a single point");

    auto* walls = app.add_subcommand("walls", "exact walls in t for a B-field family");
    common(walls, true);
    charge_flags(walls);
    walls->add_option("--bundle", opt.bundle, "bundle name");
    walls->add_option("--candidate", opt.candidate, "restrict to one candidate");
    walls->add_option("--range", opt.range, "parameter interval a:b");

    auto* tau = app.add_subcommand("tau", "extension-parameter system (exit 0 feasible, 2 infeasible)");
    common(tau, true);
    charge_flags(tau);

    auto* surf = app.add_subcommand("solve-surface", "Z-critical equation for a line bundle on a flat 2-torus");
    common(surf, false);
    surf->add_option("--N", opt.grid, "grid points per real direction (power of two)");
    surf->add_option("--tol", opt.tol, "residual tolerance");
    surf->add_option("--dump", opt.dump, "write potential and curvature to a ZCRT file");
    surf->add_flag("--allow-negative-class", opt.allow_negative_class, "solve on the -M branch if the class is negative");

    auto* self = app.add_subcommand("selftest", "run the acceptance checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kConfig;
    }
    opt.format = format == "json" ? cli::Format::json : cli::Format::tsv;

    if (self->parsed())
        return cli::run_guarded(selftest);

    return cli::run_guarded([&] {
        config::RunConfig cfg;
        if (!config_path.empty())
            cfg = config::load_config_file(config_path);
        if (charge->parsed())
            return cli::cmd_charge(cfg, opt, std::cout);
        if (stab->parsed())
            return cli::cmd_stability(cfg, opt, std::cout);
        if (walls->parsed())
            return cli::cmd_walls(cfg, opt, std::cout);
        if (tau->parsed())
            return cli::cmd_tau(cfg, opt, std::cout);
        return cli::cmd_solve_surface(cfg, opt, std::cout);
    });
}
