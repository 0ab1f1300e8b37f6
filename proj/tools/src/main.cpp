#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gfq/errors.hpp"
#include "gfq/experiment.hpp"

namespace {

using namespace gfq;
using namespace gfq::cli;

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::parameter:
        case ErrorCategory::config: return 2;
        case ErrorCategory::numerical:
        case ErrorCategory::convergence: return 3;
        case ErrorCategory::instability: return 4;
    }
    return 1;
}

int fail(const std::string& category, const std::string& message, int code) {
    nlohmann::ordered_json j{{"error", category}, {"message", message}};
    std::cerr << j.dump() << '\n';
    return code;
}

void add_common(CLI::App* sub, Overrides& o, std::string& config_file) {
    sub->add_option("-c,--config", config_file, "TOML file; flags override it")->check(CLI::ExistingFile);
    sub->add_option("--scheme", o.scheme, "galerkin, supg, supg_gfq, oss, oss_gfq");
    sub->add_option("--K", o.K, "polynomial degree");
    sub->add_option("--N", o.N, "cells per direction");
    sub->add_option("--nx", o.nx, "cells in x");
    sub->add_option("--ny", o.ny, "cells in y");
    sub->add_option("--alpha", o.alpha, "stabilization coefficient");
    sub->add_option("--out", o.out, "output root (default $GFQ_OUTPUT_ROOT or ./runs)");
    sub->add_option("--seed", o.seed, "random seed");
}

void add_time(CLI::App* sub, Overrides& o) {
    sub->add_option("--case", o.case_name, "oblique, vortex_c6, vortex_smooth, riemann");
    sub->add_option("--cfl", o.cfl, "time step factor");
    sub->add_option("--M", o.M, "DeC subtimesteps (0: default)");
    sub->add_option("--P", o.P, "DeC iterations (0: default)");
    sub->add_option("--init", o.init, "sample, llrr, opt");
    sub->add_option("--T", o.T_final, "final time");
    sub->add_option("--noise", o.noise, "uniform nodal noise amplitude (needs --seed)");
    sub->add_flag("--perturb", o.perturb, "add the compact pressure perturbation");
}

}  // namespace

int main(int argc, char** argv) {
    gfq::retain_freed_memory();
    CLI::App app{"Global-flux spectral element solver for 2D linear acoustics"};
    app.require_subcommand(1);
    Overrides o;
    std::string config_file;

    auto* run = app.add_subcommand("run", "time-dependent run with diagnostics");
    add_common(run, o, config_file);
    add_time(run, o);
    run->add_option("--cadence", o.cadence, "diagnostics every n steps");

    auto* conv = app.add_subcommand("converge", "mesh refinement study");
    add_common(conv, o, config_file);
    add_time(conv, o);
    conv->add_option("--Ns", o.Ns, "mesh sizes")->delimiter(',');
    conv->add_option("--jobs", o.jobs, "parallel runs");

    auto* sym = app.add_subcommand("symbols", "Fourier symbol audits on a torus");
    add_common(sym, o, config_file);
    sym->add_option("--audit", o.audit, "det, kernel, involution");
    sym->add_option("--samples", o.samples, "generic modes sampled");

    auto* proj = app.add_subcommand("project", "well-prepared initial data");
    add_common(proj, o, config_file);
    proj->add_option("--case", o.case_name, "vortex_c6, vortex_smooth, ...");
    proj->add_option("--method", o.method, "opt, llrr");
    proj->add_flag("--reversed", o.reversed, "march llrr from the opposite side");

    auto* audit = app.add_subcommand("kernel-audit", "1D rank audit and torus kernel dimensions");
    add_common(audit, o, config_file);
    audit->add_flag("--dense", o.dense, "also compute dense kernel dimensions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("config", e.what(), 2);
    }

    const std::map<CLI::App*, nlohmann::ordered_json (*)(const RunConfig&)> dispatch{
        {run, cmd_run}, {conv, cmd_converge}, {sym, cmd_symbols}, {proj, cmd_project}, {audit, cmd_kernel_audit}};
    CLI::App* chosen = app.get_subcommands().front();

    try {
        RunConfig cfg;
        cfg.command = chosen->get_name();
        if (cfg.command == "symbols" || cfg.command == "kernel-audit") cfg.nx = cfg.ny = 8;
        if (!config_file.empty()) apply_toml(cfg, config_file);
        apply_overrides(cfg, o);
        cfg.validate();
        const auto summary = dispatch.at(chosen)(cfg);
        std::cout << summary.dump(2) << '\n';
        std::cerr << "output: " << cfg.run_dir().string() << '\n';
    } catch (const Error& e) {
        return fail(category_name(e.category()), e.what(), exit_code(e.category()));
    } catch (const std::filesystem::filesystem_error& e) {
        return fail("config", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
    return 0;
}
