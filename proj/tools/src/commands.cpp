#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "gfq/errors.hpp"
#include "gfq/symbols.hpp"

namespace gfq::cli {

namespace {

using json = nlohmann::ordered_json;

// JSON has no NaN; keep it explicit.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json errors_json(const L2Errors& e) { return {{"u", num(e.u)}, {"v", num(e.v)}, {"p", num(e.p)}}; }

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::filesystem::path prepare(const RunConfig& cfg) {
    const auto dir = cfg.run_dir();
    std::filesystem::create_directories(dir);
    write_json(dir / "config.json", cfg.to_json());
    return dir;
}

double det_scale(const Eigen::MatrixXcd& m) { return std::pow(m.norm(), static_cast<double>(m.rows())); }

double rel_det(const Eigen::MatrixXcd& m) { return std::abs(m.determinant()) / std::max(1e-300, det_scale(m)); }

Grid2D torus(const RunConfig& cfg) { return Grid2D(cfg.nx, cfg.ny, cfg.K, Boundary::periodic); }

}  // namespace

json cmd_run(const RunConfig& cfg) {
    const auto dir = prepare(cfg);
    const ExperimentConfig e = cfg.experiment();
    const ExperimentResult r = run_experiment(e);
    const std::string name = output_name(e);
    write_history_csv(dir / name, r.history);
    write_field_csv(dir / ("field_" + name), r.grid, r.q);
    if (e.case_name == "riemann") write_riemann_csv(dir / ("riemann_" + name), r.grid, r.q, r.t);
    const DiagnosticsRow& last = r.history.back();
    json s{{"t", r.t},
           {"steps", r.steps},
           {"dt", r.dt},
           {"drift", r.drift},
           {"error", errors_json(last.error)},
           {"div_galerkin", last.div_galerkin},
           {"div_gfq", last.div_gfq},
           {"energy", last.energy}};
    if (e.case_name == "riemann") s["riemann_l1"] = riemann_l1(r.grid, r.q, r.t);
    write_json(dir / "summary.json", s);
    return s;
}

json cmd_converge(const RunConfig& cfg) {
    const auto dir = prepare(cfg);
    const ExperimentConfig e = cfg.experiment();
    const auto rows = converge(e, cfg.Ns, cfg.jobs);
    ExperimentConfig named = e;
    named.nx = cfg.Ns.back();
    write_convergence_csv(dir / output_name(named), rows);
    json table = json::array();
    for (const auto& r : rows)
        table.push_back({{"N", r.N}, {"error", errors_json(r.error)}, {"order", errors_json(r.order)},
                         {"seconds", r.seconds}});
    json s{{"rows", table}};
    write_json(dir / "summary.json", s);
    return s;
}

json cmd_symbols(const RunConfig& cfg) {
    const auto dir = prepare(cfg);
    const SchemeKind kind = parse_scheme(cfg.scheme);
    const SchemeOps ops = build_scheme({kind, cfg.alpha, torus(cfg)});
    const SymbolMatrix2D sym = scheme_symbol(ops);
    const auto modes = generic_modes(cfg.samples, static_cast<unsigned>(cfg.seed));
    json s{{"scheme", cfg.scheme}, {"K", cfg.K}, {"audit", cfg.audit}};
    if (cfg.audit == "det") {
        double generic_min = INFINITY, lines_max = 0.0;
        for (const auto& [tx, ty] : modes) {
            generic_min = std::min(generic_min, rel_det(sym(tx, ty)));
            lines_max = std::max({lines_max, rel_det(sym(1.0, ty)), rel_det(sym(tx, 1.0))});
        }
        s["samples"] = modes.size();
        s["min_rel_det_generic"] = generic_min;
        s["max_rel_det_t_equals_1"] = lines_max;
        s["vanishes_only_on_lines"] = generic_min >= 1e-6 && lines_max <= 1e-12;
    } else if (cfg.audit == "kernel") {
        const TorusScan scan = torus_kernel_scan(sym, cfg.nx, cfg.ny);
        json nz = json::array();
        for (const auto& m : scan.modes)
            if (m.dim > 0) nz.push_back({{"a", m.a}, {"b", m.b}, {"dim", m.dim}});
        s["nx"] = cfg.nx;
        s["ny"] = cfg.ny;
        s["kernel_dim"] = scan.total_dim;
        s["spectral_gap"] = num(scan.spectral_gap);
        s["modes"] = nz;
    } else {
        int lo = 1 << 30, hi = 0;
        for (const auto& [tx, ty] : modes) {
            const int d = kind == SchemeKind::supg_gfq ? left_kernel_dimension(reduced_supg_gfq_symbol(ops, tx, ty))
                                                        : left_kernel_dimension(sym(tx, ty));
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        s["reduced"] = kind == SchemeKind::supg_gfq;
        s["left_kernel_dim_min"] = lo;
        s["left_kernel_dim_max"] = hi;
        if (cfg.K == 1 && (kind == SchemeKind::supg_gfq || kind == SchemeKind::oss_gfq)) {
            const InvolutionReport rep = verify_involution(ops, modes);
            s["closed_form_residual"] = rep.max_residual;
        }
    }
    write_json(dir / "report.json", s);
    return s;
}

json cmd_project(const RunConfig& cfg) {
    const auto dir = prepare(cfg);
    const TestCase tc = make_case(cfg.case_name);
    const Grid2D grid(cfg.nx, cfg.ny, cfg.K, tc.bc, tc.lx, tc.ly);
    const AnalyticField f = tc.at(0.0);
    StateField q;
    json s{{"method", cfg.method}};
    if (cfg.method == "llrr") {
        LlrrOptions o;
        o.reversed = cfg.reversed;
        q = llrr_project(f, grid, o);
    } else {
        ProjectionReport rep;
        q = opt_project(f, grid, -1.0, &rep);
        s["solver"] = rep.method;
        s["constraint_residual"] = rep.constraint_residual;
    }
    const StateField sampled = sample_nodal(f, grid);
    s["div_gfq_max"] = divergence_max(DivergenceKind::gfq, grid, q);
    s["div_gfq_sampled"] = divergence_norm(DivergenceKind::gfq, grid, sampled);
    s["div_galerkin"] = divergence_norm(DivergenceKind::galerkin, grid, q);
    s["error"] = errors_json(l2_error(grid, q, tc.exact, 0.0));
    s["distance_to_samples"] = std::hypot(l2_norm(grid, q.u - sampled.u), l2_norm(grid, q.v - sampled.v));
    ExperimentConfig named = cfg.experiment();
    write_field_csv(dir / ("projected_" + output_name(named)), grid, q);
    write_json(dir / "report.json", s);
    return s;
}

json cmd_kernel_audit(const RunConfig& cfg) {
    const auto dir = prepare(cfg);
    const RankAudit a = kernel_rank_audit(cfg.K, cfg.nx);
    json s{{"K", a.K},
           {"Nx", a.Nx},
           {"rank_D_tilde", a.rank_Dt},
           {"rank_DXX_tilde", a.rank_DXXt},
           {"expected_rank", a.Nx * a.K - 1},
           {"interface_residual", a.interface_residual},
           {"Z_one", a.Z_one},
           {"Z_x", a.Z_x},
           {"Z_asymmetry", a.Z_asym},
           {"Z_min_eig", a.Z_min_eig},
           {"Z_w_ratio", a.Z_w_ratio}};
    json schemes = json::array();
    for (SchemeKind k : {SchemeKind::galerkin, SchemeKind::supg, SchemeKind::oss, SchemeKind::supg_gfq,
                         SchemeKind::oss_gfq}) {
        const SchemeOps ops = build_scheme({k, cfg.alpha, torus(cfg)});
        const TorusScan scan = torus_kernel_scan(scheme_symbol(ops), cfg.nx, cfg.ny);
        json row{{"scheme", scheme_name(k)}, {"torus_kernel_dim", scan.total_dim}};
        if (cfg.dense) row["dense_kernel_dim"] = kernel_dimension(ops.E().dense()).dim;
        schemes.push_back(row);
    }
    s["torus"] = schemes;
    write_json(dir / "report.json", s);
    return s;
}

}  // namespace gfq::cli
