#include "gfq/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "gfq/errors.hpp"

namespace gfq {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_csv(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << std::setprecision(17);
    return out;
}

// Dirichlet data on boundary nodes only; interior entries are left at zero.
StateField sample_boundary(const ExactFn& f, const Grid2D& grid, double t) {
    const auto xs = grid.x.coords(), ys = grid.y.coords();
    const int nx = grid.nx(), ny = grid.ny();
    StateField q{Field::Zero(nx, ny), Field::Zero(nx, ny), Field::Zero(nx, ny)};
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            if (i != 0 && j != 0 && i != nx - 1 && j != ny - 1) continue;
            const Vec3 v = f(xs[i], ys[j], t);
            q.u(i, j) = v[0];
            q.v(i, j) = v[1];
            q.p(i, j) = v[2];
        }
    return q;
}

DiagnosticsRow diagnose(const TestCase& tc, const Grid2D& grid, const StateField& q, double t) {
    DiagnosticsRow r;
    r.t = t;
    if (tc.has_exact)
        r.error = l2_error(grid, q, tc.exact, t);
    else
        r.error = {nan, nan, nan};
    r.div_galerkin = divergence_norm(DivergenceKind::galerkin, grid, q);
    r.div_gfq = divergence_norm(DivergenceKind::gfq, grid, q);
    r.energy = energy(grid, q);
    return r;
}

double max_diff(const StateField& a, const StateField& b) {
    return std::max({(a.u - b.u).cwiseAbs().maxCoeff(), (a.v - b.v).cwiseAbs().maxCoeff(),
                     (a.p - b.p).cwiseAbs().maxCoeff()});
}

}  // namespace

InitMode parse_init_mode(std::string_view name) {
    if (name == "sample") return InitMode::sample;
    if (name == "llrr") return InitMode::llrr;
    if (name == "opt") return InitMode::opt;
    throw ConfigError("unknown init mode '" + std::string(name) + "' (sample, llrr, opt)");
}

const char* init_mode_name(InitMode m) {
    switch (m) {
        case InitMode::sample: return "sample";
        case InitMode::llrr: return "llrr";
        case InitMode::opt: return "opt";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (K < 1 || K > 8) throw ConfigError("K must lie in [1, 8]");
    if (nx < 1 || ny < 1 || nx > 1024 || ny > 1024) throw ConfigError("cell counts must lie in [1, 1024]");
    if (!(alpha >= 0.0)) throw ConfigError("alpha must be non-negative");
    if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
    if (M < 0 || M > 5) throw ConfigError("M must lie in [0, 5]");
    if (P < 0) throw ConfigError("P must be non-negative");
    if (!(T_final >= 0.0)) throw ConfigError("T_final must be non-negative");
    if (cadence < 0) throw ConfigError("cadence must be non-negative");
    if (!(noise >= 0.0)) throw ConfigError("noise must be non-negative");
    const auto names = case_names();
    if (std::find(names.begin(), names.end(), case_name) == names.end())
        throw ConfigError("unknown case '" + case_name + "'");
    if (init == InitMode::llrr && make_case(case_name).bc == Boundary::periodic)
        throw ConfigError("llrr initialisation needs a Dirichlet case");
}

StateField initial_state(const ExperimentConfig& cfg, const TestCase& tc, const Grid2D& grid) {
    const AnalyticField f = tc.at(0.0);
    StateField q;
    switch (cfg.init) {
        case InitMode::sample: q = sample_nodal(f, grid); break;
        case InitMode::llrr: q = llrr_project(f, grid); break;
        case InitMode::opt: q = opt_project(f, grid); break;
    }
    if (cfg.perturb) {
        const auto xs = grid.x.coords(), ys = grid.y.coords();
        for (int i = 0; i < grid.nx(); ++i)
            for (int j = 0; j < grid.ny(); ++j) q.p(i, j) += cfg.perturbation(xs[i], ys[j]);
    }
    if (cfg.seed != 0 && cfg.noise > 0.0) {
        std::mt19937_64 gen(cfg.seed);
        std::uniform_real_distribution<double> U(-cfg.noise, cfg.noise);
        for (Field* c : {&q.u, &q.v, &q.p})
            for (Eigen::Index k = 0; k < c->size(); ++k) c->data()[k] += U(gen);
    }
    return q;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const TestCase tc = make_case(cfg.case_name);
    ExperimentResult res;
    res.config = cfg;
    res.grid = Grid2D(cfg.nx, cfg.ny, cfg.K, tc.bc, tc.lx, tc.ly);
    const SchemeOps ops = build_scheme({cfg.scheme, cfg.alpha, res.grid});
    res.q0 = initial_state(cfg, tc, res.grid);

    EvolveOptions opt;
    opt.T_final = cfg.T_final;
    opt.cfl = cfg.cfl;
    opt.M = cfg.M;
    opt.P = cfg.P;
    if (tc.bc == Boundary::dirichlet) {
        if (tc.stationary) {
            opt.boundary = frozen_boundary(ops, res.q0);
        } else {
            const Grid2D g = res.grid;
            const ExactFn b = tc.boundary;
            opt.boundary = exact_boundary(ops, [g, b](double t) { return sample_boundary(b, g, t); });
        }
    }
    if (cfg.cadence > 0) {
        opt.cadence = cfg.cadence;
        opt.callback = [&](const StepInfo& s, const StateField& q) {
            res.history.push_back(diagnose(tc, res.grid, q, s.t));
        };
    } else {
        res.history.push_back(diagnose(tc, res.grid, res.q0, 0.0));
    }

    EvolveResult r;
    try {
        r = evolve(ops, res.q0, opt);
    } catch (const InstabilityError& e) {
        throw InstabilityError(e.step(), cfg.case_name + " " + scheme_name(cfg.scheme) + " K=" + std::to_string(cfg.K) +
                                             " N=" + std::to_string(cfg.nx) + ": " + e.what());
    }
    res.q = std::move(r.q);
    res.t = r.t;
    res.dt = r.dt;
    res.steps = r.steps;
    if (cfg.cadence == 0) res.history.push_back(diagnose(tc, res.grid, res.q, res.t));
    res.drift = max_diff(res.q, res.q0);
    return res;
}

std::vector<ConvergenceRow> converge(const ExperimentConfig& base, const std::vector<int>& Ns, int jobs) {
    if (Ns.size() < 2) throw ConfigError("converge needs at least two meshes");
    if (!make_case(base.case_name).has_exact) throw ConfigError("converge needs a case with an exact solution");
    jobs = std::max(1, jobs);
    std::vector<ConvergenceRow> rows(Ns.size());
    const auto one = [&base](int N) {
        ExperimentConfig c = base;
        c.nx = c.ny = N;
        c.cadence = 0;
        const auto t0 = std::chrono::steady_clock::now();
        const ExperimentResult r = run_experiment(c);
        ConvergenceRow row;
        row.N = N;
        row.error = r.history.back().error;
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return row;
    };
    for (std::size_t start = 0; start < Ns.size(); start += jobs) {
        std::vector<std::future<ConvergenceRow>> batch;
        for (std::size_t i = start; i < std::min(Ns.size(), start + jobs); ++i)
            batch.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, one, Ns[i]));
        for (std::size_t i = 0; i < batch.size(); ++i) rows[start + i] = batch[i].get();
    }
    rows[0].order = {nan, nan, nan};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double s = std::log(static_cast<double>(rows[i].N) / rows[i - 1].N);
        rows[i].order.u = std::log(rows[i - 1].error.u / rows[i].error.u) / s;
        rows[i].order.v = std::log(rows[i - 1].error.v / rows[i].error.v) / s;
        rows[i].order.p = std::log(rows[i - 1].error.p / rows[i].error.p) / s;
    }
    return rows;
}

std::string output_name(const ExperimentConfig& cfg) {
    std::ostringstream s;
    s << cfg.case_name << '_' << scheme_name(cfg.scheme) << "_ord" << cfg.K + 1 << "_N" << std::setw(4)
      << std::setfill('0') << cfg.nx << ".csv";
    return s.str();
}

void write_history_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRow>& rows) {
    auto out = open_csv(path);
    out << "t,err_u,err_v,err_p,div_galerkin,div_gfq,energy\n";
    for (const auto& r : rows)
        out << r.t << ',' << r.error.u << ',' << r.error.v << ',' << r.error.p << ',' << r.div_galerkin << ','
            << r.div_gfq << ',' << r.energy << '\n';
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows) {
    auto out = open_csv(path);
    out << "N,err_u,err_v,err_p,ord_u,ord_v,ord_p\n";
    for (const auto& r : rows)
        out << r.N << ',' << r.error.u << ',' << r.error.v << ',' << r.error.p << ',' << r.order.u << ','
            << r.order.v << ',' << r.order.p << '\n';
}

void write_field_csv(const std::filesystem::path& path, const Grid2D& grid, const StateField& q) {
    auto out = open_csv(path);
    const auto xs = grid.x.coords(), ys = grid.y.coords();
    out << "x,y,u,v,p\n";
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j)
            out << xs[i] << ',' << ys[j] << ',' << q.u(i, j) << ',' << q.v(i, j) << ',' << q.p(i, j) << '\n';
}

void write_riemann_csv(const std::filesystem::path& path, const Grid2D& grid, const StateField& q, double t) {
    const RiemannProblem rp;
    auto out = open_csv(path);
    const auto xs = grid.x.coords(), ys = grid.y.coords();
    out << "r,v,v_exact\n";
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j) {
            const double r = std::hypot(xs[i] - rp.x0, ys[j] - rp.y0);
            out << r << ',' << q.v(i, j) << ',' << (r > 0.0 && t > 0.0 ? riemann_v_exact(r, t) : nan) << '\n';
        }
}

void retain_freed_memory() {
#if defined(__GLIBC__)
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
}

}  // namespace gfq
