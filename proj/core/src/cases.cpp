#include "gfq/cases.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gfq/basis1d.hpp"
#include "gfq/errors.hpp"

namespace gfq {

using std::numbers::pi;

double ObliqueWave::wavenumber() const { return 2.0 * pi / (lambda * std::cos(theta)); }

Vec3 ObliqueWave::operator()(double x, double y, double t) const {
    const double a = wavenumber();
    const double xi = x * std::cos(theta) + y * std::sin(theta);
    const double plus = std::cos(a * (xi + t)), minus = std::cos(a * (xi - t));
    const double s = -0.5 * (plus - minus);
    return {s * std::cos(theta), s * std::sin(theta), 0.5 * (plus + minus)};
}

double Vortex::f(double rho) const {
    if (rho >= 1.0) return 0.0;
    if (profile == Profile::c6) {
        const double c = 1.0 + std::cos(pi * rho);
        return gamma * c * c;
    }
    const double d = 1.0 - rho;
    return 2.0 * gamma * std::exp(-0.5 / (d * d)) * std::sqrt(g / (r0 * d * d * d));
}

Vec3 Vortex::operator()(double x, double y) const {
    const double dx = x - x0, dy = y - y0;
    const double fr = f(std::sqrt(dx * dx + dy * dy) / r0);
    return {fr * dy, -fr * dx, 1.0};
}

Vortex vortex_c6() {
    Vortex v;
    v.profile = Vortex::Profile::c6;
    v.gamma = 12.0 * pi * std::sqrt(0.981) / (v.r0 * std::sqrt(315.0 * pi * pi - 2048.0));
    return v;
}

Vortex vortex_smooth() {
    Vortex v;
    v.profile = Vortex::Profile::smooth;
    v.gamma = 0.2;
    return v;
}

double Perturbation::operator()(double x, double y) const {
    const double rho = std::hypot(x - xp, y - yp) / r0;
    if (rho >= 1.0) return 0.0;
    const double d = 1.0 - rho;
    return eps * std::exp(-0.5 / (d * d) + 0.5);
}

double riemann_L(double s) {
    if (!(s > 0.0)) throw ParameterError("riemann_L: singular at s = 0");
    if (s >= 1.0) return 0.0;
    return std::log((1.0 + std::sqrt(1.0 - s * s)) / s);
}

double riemann_v_exact(double r, double t) {
    if (!(t > 0.0)) throw ParameterError("riemann_v_exact: t must be positive");
    return riemann_L(r / t) / (2.0 * pi);
}

namespace {

double heaviside(double z) { return z > 0.0 ? 1.0 : (z < 0.0 ? 0.0 : 0.5); }

}  // namespace

Vec3 RiemannProblem::initial(double x, double y) const {
    return {heaviside(x - x0) * heaviside(y - y0), 0.0, 0.0};
}

Vec3 RiemannProblem::far_field(double x, double y, double t) const {
    const double ax = x - x0, ay = y - y0;
    if (std::abs(ay) > t) {
        // Planar wave in x carrying the jump of u across x = x0 (only above the centre).
        const double hy = heaviside(ay);
        const double wp = heaviside(ax - t), wm = heaviside(ax + t);
        return {0.5 * (wp + wm) * hy, 0.0, 0.5 * (wp - wm) * hy};
    }
    if (std::abs(ax) > t) return {heaviside(ax) * heaviside(ay), 0.0, 0.0};  // u is tangential to the y-wave
    throw ParameterError("RiemannProblem::far_field: point inside the corner region");
}

AnalyticField TestCase::at(double t) const {
    AnalyticField f;
    const ExactFn e = exact;
    f.u = [e, t](double x, double y) { return e(x, y, t)[0]; };
    f.v = [e, t](double x, double y) { return e(x, y, t)[1]; };
    f.p = [e, t](double x, double y) { return e(x, y, t)[2]; };
    f.solenoidal = stationary;
    return f;
}

TestCase make_case(const std::string& name) {
    TestCase c;
    c.name = name;
    if (name == "oblique") {
        const ObliqueWave w;
        c.bc = Boundary::periodic;
        c.exact = [w](double x, double y, double t) { return w(x, y, t); };
    } else if (name == "vortex_c6" || name == "vortex_smooth") {
        const Vortex v = name == "vortex_c6" ? vortex_c6() : vortex_smooth();
        c.bc = Boundary::dirichlet;
        c.stationary = true;
        c.exact = [v](double x, double y, double) { return v(x, y); };
    } else if (name == "riemann") {
        const RiemannProblem rp;
        c.bc = Boundary::dirichlet;
        c.has_exact = false;
        c.exact = [rp](double x, double y, double) { return rp.initial(x, y); };
        c.boundary = [rp](double x, double y, double t) { return rp.far_field(x, y, t); };
    } else {
        throw ConfigError("unknown case '" + name + "'");
    }
    if (!c.boundary && c.has_exact) c.boundary = c.exact;
    return c;
}

std::vector<std::string> case_names() { return {"oblique", "vortex_c6", "vortex_smooth", "riemann"}; }

namespace {

// Nodal quadrature weights along one line (periodic lines carry the wrapped weight on node 0).
Eigen::VectorXd line_weights(const Line1D& line) {
    const LobattoRule rule = lobatto_rule(line.K);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(line.size());
    const int n = line.size();
    for (int c = 0; c < line.cells; ++c)
        for (int s = 0; s <= line.K; ++s) {
            const int g = c * line.K + s;
            w(line.bc == Boundary::periodic ? g % n : g) += rule.weights[s] * line.dx();
        }
    return w;
}

Eigen::MatrixXd node_weights(const Grid2D& grid) {
    return line_weights(grid.x) * line_weights(grid.y).transpose();
}

}  // namespace

L2Errors l2_error(const Grid2D& grid, const StateField& q, const ExactFn& exact, double t) {
    const auto xs = grid.x.coords(), ys = grid.y.coords();
    const Eigen::MatrixXd w = node_weights(grid);
    double eu = 0.0, ev = 0.0, ep = 0.0;
    for (int a = 0; a < grid.nx(); ++a)
        for (int b = 0; b < grid.ny(); ++b) {
            const Vec3 e = exact(xs[a], ys[b], t);
            eu += w(a, b) * std::pow(q.u(a, b) - e[0], 2);
            ev += w(a, b) * std::pow(q.v(a, b) - e[1], 2);
            ep += w(a, b) * std::pow(q.p(a, b) - e[2], 2);
        }
    return {std::sqrt(eu), std::sqrt(ev), std::sqrt(ep)};
}

double l2_norm(const Grid2D& grid, const Field& f) {
    return std::sqrt((node_weights(grid).array() * f.array().square()).sum());
}

double divergence_norm(DivergenceKind kind, const Grid2D& grid, const StateField& q) {
    const Field d = discrete_divergence(kind, grid, q.u, q.v);
    return std::sqrt(d.squaredNorm() * grid.x.dx() * grid.y.dx());
}

double divergence_max(DivergenceKind kind, const Grid2D& grid, const StateField& q) {
    return discrete_divergence(kind, grid, q.u, q.v).cwiseAbs().maxCoeff();
}

double energy(const Grid2D& grid, const StateField& q) {
    const Eigen::MatrixXd w = node_weights(grid);
    return 0.5 * (w.array() * (q.u.array().square() + q.v.array().square() + q.p.array().square())).sum();
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<int>& Ns) {
    if (errors.size() != Ns.size()) throw ParameterError("eoc: size mismatch");
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        out.push_back(std::log(errors[i] / errors[i + 1]) / std::log(static_cast<double>(Ns[i + 1]) / Ns[i]));
    return out;
}

double riemann_l1(const Grid2D& grid, const StateField& q, double t, double lo, double hi) {
    const RiemannProblem rp;
    const auto xs = grid.x.coords(), ys = grid.y.coords();
    const Eigen::MatrixXd w = node_weights(grid);
    double num = 0.0, den = 0.0;
    for (int a = 0; a < grid.nx(); ++a)
        for (int b = 0; b < grid.ny(); ++b) {
            const double r = std::hypot(xs[a] - rp.x0, ys[b] - rp.y0);
            if (r < lo * t || r > hi * t) continue;
            num += w(a, b) * std::abs(q.v(a, b) - riemann_v_exact(r, t));
            den += w(a, b);
        }
    if (den == 0.0) throw ParameterError("riemann_l1: empty annulus");
    return num / den;
}

double pde_residual(const ExactFn& f, int samples, unsigned seed, double h) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double x = U(gen), y = U(gen), t = U(gen);
        const auto d = [&](double dx, double dy, double dt) {
            const Vec3 a = f(x + dx, y + dy, t + dt), b = f(x - dx, y - dy, t - dt);
            return Vec3{(a[0] - b[0]) / (2 * h), (a[1] - b[1]) / (2 * h), (a[2] - b[2]) / (2 * h)};
        };
        const Vec3 qt = d(0, 0, h), qx = d(h, 0, 0), qy = d(0, h, 0);
        worst = std::max({worst, std::abs(qt[0] + qx[2]), std::abs(qt[1] + qy[2]), std::abs(qt[2] + qx[0] + qy[1])});
    }
    return worst;
}

}  // namespace gfq
