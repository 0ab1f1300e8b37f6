#include "gfq/wellprep.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <cmath>

#include "gfq/basis1d.hpp"
#include "gfq/errors.hpp"

namespace gfq {

StateField sample_nodal(const AnalyticField& f, const Grid2D& grid) {
    const auto xs = grid.x.coords(), ys = grid.y.coords();
    StateField q(grid.nx(), grid.ny());
    for (int a = 0; a < grid.nx(); ++a)
        for (int b = 0; b < grid.ny(); ++b) {
            q.u(a, b) = f.u ? f.u(xs[a], ys[b]) : 0.0;
            q.v(a, b) = f.v ? f.v(xs[a], ys[b]) : 0.0;
            q.p(a, b) = f.p ? f.p(xs[a], ys[b]) : 0.0;
        }
    return q;
}

namespace {

// Marches one line: vals[0] is given, the rest satisfy the integral conditions cell by cell.
// quad(c, lo, hi) returns the exact integral over [lo, hi] of the target along the line.
class LineMarcher {
public:
    LineMarcher(const Line1D& line, const LlrrOptions& opt, bool reversed)
        : line_(line), rule_(lobatto_rule(line.K)), reversed_(reversed) {
        const int K = line.K;
        const LocalBlocks lb = local_blocks(rule_, line.dx());
        table_ = reversed ? lb.reversed_integrator() : lb.integrator();
        const Eigen::MatrixXd sub = reversed ? table_.topLeftCorner(K, K) : table_.bottomRightCorner(K, K);
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) * 1e12 < sv(0))
            throw NumericalError("llrr: singular local integrator system (every element of the line, K=" +
                                 std::to_string(K) + ")");
        lu_ = sub.partialPivLu();
        gauss_ = gauss_legendre(opt.quad_points > 0 ? opt.quad_points : K + 3);
        subdiv_ = std::max(1, opt.subdivisions);
    }

    // f(t): target along the line. first: value at the starting end.
    std::vector<double> march(const std::function<double(double)>& f, double first) const {
        const int K = line_.K, n = line_.cells * K + 1;
        std::vector<double> out(n);
        const double dx = line_.dx();
        Eigen::VectorXd rhs(K);
        if (!reversed_) {
            out[0] = first;
            for (int c = 0; c < line_.cells; ++c) {
                const double x0 = line_.origin + c * dx;
                double cum = 0.0;
                for (int s = 1; s <= K; ++s) {
                    cum += integrate(f, x0 + rule_.nodes[s - 1] * dx, x0 + rule_.nodes[s] * dx);
                    rhs(s - 1) = cum - table_(s, 0) * out[c * K];
                }
                const Eigen::VectorXd sol = lu_.solve(rhs);
                for (int s = 1; s <= K; ++s) out[c * K + s] = sol(s - 1);
            }
        } else {
            out[n - 1] = first;
            for (int c = line_.cells - 1; c >= 0; --c) {
                const double x0 = line_.origin + c * dx;
                double cum = 0.0;
                for (int s = K - 1; s >= 0; --s) {
                    cum += integrate(f, x0 + rule_.nodes[s] * dx, x0 + rule_.nodes[s + 1] * dx);
                    rhs(s) = -cum - table_(s, K) * out[c * K + K];
                }
                const Eigen::VectorXd sol = lu_.solve(rhs);
                for (int s = 0; s < K; ++s) out[c * K + s] = sol(s);
            }
        }
        return out;
    }

private:
    double integrate(const std::function<double(double)>& f, double lo, double hi) const {
        const double w = (hi - lo) / subdiv_;
        double sum = 0.0;
        for (int k = 0; k < subdiv_; ++k)
            for (std::size_t q = 0; q < gauss_.nodes.size(); ++q)
                sum += gauss_.weights[q] * f(lo + (k + gauss_.nodes[q]) * w);
        return sum * w;
    }

    const Line1D& line_;
    LobattoRule rule_;
    bool reversed_;
    Eigen::MatrixXd table_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    GaussRule gauss_;
    int subdiv_ = 1;
};

}  // namespace

StateField llrr_project(const AnalyticField& f, const Grid2D& grid, const LlrrOptions& opt) {
    if (grid.bc() == Boundary::periodic) throw ParameterError("llrr_project: requires a non-periodic grid");
    if (!f.u || !f.v) throw ParameterError("llrr_project: u and v must be given");
    StateField q = sample_nodal(f, grid);
    const auto xs = grid.x.coords(), ys = grid.y.coords();
    const LineMarcher my(grid.y, opt, opt.reversed), mx(grid.x, opt, opt.reversed);
    const int nx = grid.nx(), ny = grid.ny();
    for (int a = 0; a < nx; ++a) {
        const double x = xs[a];
        const auto col = my.march([&](double y) { return f.u(x, y); }, q.u(a, opt.reversed ? ny - 1 : 0));
        for (int b = 0; b < ny; ++b) q.u(a, b) = col[b];
    }
    for (int b = 0; b < ny; ++b) {
        const double y = ys[b];
        const auto row = mx.march([&](double x) { return f.v(x, y); }, q.v(opt.reversed ? nx - 1 : 0, b));
        for (int a = 0; a < nx; ++a) q.v(a, b) = row[a];
    }
    return q;
}

StateField opt_project(const StateField& q, const Grid2D& grid, double tol, ProjectionReport* report) {
    const SparseMatrix Cr = subcell_phi_matrix(grid);
    const Eigen::SparseMatrix<double> C = Cr;
    Eigen::VectorXd x(q.u.size() + q.v.size());
    x << flatten(q.u), flatten(q.v);
    const Eigen::VectorXd r = C * x;
    const Eigen::SparseMatrix<double> CCt = C * C.transpose();

    ProjectionReport rep;
    Eigen::VectorXd lambda;
    if (x.size() <= 20000) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(CCt);
        if (ldlt.info() != Eigen::Success) throw NumericalError("opt_project: factorization of C C^T failed");
        lambda = ldlt.solve(r);
        if (ldlt.info() != Eigen::Success) throw NumericalError("opt_project: solve with C C^T failed");
        rep.method = "direct";
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<double>>
            cg(CCt);
        cg.setTolerance(1e-13);
        cg.setMaxIterations(static_cast<int>(std::min<Eigen::Index>(100000, 10 * CCt.rows())));
        lambda = cg.solve(r);
        if (cg.info() != Eigen::Success) throw NumericalError("opt_project: CG did not converge");
        rep.method = "cg";
        rep.iterations = static_cast<int>(cg.iterations());
    }
    x -= C.transpose() * lambda;

    const Eigen::Index n = q.u.size();
    StateField out(unflatten(x.head(n), grid.nx(), grid.ny()), unflatten(x.tail(n), grid.nx(), grid.ny()), q.p);
    rep.constraint_residual = (C * x).cwiseAbs().maxCoeff();
    rep.divergence = discrete_divergence(DivergenceKind::gfq, grid, out.u, out.v).cwiseAbs().maxCoeff();
    if (tol < 0.0) tol = 1e-11 * std::max({1.0, q.u.cwiseAbs().maxCoeff(), q.v.cwiseAbs().maxCoeff()});
    if (report) *report = rep;
    if (!(rep.divergence <= tol))
        throw ConvergenceError("opt_project: GFq divergence " + std::to_string(rep.divergence) +
                               " above tolerance " + std::to_string(tol));
    return out;
}

StateField opt_project(const AnalyticField& f, const Grid2D& grid, double tol, ProjectionReport* report) {
    return opt_project(sample_nodal(f, grid), grid, tol, report);
}

}  // namespace gfq
