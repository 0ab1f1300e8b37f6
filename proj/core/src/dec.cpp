#include "gfq/dec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gfq/basis1d.hpp"
#include "gfq/errors.hpp"

namespace gfq {

DeCTableau dec_tableau(int M) {
    if (M < 1 || M > 5) throw ParameterError("dec_tableau: M must lie in [1, 5]");
    DeCTableau tab;
    tab.M = M;
    tab.nodes = lobatto_rule(M).nodes;
    tab.beta = tab.nodes;
    tab.theta = Eigen::MatrixXd::Zero(M + 1, M + 1);
    const GaussRule g = gauss_legendre(M + 1);
    for (int m = 1; m <= M; ++m)
        for (int r = 0; r <= M; ++r) {
            double s = 0.0;
            for (std::size_t q = 0; q < g.nodes.size(); ++q)
                s += g.weights[q] * lagrange_eval(tab.nodes, r, tab.nodes[m] * g.nodes[q]);
            tab.theta(m, r) = s * tab.nodes[m];
        }
    return tab;
}

namespace {

void copy_boundary(const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask, const StateField& src,
                   StateField& dst) {
    for (int c = 0; c < 3; ++c) dst[c] = mask.select(src[c], dst[c]);
}

}  // namespace

BoundaryHook frozen_boundary(const SchemeOps& ops, const StateField& q0) {
    if (ops.grid().bc() == Boundary::periodic) return {};
    return [mask = ops.boundary_mask(), q0](double, StateField& q) { copy_boundary(mask, q0, q); };
}

BoundaryHook exact_boundary(const SchemeOps& ops, std::function<StateField(double)> exact) {
    if (ops.grid().bc() == Boundary::periodic) return {};
    return [mask = ops.boundary_mask(), exact = std::move(exact)](double t, StateField& q) {
        copy_boundary(mask, exact(t), q);
    };
}

DeCStepper::DeCStepper(const SchemeOps& ops, int M, int P, BoundaryHook boundary)
    : ops_(&ops), tab_(dec_tableau(M)), P_(P), boundary_(std::move(boundary)) {
    if (P < 1) throw ParameterError("DeC: P must be >= 1");
}

StateField DeCStepper::step(const StateField& q, double t, double dt, long step) {
    if (!(dt > 0.0)) throw ParameterError("DeC: dt must be positive");
    const int M = tab_.M;
    cur_.assign(M + 1, q);
    next_.assign(M + 1, q);
    Eq_.resize(M + 1);
    // q^{(0),m} = q for every m, so a single evaluation covers the first sweep.
    const StateField Eq0 = ops_->apply_E(q);
    for (int r = 0; r <= M; ++r) Eq_[r] = Eq0;

    for (int p = 1; p <= P_; ++p) {
        if (p > 1)
            for (int r = 1; r <= M; ++r) Eq_[r] = ops_->apply_E(cur_[r]);
        for (int m = 1; m <= M; ++m) {
            diff_ = cur_[m];
            diff_ -= q;
            StateField res = ops_->apply_A(diff_);
            for (int r = 0; r <= M; ++r) res.axpy(dt * tab_.theta(m, r), Eq_[r]);
            next_[m] = cur_[m];
            ops_->add_L_inv(-1.0, res, next_[m]);
            if (boundary_) boundary_(t + tab_.beta[m] * dt, next_[m]);
        }
        std::swap(cur_, next_);
    }
    StateField out = std::move(cur_[M]);
    if (!out.all_finite()) throw InstabilityError(step, "DeC produced non-finite values at step " + std::to_string(step));
    return out;
}

StateField dec_step(const SchemeOps& ops, const StateField& q, double dt, int M, int P, const BoundaryHook& boundary,
                    double t) {
    DeCStepper s(ops, M, P, boundary);
    return s.step(q, t, dt);
}

Eigen::MatrixXcd dec_amplification(const SchemeOps& ops, cplx tx, cplx ty, double dt, int M, int P) {
    const DeCTableau tab = dec_tableau(M);
    const Eigen::MatrixXcd A = scheme_symbol(ops, true)(tx, ty);
    const Eigen::MatrixXcd E = scheme_symbol(ops)(tx, ty);
    const Eigen::MatrixXcd mx = extract_symbol(*ops.ops(Direction::x).L)(tx);
    const Eigen::MatrixXcd my = extract_symbol(*ops.ops(Direction::y).L)(ty);
    const Eigen::Index n = mx.rows() * my.rows();
    Eigen::VectorXcd linv(3 * n);
    for (Eigen::Index a = 0; a < mx.rows(); ++a)
        for (Eigen::Index b = 0; b < my.rows(); ++b)
            for (int c = 0; c < 3; ++c) linv(c * n + a * my.rows() + b) = 1.0 / (mx(a, a) * my(b, b));

    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(3 * n, 3 * n);
    std::vector<Eigen::MatrixXcd> cur(M + 1, I), next(M + 1, I), EQ(M + 1);
    for (int p = 1; p <= P; ++p) {
        for (int r = 0; r <= M; ++r) EQ[r] = E * cur[r];
        for (int m = 1; m <= M; ++m) {
            Eigen::MatrixXcd res = A * (cur[m] - I);
            for (int r = 0; r <= M; ++r) res += dt * tab.theta(m, r) * EQ[r];
            next[m] = cur[m] - linv.asDiagonal() * res;
        }
        std::swap(cur, next);
    }
    return cur[M];
}

double dec_max_amplification(const SchemeOps& ops, int nx, int ny, double dt, int M, int P) {
    double worst = 0.0;
    for (int a = 0; a < nx; ++a)
        for (int b = 0; b < ny; ++b) {
            const cplx tx = std::polar(1.0, 2.0 * std::numbers::pi * a / nx);
            const cplx ty = std::polar(1.0, 2.0 * std::numbers::pi * b / ny);
            const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(dec_amplification(ops, tx, ty, dt, M, P), false);
            worst = std::max(worst, es.eigenvalues().cwiseAbs().maxCoeff());
        }
    return worst;
}

int default_subtimesteps(int K) { return std::min(5, (K + 2) / 2); }
int default_iterations(int K) { return K + 1; }

double time_step(const Grid2D& grid, double cfl) {
    if (!(cfl > 0.0)) throw ParameterError("cfl must be positive");
    return cfl * grid.h() / (2.0 * grid.K() + 1.0);
}

EvolveResult evolve(const SchemeOps& ops, StateField q0, const EvolveOptions& opt) {
    if (opt.T_final < opt.t0) throw ParameterError("evolve: T_final before t0");
    const int K = ops.grid().K();
    const int M = opt.M > 0 ? opt.M : default_subtimesteps(K);
    const int P = opt.P > 0 ? opt.P : default_iterations(K);
    const double dt = time_step(ops.grid(), opt.cfl);
    const double span = opt.T_final - opt.t0;
    const long n = span <= 0.0 ? 0 : static_cast<long>(std::ceil(span / dt - 1e-9));

    EvolveResult res;
    res.dt = dt;
    res.t = opt.t0;
    res.q = std::move(q0);
    DeCStepper stepper(ops, M, P, opt.boundary);
    if (opt.callback && opt.cadence > 0) opt.callback({0, res.t, dt}, res.q);
    for (long k = 1; k <= n; ++k) {
        const double h = k == n ? opt.T_final - res.t : dt;
        res.q = stepper.step(res.q, res.t, h, k);
        res.t = k == n ? opt.T_final : opt.t0 + k * dt;
        res.steps = k;
        if (opt.callback && opt.cadence > 0 && (k % opt.cadence == 0 || k == n)) opt.callback({k, res.t, h}, res.q);
    }
    return res;
}

}  // namespace gfq
