#include "gfq/symbols.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "gfq/errors.hpp"

namespace gfq {

namespace {

Eigen::MatrixXcd ckron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
}

KernelInfo classify(const Eigen::VectorXd& sv, double sigma_max, double rel_tol) {
    KernelInfo info;
    info.sigma_max = sigma_max;
    double below = 0.0, above = std::numeric_limits<double>::infinity();
    for (double s : sv) {
        if (s <= rel_tol * sigma_max) {
            ++info.dim;
            below = std::max(below, s);
        } else {
            above = std::min(above, s);
        }
    }
    info.spectral_gap = below > 0.0 ? above / below : std::numeric_limits<double>::infinity();
    return info;
}

}  // namespace

Eigen::MatrixXcd LaurentBlockPoly::operator()(cplx t) const {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(K, K);
    for (const auto& [k, c] : coeffs) r += std::pow(t, k) * c.cast<cplx>();
    return r;
}

int LaurentBlockPoly::kmax() const {
    int m = 0;
    for (const auto& [k, c] : coeffs)
        if (c.cwiseAbs().maxCoeff() > 0.0) m = std::max(m, std::abs(k));
    return m;
}

LaurentBlockPoly extract_symbol(const Operator1D& op) {
    if (op.bc() != Boundary::periodic) throw ParameterError("extract_symbol: operator is not periodic");
    LaurentBlockPoly p;
    p.K = op.K();
    for (const auto& [k, m] : op.stencil)
        if (m.size() > 0 && m.cwiseAbs().maxCoeff() > 0.0) p.coeffs[k] = m;
    return p;
}

LaurentBlockPoly symbol_product(const LaurentBlockPoly& a, const LaurentBlockPoly& b) {
    if (a.K != b.K) throw ParameterError("symbol_product: block size mismatch");
    LaurentBlockPoly c;
    c.K = a.K;
    for (const auto& [ka, ma] : a.coeffs)
        for (const auto& [kb, mb] : b.coeffs) {
            auto& m = c.coeffs[ka + kb];
            if (m.size() == 0) m = Eigen::MatrixXd::Zero(a.K, a.K);
            m += ma * mb;
        }
    return c;
}

Eigen::MatrixXcd SymbolMatrix2D::operator()(cplx tx, cplx ty) const {
    const int n = K * K;
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (const SymbolTerm& t : blocks[i][j]) r.block(i * n, j * n, n, n) += t.coef * ckron(t.x(tx), t.y(ty));
    return r;
}

SymbolMatrix2D symbol_of(const BlockOperator& op) {
    SymbolMatrix2D s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (const Term& t : op.block(i, j)) {
                s.K = t.x->K();
                s.blocks[i][j].push_back(SymbolTerm{t.coef, extract_symbol(*t.x), extract_symbol(*t.y)});
            }
    return s;
}

SymbolMatrix2D scheme_symbol(const SchemeOps& ops, bool mass) {
    if (ops.grid().bc() != Boundary::periodic) throw ParameterError("scheme_symbol: requires a periodic grid");
    SymbolMatrix2D s = symbol_of(mass ? ops.A() : ops.E());
    s.K = ops.grid().K();
    return s;
}

KernelInfo kernel_dimension(const Eigen::MatrixXd& m, double rel_tol) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd sv = svd.singularValues();
    KernelInfo info = classify(sv, sv.size() ? sv(0) : 0.0, rel_tol);
    info.dim += static_cast<int>(m.cols() - sv.size());
    return info;
}

KernelInfo kernel_dimension(const Eigen::MatrixXcd& m, double rel_tol) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    const Eigen::VectorXd sv = svd.singularValues();
    KernelInfo info = classify(sv, sv.size() ? sv(0) : 0.0, rel_tol);
    info.dim += static_cast<int>(m.cols() - sv.size());
    return info;
}

Eigen::MatrixXcd kernel_basis(const Eigen::MatrixXcd& m, double rel_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > rel_tol * smax) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

TorusScan torus_kernel_scan(const SymbolMatrix2D& sym, int nx, int ny, double rel_tol) {
    if (nx < 1 || ny < 1 || nx > 64 || ny > 64) throw ParameterError("torus_kernel_scan: sizes must lie in [1, 64]");
    TorusScan scan;
    std::vector<Eigen::VectorXd> svs;
    for (int a = 0; a < nx; ++a)
        for (int b = 0; b < ny; ++b) {
            ModeKernel mk;
            mk.a = a;
            mk.b = b;
            mk.tx = std::polar(1.0, 2.0 * std::numbers::pi * a / nx);
            mk.ty = std::polar(1.0, 2.0 * std::numbers::pi * b / ny);
            Eigen::BDCSVD<Eigen::MatrixXcd> svd(sym(mk.tx, mk.ty));
            svs.push_back(svd.singularValues());
            scan.sigma_max = std::max(scan.sigma_max, svs.back()(0));
            scan.modes.push_back(mk);
        }
    double below = 0.0, above = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < svs.size(); ++i) {
        const KernelInfo k = classify(svs[i], scan.sigma_max, rel_tol);
        scan.modes[i].dim = k.dim;
        scan.modes[i].sigma_min = svs[i](svs[i].size() - 1);
        scan.total_dim += k.dim;
        for (double s : svs[i]) {
            if (s < rel_tol * scan.sigma_max) below = std::max(below, s);
            else above = std::min(above, s);
        }
    }
    scan.spectral_gap = below > 0.0 ? above / below : std::numeric_limits<double>::infinity();
    return scan;
}

Q1Symbols q1_symbols(const LineOperators& o, cplx t) {
    if (o.M->K() != 1) throw ParameterError("q1_symbols: requires K = 1");
    const auto f = [t](const Operator1D& op) { return extract_symbol(op)(t)(0, 0); };
    Q1Symbols s;
    s.M = f(*o.M);
    s.D = f(*o.D);
    s.DXX = f(*o.DXX);
    s.DI = f(*o.DI);
    s.DXXI = f(*o.DXXI);
    s.DXX_M = f(compose(*o.DXX, *o.M));
    s.D_M_M = f(compose(*o.D, *o.M, *o.M));
    s.tau = s.DI / s.D;
    return s;
}

Eigen::RowVector3cd involution_supg_gfq_q1(const Q1Symbols& x, const Q1Symbols& y, double ah) {
    const cplx k = x.DXX * y.M + x.M * y.DXX;
    const double a2 = ah * ah;
    Eigen::RowVector3cd w;
    w << x.D * (y.D * y.D * x.M - a2 * y.DXX * k), y.D * (-x.D * x.D * y.M + a2 * x.DXX * k),
        ah * (-x.DXX * y.D * y.D * x.M + x.D * x.D * y.DXX * y.M);
    return w;
}

Eigen::RowVector3cd involution_oss_gfq_q1(const Q1Symbols& x, const Q1Symbols& y, double ah) {
    const cplx inner = y.D * y.D * x.M * x.M - y.M * (-y.DXX * x.M * x.M - x.D * x.D * y.M - x.DXX_M * y.M);
    // Each relation reads c * K = rhs; solved for K.
    const cplx ku = -((y.D * y.D + y.DXX_M) * inner) / (y.D_M_M * x.M);
    const cplx kv = ((x.D * x.D + x.DXX_M) * inner) / (x.D_M_M * y.M);
    const double a2 = ah * ah;
    Eigen::RowVector3cd w;
    w << y.D * x.M + a2 * ku, -x.D * y.M + a2 * kv,
        ah * (-x.DXX * y.D * x.M / x.D + x.D * y.DXX * y.M / y.D);
    return w;
}

InvolutionReport verify_involution(const SchemeOps& ops, const std::vector<std::pair<cplx, cplx>>& modes) {
    const SchemeKind s = ops.config().scheme;
    if (ops.grid().K() != 1) throw ParameterError("verify_involution: closed forms exist for K = 1 only");
    if (s != SchemeKind::supg_gfq && s != SchemeKind::oss_gfq)
        throw ParameterError("verify_involution: scheme has no closed-form involution");
    const SymbolMatrix2D sym = scheme_symbol(ops);
    const double ah = ops.config().alpha * ops.grid().h();
    InvolutionReport rep;
    for (const auto& [tx, ty] : modes) {
        const Q1Symbols sx = q1_symbols(ops.ops(Direction::x), tx);
        const Q1Symbols sy = q1_symbols(ops.ops(Direction::y), ty);
        const Eigen::RowVector3cd w =
            s == SchemeKind::supg_gfq ? involution_supg_gfq_q1(sx, sy, ah) : involution_oss_gfq_q1(sx, sy, ah);
        const Eigen::MatrixXcd F = sym(tx, ty);
        const double r = (w * F).norm() / (w.norm() * F.norm());
        rep.max_residual = std::max(rep.max_residual, r);
        ++rep.samples;
    }
    return rep;
}

Eigen::MatrixXcd reduced_supg_gfq_symbol(const SchemeOps& ops, cplx tx, cplx ty) {
    const LineOperators& X = ops.ops(Direction::x);
    const LineOperators& Y = ops.ops(Direction::y);
    const auto f = [](const OpPtr& op, cplx t) { return extract_symbol(*op)(t); };
    const double ah = ops.config().alpha * ops.grid().h();
    const Eigen::MatrixXcd Mx = f(X.M, tx), Dx = f(X.D, tx), Xx = f(X.DXX, tx);
    const Eigen::MatrixXcd My = f(Y.M, ty), Dy = f(Y.D, ty), Xy = f(Y.DXX, ty);
    const Eigen::Index n = Mx.rows() * My.rows();
    Eigen::MatrixXcd r(3 * n, 2 * n);
    r.block(0, 0, n, n) = ah * ckron(Xx, Dy);
    r.block(0, n, n, n) = ckron(Dx, My);
    r.block(n, 0, n, n) = ah * ckron(Dx, Xy);
    r.block(n, n, n, n) = ckron(Mx, Dy);
    r.block(2 * n, 0, n, n) = ckron(Dx, Dy);
    r.block(2 * n, n, n, n) = ah * (ckron(Xx, My) + ckron(Mx, Xy));
    return r;
}

int left_kernel_dimension(const Eigen::MatrixXcd& m, double rel_tol) {
    return kernel_dimension(Eigen::MatrixXcd(m.adjoint()), rel_tol).dim;
}

std::vector<std::pair<cplx, cplx>> generic_modes(int count, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.1, std::numbers::pi - 0.1);
    std::bernoulli_distribution flip(0.5);
    const auto draw = [&] { return std::polar(1.0, flip(gen) ? u(gen) : -u(gen)); };
    std::vector<std::pair<cplx, cplx>> m;
    for (int i = 0; i < count; ++i) {
        const cplx a = draw();
        m.emplace_back(a, draw());
    }
    return m;
}

RankAudit kernel_rank_audit(int K, int Nx) {
    if (K < 1 || K > 4 || Nx < 2 || Nx > 32) throw ParameterError("kernel_rank_audit: requires K <= 4 and 2 <= Nx <= 32");
    RankAudit r;
    r.K = K;
    r.Nx = Nx;
    const Line1D line{Nx, K, 0.0, 1.0, Boundary::dirichlet};
    const double dx = line.dx();
    const LobattoRule rule = lobatto_rule(K);
    const std::vector<double> psi_nodes = K == 1 ? std::vector<double>{0.5} : lobatto_rule(K - 1).nodes;
    const auto psi = [&](int k, double x) { return K == 1 ? 1.0 : lagrange_eval(psi_nodes, k, x); };

    const int rows = Nx * K - 1, cols = Nx * K;
    Eigen::MatrixXd Dt = Eigen::MatrixXd::Zero(rows, cols), DXXt = Eigen::MatrixXd::Zero(rows, cols);
    for (int e = 0; e < Nx; ++e)
        for (int a = 0; a <= K; ++a) {
            const int alpha = e * K + a;
            if (alpha < 1 || alpha > rows) continue;
            for (int k = 0; k < K; ++k) {
                Dt(alpha - 1, e * K + k) += rule.weights[a] * psi(k, rule.nodes[a]);
                double s = 0.0;
                for (int q = 0; q <= K; ++q)
                    s += rule.weights[q] * lagrange_deriv(rule, a, rule.nodes[q]) * psi(k, rule.nodes[q]);
                DXXt(alpha - 1, e * K + k) += s / dx;
            }
        }
    const auto null_vectors = [](const Eigen::MatrixXd& m, int& rank) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
        const Eigen::VectorXd sv = svd.singularValues();
        rank = 0;
        while (rank < sv.size() && sv(rank) >= 1e-10 * sv(0)) ++rank;
        return Eigen::MatrixXd(svd.matrixV().rightCols(m.cols() - rank));
    };
    const Eigen::MatrixXd kD = null_vectors(Dt, r.rank_Dt);
    const Eigen::MatrixXd kX = null_vectors(DXXt, r.rank_DXXt);
    if (kD.cols() >= 1) {
        const Eigen::VectorXd q = kD.col(0);
        const double qmax = q.cwiseAbs().maxCoeff();
        for (int i = 1; i < Nx; ++i)
            r.interface_residual = std::max(r.interface_residual, std::abs(q(i * K) + q((i - 1) * K + K - 1)) / qmax);
    }
    if (kX.cols() >= 1) {
        Eigen::VectorXd q = kX.col(0);
        if (q(0) < 0) q = -q;
        r.DXXt_kernel_const_dev = (q.array() - 1.0 / std::sqrt(static_cast<double>(cols))).abs().maxCoeff();
    }

    const LineOperators ops = LineOperators::build(line);
    const int n = line.size();
    const Eigen::MatrixXd D = ops.D->dense().middleRows(1, n - 2);
    const Eigen::MatrixXd Z = ops.Z->dense();
    const Eigen::MatrixXd DXX = ops.DXX->dense();
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(n);
    const std::vector<double> xc = line.coords();
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(xc.data(), n);
    r.Z_one = (Z.middleRows(1, n - 2) * one).cwiseAbs().maxCoeff();
    r.Z_x = (Z.middleRows(1, n - 2) * x).cwiseAbs().maxCoeff();
    r.DXX_one = (DXX.middleRows(1, n - 2) * one).cwiseAbs().maxCoeff();
    r.DXX_x = (DXX.middleRows(1, n - 2) * x).cwiseAbs().maxCoeff();
    const Eigen::MatrixXd Zi = Z.block(1, 1, n - 2, n - 2);
    r.Z_asym = (Zi - Zi.transpose()).cwiseAbs().maxCoeff() / Zi.cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Zi + Zi.transpose()), Eigen::EigenvaluesOnly);
    r.Z_min_eig = es.eigenvalues()(0);

    int rankD = 0;
    const Eigen::MatrixXd kFull = null_vectors(D, rankD);
    r.dim_ker_D_full = static_cast<int>(kFull.cols());
    // Generator of the D_x kernel orthogonal to constants.
    Eigen::VectorXd best;
    for (Eigen::Index c = 0; c < kFull.cols(); ++c) {
        Eigen::VectorXd w = kFull.col(c) - (kFull.col(c).dot(one) / n) * one;
        if (best.size() == 0 || w.norm() > best.norm()) best = w;
    }
    if (best.size() && best.norm() > 0.0) {
        best.normalize();
        r.Z_w_ratio = (Z.middleRows(1, n - 2) * best).norm();
    }
    return r;
}

}  // namespace gfq
