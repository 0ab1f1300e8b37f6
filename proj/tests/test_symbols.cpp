#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gfq/errors.hpp"
#include "gfq/symbols.hpp"

using namespace gfq;
using std::numbers::pi;

namespace {

cplx unit(double theta) { return std::polar(1.0, theta); }

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double det_scale(const Eigen::MatrixXcd& m) { return std::pow(m.norm(), static_cast<double>(m.rows())); }

// Angle between two complex vectors.
double angle(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    const Eigen::VectorXcd an = a.normalized(), bn = b.normalized();
    const Eigen::VectorXcd perp = an - bn * bn.dot(an);
    return std::asin(std::min(1.0, perp.norm()));
}

}  // namespace

TEST_CASE("Q1 closed-form symbols") {
    const Line1D line{8, 1, 0.0, 1.0, Boundary::periodic};
    const double dx = line.dx();
    const auto o = LineOperators::build(line);
    const auto M = extract_symbol(*o.M), D = extract_symbol(*o.D), S = extract_symbol(*o.DXX),
               I = extract_symbol(*o.I), DI = extract_symbol(*o.DI), SI = extract_symbol(*o.DXXI);
    double worst = 0.0;
    for (int k = 0; k < 64; ++k) {
        const cplx t = unit(2.0 * pi * (k + 0.37) / 64.0);
        worst = std::max({worst, rel(M(t)(0, 0), 1.0), rel(D(t)(0, 0), (t * t - 1.0) / (2.0 * t * dx)),
                          rel(S(t)(0, 0), -(t - 1.0) * (t - 1.0) / (t * dx * dx)),
                          rel(I(t)(0, 0), dx * (t + 1.0) / (2.0 * t)),
                          rel(DI(t)(0, 0), (t + 1.0) * (t + 1.0) / (4.0 * t)),
                          rel(SI(t)(0, 0), -(t - 1.0) * (t + 1.0) / (2.0 * t * dx))});
    }
    CHECK(worst <= 1e-12);
    CHECK_THROWS(extract_symbol(*LineOperators::build({4, 1, 0.0, 1.0, Boundary::dirichlet}).D));
}

TEST_CASE("symbols reproduce the dense action on discrete Fourier modes") {
    std::mt19937 gen(3);
    std::normal_distribution<double> nd;
    for (int K = 1; K <= 4; ++K) {
        const int N = 7;
        const Line1D line{N, K, 0.0, 1.0, Boundary::periodic};
        const auto o = LineOperators::build(line);
        for (const auto& op : {o.M, o.D, o.DX, o.DXX, o.I, o.DI, o.DXXI, o.Z, o.ZI}) {
            const Eigen::MatrixXd A = op->dense();
            const LaurentBlockPoly F = extract_symbol(*op);
            double worst = 0.0;
            for (int m = 0; m < N; ++m) {
                const cplx t = unit(2.0 * pi * m / N);
                Eigen::VectorXcd c(K);
                for (int s = 0; s < K; ++s) c(s) = cplx(nd(gen), nd(gen));
                // Cell i owns nodes iK+1..iK+K.
                Eigen::VectorXcd v(N * K);
                for (int i = 0; i < N; ++i)
                    for (int s = 1; s <= K; ++s) v((i * K + s) % (N * K)) = std::pow(t, i) * c(s - 1);
                const Eigen::VectorXcd Av = A.cast<cplx>() * v;
                const Eigen::VectorXcd Fc = F(t) * c;
                for (int i = 0; i < N; ++i)
                    for (int s = 1; s <= K; ++s)
                        worst = std::max(worst, std::abs(Av((i * K + s) % (N * K)) - std::pow(t, i) * Fc(s - 1)));
            }
            CHECK(worst <= 1e-11 * std::max(1.0, A.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("Kronecker symbol of a product") {
    const Grid2D g(5, 4, 2, Boundary::periodic, 1.0, 0.7);
    const auto ops = build_scheme({SchemeKind::supg_gfq, 0.1, g});
    const auto sym = scheme_symbol(ops);
    const auto& X = ops.ops(Direction::x);
    const auto& Y = ops.ops(Direction::y);
    const cplx tx = unit(0.9), ty = unit(-2.1);
    const Eigen::MatrixXcd Fx = extract_symbol(*X.D)(tx), Fy = extract_symbol(*Y.DI)(ty);
    const int K = 2, n = K * K;
    Eigen::MatrixXcd kr(n, n);
    for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b) kr.block(a * K, b * K, K, K) = Fx(a, b) * Fy;
    // ((p, u) block of E_C-GFq) = D (x) DI, plus stabilization-free when alpha = 0.
    const auto sym0 = scheme_symbol(build_scheme({SchemeKind::supg_gfq, 0.0, g}));
    CHECK((sym0(tx, ty).block(2 * n, 0, n, n) - kr).norm() <= 1e-12 * kr.norm());
    CHECK(sym(tx, ty).rows() == 3 * n);
}

TEST_CASE("standard SUPG and OSS: det vanishes only on t = 1 lines") {
    const Grid2D g(8, 8, 1, Boundary::periodic);
    for (auto s : {SchemeKind::supg, SchemeKind::oss}) {
        const auto sym = scheme_symbol(build_scheme({s, 0.1, g}));
        const Eigen::MatrixXcd Fi = sym(cplx(0, 1), cplx(0, 1));
        CHECK(std::abs(Fi.determinant()) > 1e-6 * det_scale(Fi));
        for (const auto& [tx, ty] : generic_modes(100, 11)) {
            const Eigen::MatrixXcd F = sym(tx, ty);
            CHECK(std::abs(F.determinant()) >= 1e-6 * det_scale(F));
            const Eigen::MatrixXcd F1 = sym(1.0, ty), F2 = sym(tx, 1.0);
            CHECK(std::abs(F1.determinant()) <= 1e-12 * det_scale(F1));
            CHECK(std::abs(F2.determinant()) <= 1e-12 * det_scale(F2));
        }
    }
}

TEST_CASE("SUPG-GFq, Q1: singular symbol with the integrator kernel") {
    const Grid2D g(8, 8, 1, Boundary::periodic);
    const auto ops = build_scheme({SchemeKind::supg_gfq, 0.1, g});
    const auto sym = scheme_symbol(ops);
    double worst_det = 0.0, worst_angle = 0.0;
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b) {
            const cplx tx = unit(2.0 * pi * a / 16), ty = unit(2.0 * pi * b / 16);
            const Eigen::MatrixXcd F = sym(tx, ty);
            worst_det = std::max(worst_det, std::abs(F.determinant()) / std::max(1e-300, det_scale(F)));
        }
    CHECK(worst_det <= 1e-12);
    for (const auto& [tx, ty] : generic_modes(40, 5)) {
        const Eigen::MatrixXcd F = sym(tx, ty);
        const auto sx = q1_symbols(ops.ops(Direction::x), tx), sy = q1_symbols(ops.ops(Direction::y), ty);
        const Eigen::MatrixXcd ker = kernel_basis(F);
        REQUIRE(ker.cols() == 1);
        Eigen::Vector3cd expect(-sx.tau, sy.tau, 0.0);
        worst_angle = std::max(worst_angle, angle(ker.col(0), expect));
        CHECK((F * expect).norm() <= 1e-12 * F.norm() * expect.norm());
    }
    CHECK(worst_angle <= 1e-8);
}

TEST_CASE("Galerkin Q1 checkerboard mode is stationary") {
    const Grid2D g(8, 8, 1, Boundary::periodic);
    const auto sym = scheme_symbol(build_scheme({SchemeKind::galerkin, 0.0, g}));
    CHECK(kernel_dimension(sym(-1.0, -1.0)).dim == 3);
    const auto supg = scheme_symbol(build_scheme({SchemeKind::supg, 0.1, g}));
    CHECK(kernel_dimension(supg(-1.0, -1.0)).dim < 3);
}

TEST_CASE("torus scan agrees with dense kernel dimension") {
    for (int K = 1; K <= 2; ++K) {
        const Grid2D g(6, 6, K, Boundary::periodic);
        for (auto s : {SchemeKind::galerkin, SchemeKind::supg, SchemeKind::supg_gfq, SchemeKind::oss,
                       SchemeKind::oss_gfq}) {
            const auto ops = build_scheme({s, 0.1, g});
            const auto scan = torus_kernel_scan(scheme_symbol(ops), 6, 6);
            const auto dense = kernel_dimension(ops.E().dense());
            INFO("K=", K, " scheme=", scheme_name(s));
            CHECK(scan.total_dim == dense.dim);
            CHECK(dense.spectral_gap > 1e3);
        }
    }
    CHECK_THROWS(torus_kernel_scan(SymbolMatrix2D{}, 65, 4));
}

TEST_CASE("involutions") {
    const Grid2D g(8, 8, 1, Boundary::periodic);
    const std::vector<std::pair<cplx, cplx>> one{{unit(2.0 * pi / 7), unit(2.0 * pi / 5)}};
    auto modes = generic_modes(50, 9);
    for (auto s : {SchemeKind::supg_gfq, SchemeKind::oss_gfq}) {
        const auto ops = build_scheme({s, 0.1, g});
        CHECK(verify_involution(ops, one).max_residual <= 1e-10);
        const auto rep = verify_involution(ops, modes);
        CHECK(rep.samples == 50);
        CHECK(rep.max_residual <= 1e-10);
    }
    CHECK_THROWS(verify_involution(build_scheme({SchemeKind::supg, 0.1, g}), one));

    for (int K = 1; K <= 3; ++K) {
        const auto ops = build_scheme({SchemeKind::supg_gfq, 0.1, Grid2D(6, 6, K, Boundary::periodic)});
        for (const auto& [tx, ty] : generic_modes(8, 100 + K)) {
            const Eigen::MatrixXcd R = reduced_supg_gfq_symbol(ops, tx, ty);
            CHECK(R.rows() == 3 * K * K);
            CHECK(R.cols() == 2 * K * K);
            CHECK(left_kernel_dimension(R) == K * K);
        }
    }
}

TEST_CASE("alpha = 0: left kernel is the discrete curl") {
    const Grid2D g(8, 8, 1, Boundary::periodic);
    const auto ops = build_scheme({SchemeKind::supg_gfq, 0.0, g});
    const auto sym = scheme_symbol(ops);
    for (const auto& [tx, ty] : generic_modes(20, 4)) {
        const auto sx = q1_symbols(ops.ops(Direction::x), tx), sy = q1_symbols(ops.ops(Direction::y), ty);
        const Eigen::MatrixXcd F = sym(tx, ty);
        const Eigen::RowVector3cd curl(sx.M * sy.D, -sx.D * sy.M, 0.0);
        CHECK((curl * F).norm() <= 1e-12 * curl.norm() * F.norm());
        CHECK(left_kernel_dimension(F) == 1);
    }
}

TEST_CASE("rank audit of the mixed operators") {
    for (int K = 1; K <= 4; ++K) {
        const auto r = kernel_rank_audit(K, 8);
        INFO("K=", K);
        CHECK(r.rank_Dt == 8 * K - 1);
        CHECK(r.rank_DXXt == 8 * K - 1);
        CHECK(r.interface_residual <= 1e-10);
        CHECK(r.DXXt_kernel_const_dev <= 1e-10);
        CHECK(r.Z_one <= 1e-12);
        CHECK(r.Z_x <= 1e-12);
        CHECK(r.DXX_one <= 1e-12);
        CHECK(r.DXX_x <= 1e-12);
        CHECK(r.Z_asym <= 1e-12);
        CHECK(r.Z_min_eig >= -1e-12);
        CHECK(r.Z_w_ratio >= 1e-6);
    }
    CHECK(kernel_rank_audit(2, 8).rank_Dt == 15);
    CHECK(kernel_rank_audit(2, 8).dim_ker_D_full == 2);
    CHECK_THROWS_AS(kernel_rank_audit(5, 8), ParameterError);
}

TEST_CASE("spurious derivative-kernel modes in 2D") {
    for (int K = 1; K <= 2; ++K) {
        const Line1D line{8, K, 0.0, 1.0, Boundary::periodic};
        const auto o = LineOperators::build(line);
        const Eigen::MatrixXd D = o.D->dense(), S = o.DXX->dense();
        const int n = static_cast<int>(D.rows());
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullV);
        int rank = 0;
        while (rank < n && svd.singularValues()(rank) > 1e-10 * svd.singularValues()(0)) ++rank;
        REQUIRE(n - rank >= 2);
        const Eigen::VectorXd one = Eigen::VectorXd::Ones(n);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
        for (int c = rank; c < n; ++c) {
            Eigen::VectorXd k = svd.matrixV().col(c);
            k -= k.dot(one) / n * one;
            if (k.norm() > w.norm()) w = k;
        }
        w.normalize();
        std::mt19937 gen(K);
        std::normal_distribution<double> nd;
        Eigen::VectorXd f(n);
        for (auto& x : f) x = nd(gen);
        REQUIRE((D * f).norm() > 1e-3);
        REQUIRE((S * w).norm() > 1e-3);

        // Kronecker actions via A F B^T.
        const auto act = [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& F) {
            return Eigen::MatrixXd(A * F * B.transpose());
        };
        for (const Eigen::MatrixXd& F : {Eigen::MatrixXd(one * w.transpose()), Eigen::MatrixXd(w * one.transpose()),
                                          Eigen::MatrixXd(w * w.transpose())}) {
            CHECK(act(D, D, F).norm() <= 1e-11);
            CHECK(act(S, D, F).norm() <= 1e-10);
            CHECK(act(D, S, F).norm() <= 1e-10);
        }
        CHECK(act(D, S, f * w.transpose()).norm() > 1e-3);
    }
}
