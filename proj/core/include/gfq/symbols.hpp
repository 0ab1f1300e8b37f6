#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <map>
#include <vector>

#include "gfq/operator1d.hpp"
#include "gfq/schemes.hpp"

namespace gfq {

using cplx = std::complex<double>;

// KxK matrix-valued Laurent polynomial: sum_k C_k t^k.
struct LaurentBlockPoly {
    int K = 1;
    std::map<int, Eigen::MatrixXd> coeffs;

    Eigen::MatrixXcd operator()(cplx t) const;
    int kmax() const;
};

LaurentBlockPoly extract_symbol(const Operator1D& op);
LaurentBlockPoly symbol_product(const LaurentBlockPoly& a, const LaurentBlockPoly& b);

struct SymbolTerm {
    double coef = 1.0;
    LaurentBlockPoly x, y;
};

/// @brief Symbol of a 3x3 block operator: each block is a sum of Kronecker products.
class SymbolMatrix2D {
public:
    int K = 1;
    std::array<std::array<std::vector<SymbolTerm>, 3>, 3> blocks;

    Eigen::MatrixXcd operator()(cplx tx, cplx ty) const;
};

SymbolMatrix2D symbol_of(const BlockOperator& op);
// Symbol of E (or of A when `mass` is true). Requires a periodic grid.
SymbolMatrix2D scheme_symbol(const SchemeOps& ops, bool mass = false);

struct ModeKernel {
    int a = 0, b = 0;
    cplx tx, ty;
    int dim = 0;
    double sigma_min = 0.0;
};

struct TorusScan {
    std::vector<ModeKernel> modes;
    int total_dim = 0;
    double sigma_max = 0.0;
    // Ratio between the smallest retained and the largest discarded singular value.
    double spectral_gap = 0.0;
};

TorusScan torus_kernel_scan(const SymbolMatrix2D& sym, int nx, int ny, double rel_tol = 1e-10);

struct KernelInfo {
    int dim = 0;
    double sigma_max = 0.0;
    double spectral_gap = 0.0;
};

KernelInfo kernel_dimension(const Eigen::MatrixXd& m, double rel_tol = 1e-10);
KernelInfo kernel_dimension(const Eigen::MatrixXcd& m, double rel_tol = 1e-10);
// Orthonormal basis of the right kernel (columns).
Eigen::MatrixXcd kernel_basis(const Eigen::MatrixXcd& m, double rel_tol = 1e-10);

// Scalar Q1 symbols of one direction at t.
struct Q1Symbols {
    cplx M, D, DXX, DI, DXXI;
    cplx DXX_M;    // F(D^x_x M_x)
    cplx D_M_M;    // F(D_x M_x^2)
    cplx tau;      // effective integrator F(D I)/F(D)
};

Q1Symbols q1_symbols(const LineOperators& ops, cplx t);

// Left-kernel vectors for K = 1.
Eigen::RowVector3cd involution_supg_gfq_q1(const Q1Symbols& sx, const Q1Symbols& sy, double ah);
Eigen::RowVector3cd involution_oss_gfq_q1(const Q1Symbols& sx, const Q1Symbols& sy, double ah);

struct InvolutionReport {
    double max_residual = 0.0;  // max |omega F(E)| / (|omega| |F(E)|)
    int samples = 0;
};

// Q1 closed-form left kernel check for supg_gfq or oss_gfq on sampled generic modes.
InvolutionReport verify_involution(const SchemeOps& ops, const std::vector<std::pair<cplx, cplx>>& modes);

// Reduced SUPG-GFq symbol acting on (U+V, p): 3K^2 x 2K^2.
Eigen::MatrixXcd reduced_supg_gfq_symbol(const SchemeOps& ops, cplx tx, cplx ty);
int left_kernel_dimension(const Eigen::MatrixXcd& m, double rel_tol = 1e-10);

// Generic sample modes on the unit circle avoiding t = 1.
std::vector<std::pair<cplx, cplx>> generic_modes(int count, unsigned seed);

struct RankAudit {
    int K = 0, Nx = 0;
    int rank_Dt = 0, rank_DXXt = 0;
    double interface_residual = 0.0;  // max |q_{i,0} + q_{i-1,K-1}| / max|q|
    double DXXt_kernel_const_dev = 0.0;
    double Z_one = 0.0, Z_x = 0.0;   // max |Z 1|, |Z x| on interior rows
    double DXX_one = 0.0, DXX_x = 0.0;
    double Z_asym = 0.0;             // symmetry defect on the zero-trace block
    double Z_min_eig = 0.0;
    int dim_ker_D_full = 0;
    double Z_w_ratio = 0.0;          // |Z w| / |w|
};

RankAudit kernel_rank_audit(int K, int Nx);

}  // namespace gfq
