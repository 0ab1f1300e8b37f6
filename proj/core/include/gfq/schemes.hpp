#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "gfq/grid.hpp"
#include "gfq/operator1d.hpp"
#include "gfq/tensor.hpp"

namespace gfq {

enum class SchemeKind { galerkin, supg, supg_gfq, oss, oss_gfq };
enum class DivergenceKind { galerkin, gfq };

SchemeKind parse_scheme(std::string_view name);
std::string scheme_name(SchemeKind s);
bool is_gfq(SchemeKind s);

struct SchemeConfig {
    SchemeKind scheme = SchemeKind::supg_gfq;
    double alpha = 0.1;
    Grid2D grid;
};

// The 1D operator family of one grid direction.
struct LineOperators {
    OpPtr Id, M, L, Minv, D, DX, DXX, I;
    OpPtr DI;    // D_x I_x, element-local product
    OpPtr DXXI;  // D^x_x I_x, element-local product
    OpPtr Z;     // D^x_x - D^x M^-1 D_x
    OpPtr ZI;    // D^x_x I_x - D^x M^-1 (D_x I_x)

    static LineOperators build(const Line1D& line);
};

struct Term {
    double coef = 1.0;
    OpPtr x, y;
};

// 3x3 block operator acting on (u, v, p), each block a sum of Kronecker terms.
class BlockOperator {
public:
    using Block = std::vector<Term>;

    void add(int row, int col, double coef, OpPtr x, OpPtr y);
    const Block& block(int row, int col) const { return blocks_[row][col]; }
    StateField apply(const StateField& q) const;
    // Applies only the listed output rows; other components are zero.
    Field apply_row(int row, const StateField& q) const;
    Eigen::MatrixXd dense() const;

private:
    std::array<std::array<Block, 3>, 3> blocks_;
};

/// @brief Semi-discrete operators of A dq/dt + E q = 0.
class SchemeOps {
public:
    explicit SchemeOps(SchemeConfig cfg);

    const SchemeConfig& config() const { return cfg_; }
    const Grid2D& grid() const { return cfg_.grid; }
    const LineOperators& ops(Direction d) const { return d == Direction::x ? ox_ : oy_; }
    const BlockOperator& A() const { return A_; }
    const BlockOperator& E() const { return E_; }
    DivergenceKind divergence_kind() const;

    StateField apply_A(const StateField& q) const { return A_.apply(q); }
    StateField apply_E(const StateField& q) const { return E_.apply(q); }
    StateField apply_L_inv(const StateField& q) const;
    // out += a * L^-1 q, without temporaries
    void add_L_inv(double a, const StateField& q, StateField& out) const;

    // Nodal lumped mass weights (M_x (x) M_y diagonal).
    const Field& lumped_mass() const { return mass_; }
    // 1 on Dirichlet boundary nodes, 0 elsewhere (all zero when periodic).
    const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& boundary_mask() const { return boundary_; }

private:
    SchemeConfig cfg_;
    LineOperators ox_, oy_;
    BlockOperator A_, E_;
    Field mass_;
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> boundary_;
};

SchemeOps build_scheme(const SchemeConfig& cfg);

Field discrete_divergence(DivergenceKind kind, const LineOperators& ox, const LineOperators& oy, const Field& u,
                          const Field& v);
Field discrete_divergence(DivergenceKind kind, const Grid2D& grid, const Field& u, const Field& v);

// Per-element subcell integrated divergences; entry (i * Ny + j) is the KxK array Phi_{s,p}, s,p = 1..K.
std::vector<Eigen::MatrixXd> subcell_phi(const Grid2D& grid, const Field& u, const Field& v);
// Sparse linear map (flatten(u), flatten(v)) -> stacked Phi (element-major, then s, then p).
SparseMatrix subcell_phi_matrix(const Grid2D& grid);
// Element assembly of (D^E (x) D^E) Phi^E.
Field assemble_phi(const Grid2D& grid, const std::vector<Eigen::MatrixXd>& phi);

struct OssProjection {
    Field w_div, w_px, w_py;
};

// L2 projections used by the orthogonal subscale stabilization.
OssProjection oss_projection(const SchemeOps& ops, const StateField& q);

}  // namespace gfq
