#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <map>
#include <optional>
#include <vector>

#include "gfq/basis1d.hpp"
#include "gfq/grid.hpp"

namespace gfq {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class OpKind { mass, lumped, mass_inverse, D, DX, DXX, I, I_reversed, identity, composed };

// Block stencil: k -> KxK matrix alpha^s_{k,p}, rows s=1..K, columns p=1..K
// (local node K of cell i is node 0 of cell i+1).
using BlockStencil = std::map<int, Eigen::MatrixXd>;

// Diagonal storage: row i of the operator is sum_k coef(i, k) * f[i + offsets[k]],
// indices wrapped on periodic lines. Empty when the sparse form is cheaper.
struct Bands {
    std::vector<int> offsets;
    Eigen::MatrixXd coef;
    bool empty() const { return offsets.empty(); }
};

/// @brief Translation-invariant 1D operator on a grid line.
///
/// `stencil` is the interior block stencil (the full operator when periodic),
/// `matrix` is the operator on the actual line including boundary rows, and
/// `element` the local (K+1)x(K+1) block when the operator is assembled from one.
class Operator1D {
public:
    OpKind kind = OpKind::identity;
    Line1D line;
    BlockStencil stencil;
    std::optional<Eigen::MatrixXd> element;
    SparseMatrix matrix;
    Bands bands;

    int K() const { return line.K; }
    int size() const { return line.size(); }
    Boundary bc() const { return line.bc; }
    int kmax() const;
    bool is_integrator() const { return kind == OpKind::I || kind == OpKind::I_reversed; }
    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
};

Operator1D assemble_1d(OpKind kind, const Line1D& line);
Operator1D assemble_1d(OpKind kind, const Grid2D& grid, Direction dir);

// Product A*B. When B is an integrator the product is formed per element
// (integrated values restart at each cell's left node) and then assembled.
Operator1D compose(const Operator1D& a, const Operator1D& b);
Operator1D compose(const Operator1D& a, const Operator1D& b, const Operator1D& c);

// a*A + b*B.
Operator1D combine(double a, const Operator1D& A, double b, const Operator1D& B);

// Builds an operator from an element block by summing interface contributions.
Operator1D from_element(const Eigen::MatrixXd& block, const Line1D& line, OpKind kind, bool integrator_rows = false);

Eigen::MatrixXd dense_assemble(const Operator1D& op);

// Fills op.bands from op.matrix when the band form is not much denser.
Operator1D with_bands(Operator1D op);

}  // namespace gfq
