#pragma once

#include <random>

#include "gfq/basis1d.hpp"
#include "gfq/grid.hpp"
#include "gfq/tensor.hpp"

namespace gfq::testing {

inline Field random_field(int nx, int ny, std::mt19937& gen) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field f(nx, ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) f(i, j) = u(gen);
    return f;
}

// Oracle: given u everywhere and v on the left column and bottom row, complete v so that
// every subcell integral Phi^E vanishes (cell-by-cell march on a non-periodic grid).
inline Field complete_v(const Grid2D& g, const Field& u, Field v) {
    const int K = g.K();
    const auto rule = lobatto_rule(K);
    const Eigen::MatrixXd Ix = local_blocks(rule, g.x.dx()).integrator();
    const Eigen::MatrixXd Iy = local_blocks(rule, g.y.dx()).integrator();
    const Eigen::MatrixXd A = Ix.bottomRightCorner(K, K);
    const auto lu = A.fullPivLu();
    for (int i = 0; i < g.x.cells; ++i)
        for (int j = 0; j < g.y.cells; ++j) {
            const int a0 = i * K, b0 = j * K;
            for (int p = 1; p <= K; ++p) {
                Eigen::VectorXd rhs(K);
                for (int s = 1; s <= K; ++s) {
                    double uu = 0.0;
                    for (int w = 0; w <= K; ++w) uu += Iy(p, w) * (u(a0 + s, b0 + w) - u(a0, b0 + w));
                    rhs(s - 1) = -uu - Ix(s, 0) * (v(a0, b0 + p) - v(a0, b0));
                    for (int z = 1; z <= K; ++z) rhs(s - 1) += Ix(s, z) * v(a0 + z, b0);
                }
                const Eigen::VectorXd sol = lu.solve(rhs);
                for (int z = 1; z <= K; ++z) v(a0 + z, b0 + p) = sol(z - 1);
            }
        }
    return v;
}


}  // namespace gfq::testing
