#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gfq {

// Gauss-Lobatto rule on [0,1] with K+1 points.
struct LobattoRule {
    int K = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [0,1] with n points.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

LobattoRule lobatto_rule(int K);
GaussRule gauss_legendre(int n);

// Lagrange basis through Lobatto nodes on [0,1].
double lagrange_eval(const LobattoRule& rule, int p, double x);
double lagrange_deriv(const LobattoRule& rule, int p, double x);

// Lagrange basis through an arbitrary node set.
double lagrange_eval(const std::vector<double>& nodes, int p, double x);
double lagrange_deriv(const std::vector<double>& nodes, int p, double x);

/// @brief Per-element operator blocks. M, D, DX, DXX are divided by dx;
/// I holds raw integrals (units of length).
struct LocalBlocks {
    int K = 0;
    double dx = 0.0;
    Eigen::MatrixXd M;    // (K+1)x(K+1), diagonal
    Eigen::MatrixXd D;    // int phi_s dphi_p / dx
    Eigen::MatrixXd DX;   // int dphi_s phi_p / dx
    Eigen::MatrixXd DXX;  // int dphi_s dphi_p / dx
    Eigen::MatrixXd I;    // K x (K+1), row s-1 holds int_{x_0}^{x_s} phi_p

    // (K+1)x(K+1) table with a zero first row (local starting value).
    Eigen::MatrixXd integrator() const;
    // (K+1)x(K+1) table integrating from the right end: -int_{x_s}^{x_K} phi_p.
    Eigen::MatrixXd reversed_integrator() const;
};

LocalBlocks local_blocks(const LobattoRule& rule, double dx);

}  // namespace gfq
