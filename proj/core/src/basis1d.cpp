#include "gfq/basis1d.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gfq/errors.hpp"

namespace gfq {

namespace {

// P_n and P_{n-1} at x in [-1,1].
std::pair<double, double> legendre_pair(int n, double x) {
    double p0 = 1.0, p1 = x;
    if (n == 0) return {1.0, 0.0};
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, p0};
}

}  // namespace

LobattoRule lobatto_rule(int K) {
    if (K < 1 || K > 8) throw ParameterError("lobatto_rule: K must lie in [1, 8], got " + std::to_string(K));
    const int n = K + 1;
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = -std::cos(std::numbers::pi * j / K);
    // Newton on (1 - x^2) P_K'(x); endpoints are fixed points of the update.
    for (int j = 1; j < K; ++j) {
        for (int it = 0; it < 100; ++it) {
            auto [pk, pkm1] = legendre_pair(K, x[j]);
            const double dx = (x[j] * pk - pkm1) / (n * pk);
            x[j] -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
    }
    LobattoRule r;
    r.K = K;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int j = 0; j < n; ++j) {
        const double pk = legendre_pair(K, x[j]).first;
        r.nodes[j] = 0.5 * (x[j] + 1.0);
        r.weights[j] = 1.0 / (K * (K + 1.0) * pk * pk);
    }
    r.nodes.front() = 0.0;
    r.nodes.back() = 1.0;
    for (int j = 0; j < n / 2; ++j) {
        const double a = 0.5 * (r.nodes[j] + 1.0 - r.nodes[n - 1 - j]);
        r.nodes[j] = a;
        r.nodes[n - 1 - j] = 1.0 - a;
        const double w = 0.5 * (r.weights[j] + r.weights[n - 1 - j]);
        r.weights[j] = r.weights[n - 1 - j] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.5;
    return r;
}

GaussRule gauss_legendre(int n) {
    if (n < 1) throw ParameterError("gauss_legendre: need at least one point");
    GaussRule g;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            auto [pn, pnm1] = legendre_pair(n, x);
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        auto [pn, pnm1] = legendre_pair(n, x);
        dp = n * (x * pn - pnm1) / (x * x - 1.0);
        g.nodes[n - 1 - i] = 0.5 * (x + 1.0);
        g.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

double lagrange_eval(const std::vector<double>& nodes, int p, double x) {
    double v = 1.0;
    for (int m = 0; m < static_cast<int>(nodes.size()); ++m)
        if (m != p) v *= (x - nodes[m]) / (nodes[p] - nodes[m]);
    return v;
}

double lagrange_deriv(const std::vector<double>& nodes, int p, double x) {
    const int n = static_cast<int>(nodes.size());
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j == p) continue;
        double t = 1.0 / (nodes[p] - nodes[j]);
        for (int m = 0; m < n; ++m)
            if (m != p && m != j) t *= (x - nodes[m]) / (nodes[p] - nodes[m]);
        s += t;
    }
    return s;
}

double lagrange_eval(const LobattoRule& rule, int p, double x) { return lagrange_eval(rule.nodes, p, x); }
double lagrange_deriv(const LobattoRule& rule, int p, double x) { return lagrange_deriv(rule.nodes, p, x); }

Eigen::MatrixXd LocalBlocks::integrator() const {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(K + 1, K + 1);
    t.bottomRows(K) = I;
    return t;
}

Eigen::MatrixXd LocalBlocks::reversed_integrator() const {
    Eigen::MatrixXd t = integrator();
    const Eigen::RowVectorXd full = I.row(K - 1);
    t.rowwise() -= full;
    return t;
}

LocalBlocks local_blocks(const LobattoRule& rule, double dx) {
    if (!(dx > 0.0)) throw ParameterError("local_blocks: dx must be positive");
    const int K = rule.K, n = K + 1;
    LocalBlocks b;
    b.K = K;
    b.dx = dx;
    b.M = Eigen::MatrixXd::Zero(n, n);
    b.D.resize(n, n);
    b.DXX.resize(n, n);
    Eigen::MatrixXd dphi(n, n);  // dphi(r, p) = phi_p'(x_r) on the reference element
    for (int r = 0; r < n; ++r)
        for (int p = 0; p < n; ++p) dphi(r, p) = lagrange_deriv(rule, p, rule.nodes[r]);
    for (int s = 0; s < n; ++s) {
        b.M(s, s) = rule.weights[s];
        for (int p = 0; p < n; ++p) {
            b.D(s, p) = rule.weights[s] * dphi(s, p) / dx;
            double k = 0.0;
            for (int r = 0; r < n; ++r) k += rule.weights[r] * dphi(r, s) * dphi(r, p);
            b.DXX(s, p) = k / (dx * dx);
        }
    }
    b.DX = b.D.transpose();

    const GaussRule g = gauss_legendre(K + 2);
    b.I.resize(K, n);
    for (int s = 1; s <= K; ++s) {
        const double len = rule.nodes[s];
        for (int p = 0; p < n; ++p) {
            double v = 0.0;
            for (std::size_t q = 0; q < g.nodes.size(); ++q) v += g.weights[q] * lagrange_eval(rule, p, len * g.nodes[q]);
            b.I(s - 1, p) = v * len * dx;
        }
    }
    return b;
}

}  // namespace gfq
