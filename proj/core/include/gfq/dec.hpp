#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "gfq/schemes.hpp"
#include "gfq/symbols.hpp"

namespace gfq {

/// @brief Deferred-correction coefficients on Lobatto subtimenodes of [0,1].
struct DeCTableau {
    int M = 1;
    std::vector<double> nodes;  // t^0 = 0 < ... < t^M = 1
    Eigen::MatrixXd theta;      // (M+1)x(M+1); theta(m, r) = int_0^{t^m} gamma_r
    std::vector<double> beta;   // beta[m] = t^m
};

DeCTableau dec_tableau(int M);

// Overwrites Dirichlet data of q at time t. Empty hook means nothing is imposed.
using BoundaryHook = std::function<void(double t, StateField& q)>;

// Keeps the boundary values of q0 fixed.
BoundaryHook frozen_boundary(const SchemeOps& ops, const StateField& q0);
// Imposes exact(t) on the boundary nodes.
BoundaryHook exact_boundary(const SchemeOps& ops, std::function<StateField(double)> exact);

/// @brief Reusable stepper. Holds the tableau and scratch buffers, so one instance per thread.
class DeCStepper {
public:
    DeCStepper(const SchemeOps& ops, int M, int P, BoundaryHook boundary = {});

    // Advances q from t to t + dt. Throws InstabilityError tagged with `step` on non-finite output.
    StateField step(const StateField& q, double t, double dt, long step = 0);

    const DeCTableau& tableau() const { return tab_; }
    int P() const { return P_; }

private:
    const SchemeOps* ops_;
    DeCTableau tab_;
    int P_;
    BoundaryHook boundary_;
    std::vector<StateField> cur_, next_, Eq_;
    StateField diff_;
};

StateField dec_step(const SchemeOps& ops, const StateField& q, double dt, int M, int P,
                    const BoundaryHook& boundary = {}, double t = 0.0);

// Defaults for order K+1 in time.
int default_subtimesteps(int K);
int default_iterations(int K);
double time_step(const Grid2D& grid, double cfl);

// One-step amplification matrix of the DeC on the Fourier mode (tx, ty); periodic grids only.
Eigen::MatrixXcd dec_amplification(const SchemeOps& ops, cplx tx, cplx ty, double dt, int M, int P);
// Largest spectral radius of the amplification over the nx x ny torus.
double dec_max_amplification(const SchemeOps& ops, int nx, int ny, double dt, int M, int P);

struct StepInfo {
    long step = 0;
    double t = 0.0;
    double dt = 0.0;
};

struct EvolveOptions {
    double t0 = 0.0;
    double T_final = 0.0;
    double cfl = 0.1;
    int M = 0;  // 0 selects the default
    int P = 0;
    BoundaryHook boundary;
    long cadence = 0;  // callback every `cadence` steps (and at the end); 0 disables
    std::function<void(const StepInfo&, const StateField&)> callback;
};

struct EvolveResult {
    StateField q;
    double t = 0.0;
    long steps = 0;
    double dt = 0.0;
};

EvolveResult evolve(const SchemeOps& ops, StateField q0, const EvolveOptions& opt);

}  // namespace gfq
