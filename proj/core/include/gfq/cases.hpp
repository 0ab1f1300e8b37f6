#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "gfq/grid.hpp"
#include "gfq/schemes.hpp"
#include "gfq/wellprep.hpp"

namespace gfq {

using Vec3 = std::array<double, 3>;  // (u, v, p)
using ExactFn = std::function<Vec3(double x, double y, double t)>;

// Plane wave along xi = x cos(theta) + y sin(theta), unit sound speed.
struct ObliqueWave {
    double theta = 0.7853981633974483;
    double lambda = 0.25;
    double wavenumber() const;
    Vec3 operator()(double x, double y, double t) const;
};

struct Vortex {
    enum class Profile { c6, smooth };
    Profile profile = Profile::smooth;
    double x0 = 0.5, y0 = 0.5, r0 = 0.45;
    double gamma = 0.0;  // 0 selects the profile default
    double g = 9.81;

    double f(double rho) const;
    Vec3 operator()(double x, double y) const;
};

Vortex vortex_c6();
Vortex vortex_smooth();

// Compactly supported pressure bump of height eps at (xp, yp).
struct Perturbation {
    double eps = 1e-3;
    double xp = 0.4, yp = 0.43, r0 = 0.1;
    double operator()(double x, double y) const;
};

// L(s) = log((1 + sqrt(1 - s^2)) / s) for 0 < s <= 1, zero for s > 1.
double riemann_L(double s);
// v on a circle of radius r around the centre at time t.
double riemann_v_exact(double r, double t);

struct RiemannProblem {
    double x0 = 0.5, y0 = 0.5;
    Vec3 initial(double x, double y) const;
    // Exact solution away from the corner signal (r > t); superposition of planar waves.
    Vec3 far_field(double x, double y, double t) const;
};

/// @brief A named experiment setup.
struct TestCase {
    std::string name;
    Boundary bc = Boundary::periodic;
    double lx = 1.0, ly = 1.0;
    bool has_exact = true;     // exact(x, y, t) valid everywhere
    bool stationary = false;
    ExactFn exact;             // initial data when has_exact is false
    ExactFn boundary;          // Dirichlet data, valid on the boundary
    AnalyticField at(double t) const;
};

// Names: oblique, vortex_c6, vortex_smooth, riemann.
TestCase make_case(const std::string& name);
std::vector<std::string> case_names();

struct L2Errors {
    double u = 0.0, v = 0.0, p = 0.0;
};

// Collocated Gauss-Lobatto quadrature of the nodal error.
L2Errors l2_error(const Grid2D& grid, const StateField& q, const ExactFn& exact, double t);
double l2_norm(const Grid2D& grid, const Field& f);
// Discrete L2 norm of the nodal divergence vector (cell-area weighted).
double divergence_norm(DivergenceKind kind, const Grid2D& grid, const StateField& q);
double divergence_max(DivergenceKind kind, const Grid2D& grid, const StateField& q);
double energy(const Grid2D& grid, const StateField& q);

// eoc_i = log(e_i / e_{i+1}) / log(N_{i+1} / N_i); size n-1.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<int>& Ns);

// Mean |v - v_exact| over nodes with r/t in [lo, hi], lumped-mass weighted.
double riemann_l1(const Grid2D& grid, const StateField& q, double t, double lo = 0.05, double hi = 0.9);

// PDE residual of an exact solution by central differences at random points (max abs).
double pde_residual(const ExactFn& f, int samples, unsigned seed, double h = 1e-5);

}  // namespace gfq
