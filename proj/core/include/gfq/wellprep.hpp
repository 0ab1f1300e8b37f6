#pragma once

#include <functional>
#include <limits>
#include <string>

#include "gfq/grid.hpp"
#include "gfq/schemes.hpp"
#include "gfq/tensor.hpp"

namespace gfq {

using ScalarFn = std::function<double(double, double)>;

/// @brief Closed-form (u, v, p) data.
struct AnalyticField {
    ScalarFn u, v, p;
    bool solenoidal = false;
    double support_radius = std::numeric_limits<double>::infinity();
};

StateField sample_nodal(const AnalyticField& f, const Grid2D& grid);

struct LlrrOptions {
    int quad_points = 0;   // Gauss-Legendre points per subinterval; 0 selects K+3
    int subdivisions = 8;  // composite pieces per subinterval
    bool reversed = false; // march from top/right with the reversed integrator
};

// Line-by-line quadrature projection: u integrated along vertical lines, v along horizontal lines.
StateField llrr_project(const AnalyticField& f, const Grid2D& grid, const LlrrOptions& opt = {});

struct ProjectionReport {
    double constraint_residual = 0.0;  // max |Phi|
    double divergence = 0.0;           // max |GFq divergence|
    std::string method;                // "direct" or "cg"
    int iterations = 0;
};

// Nearest (u, v) in the Euclidean norm with all subcell integrals zero; p is kept.
// tol < 0 selects 1e-11 * max(1, |u|, |v|) for the divergence post-check.
StateField opt_project(const StateField& q, const Grid2D& grid, double tol = -1.0, ProjectionReport* report = nullptr);
StateField opt_project(const AnalyticField& f, const Grid2D& grid, double tol = -1.0,
                       ProjectionReport* report = nullptr);

}  // namespace gfq
