#pragma once

#include <vector>

#include "gfq/basis1d.hpp"

namespace gfq {

enum class Boundary { periodic, dirichlet };

enum class Direction { x, y };

// One coordinate direction of a tensor grid.
struct Line1D {
    int cells = 0;
    int K = 1;
    double origin = 0.0;
    double length = 1.0;
    Boundary bc = Boundary::periodic;

    double dx() const { return length / cells; }
    // Number of independent nodal values (periodic identifies the end points).
    int size() const { return bc == Boundary::periodic ? cells * K : cells * K + 1; }
    double coord(int g, const LobattoRule& rule) const;
    std::vector<double> coords() const;
};

struct Grid2D {
    Line1D x, y;

    Grid2D() = default;
    Grid2D(int nx, int ny, int K, Boundary bc, double lx = 1.0, double ly = 1.0);

    int K() const { return x.K; }
    Boundary bc() const { return x.bc; }
    double h() const;
    const Line1D& line(Direction d) const { return d == Direction::x ? x : y; }
    int nx() const { return x.size(); }
    int ny() const { return y.size(); }
};

}  // namespace gfq
