#include "gfq/grid.hpp"

#include <algorithm>

#include "gfq/errors.hpp"

namespace gfq {

double Line1D::coord(int g, const LobattoRule& rule) const {
    const int cell = g / K, p = g % K;
    return origin + (cell + rule.nodes[p]) * dx();
}

std::vector<double> Line1D::coords() const {
    const LobattoRule rule = lobatto_rule(K);
    std::vector<double> c(size());
    for (int g = 0; g < size(); ++g) c[g] = coord(g, rule);
    return c;
}

Grid2D::Grid2D(int nx, int ny, int K, Boundary bc, double lx, double ly) {
    if (nx < 1 || ny < 1) throw ParameterError("Grid2D: cell counts must be positive");
    if (K < 1 || K > 8) throw ParameterError("Grid2D: K must lie in [1, 8]");
    x = Line1D{nx, K, 0.0, lx, bc};
    y = Line1D{ny, K, 0.0, ly, bc};
}

double Grid2D::h() const { return std::min(x.dx(), y.dx()); }

}  // namespace gfq
