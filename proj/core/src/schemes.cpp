#include "gfq/schemes.hpp"

#include <deque>
#include <memory>

#include "gfq/errors.hpp"

namespace gfq {

namespace {

OpPtr share(Operator1D op) { return std::make_shared<const Operator1D>(with_bands(std::move(op))); }

int node(const Line1D& line, int cell, int local) {
    const int g = cell * line.K + local;
    return line.bc == Boundary::periodic ? g % line.size() : g;
}

}  // namespace

SchemeKind parse_scheme(std::string_view name) {
    if (name == "galerkin") return SchemeKind::galerkin;
    if (name == "supg") return SchemeKind::supg;
    if (name == "supg_gfq") return SchemeKind::supg_gfq;
    if (name == "oss") return SchemeKind::oss;
    if (name == "oss_gfq") return SchemeKind::oss_gfq;
    throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::string scheme_name(SchemeKind s) {
    switch (s) {
        case SchemeKind::galerkin: return "galerkin";
        case SchemeKind::supg: return "supg";
        case SchemeKind::supg_gfq: return "supg_gfq";
        case SchemeKind::oss: return "oss";
        case SchemeKind::oss_gfq: return "oss_gfq";
    }
    return "unknown";
}

bool is_gfq(SchemeKind s) { return s == SchemeKind::supg_gfq || s == SchemeKind::oss_gfq; }

LineOperators LineOperators::build(const Line1D& line) {
    LineOperators o;
    o.Id = share(assemble_1d(OpKind::identity, line));
    o.M = share(assemble_1d(OpKind::mass, line));
    o.L = share(assemble_1d(OpKind::lumped, line));
    o.Minv = share(assemble_1d(OpKind::mass_inverse, line));
    o.D = share(assemble_1d(OpKind::D, line));
    o.DX = share(assemble_1d(OpKind::DX, line));
    o.DXX = share(assemble_1d(OpKind::DXX, line));
    o.I = share(assemble_1d(OpKind::I, line));
    o.DI = share(compose(*o.D, *o.I));
    o.DXXI = share(compose(*o.DXX, *o.I));
    o.Z = share(combine(1.0, *o.DXX, -1.0, compose(*o.DX, *o.Minv, *o.D)));
    o.ZI = share(combine(1.0, *o.DXXI, -1.0, compose(*o.DX, *o.Minv, *o.DI)));
    return o;
}

void BlockOperator::add(int row, int col, double coef, OpPtr x, OpPtr y) {
    if (coef == 0.0) return;
    // Terms sharing a y-factor collapse into one x-operator.
    for (Term& t : blocks_[row][col]) {
        if (t.y == y) {
            t.x = std::make_shared<const Operator1D>(with_bands(combine(t.coef, *t.x, coef, *x)));
            t.coef = 1.0;
            return;
        }
    }
    blocks_[row][col].push_back(Term{coef, std::move(x), std::move(y)});
}

namespace {

// f * B^T products keyed by (component, y-operator), shared across rows.
class YProducts {
public:
    explicit YProducts(const StateField& q) : q_(q) {}
    const Field& get(int c, const Operator1D* y) {
        for (const auto& e : cache_)
            if (e.c == c && e.y == y) return e.f;
        cache_.push_back({c, y, apply_y(*y, q_[c])});
        return cache_.back().f;
    }

private:
    struct Entry {
        int c;
        const Operator1D* y;
        Field f;
    };
    const StateField& q_;
    std::deque<Entry> cache_;
};

Field apply_row_cached(const BlockOperator::Block* row, const StateField& q, YProducts& yp) {
    Field out = Field::Zero(q.nx(), q.ny());
    for (int c = 0; c < 3; ++c)
        for (const Term& t : row[c]) apply_x_add(*t.x, yp.get(c, t.y.get()), t.coef, out);
    return out;
}

}  // namespace

Field BlockOperator::apply_row(int row, const StateField& q) const {
    YProducts yp(q);
    return apply_row_cached(blocks_[row].data(), q, yp);
}

StateField BlockOperator::apply(const StateField& q) const {
    YProducts yp(q);
    return {apply_row_cached(blocks_[0].data(), q, yp), apply_row_cached(blocks_[1].data(), q, yp),
            apply_row_cached(blocks_[2].data(), q, yp)};
}

Eigen::MatrixXd BlockOperator::dense() const {
    Eigen::Index n = -1;
    for (const auto& r : blocks_)
        for (const auto& b : r)
            if (!b.empty()) n = static_cast<Eigen::Index>(b.front().x->size()) * b.front().y->size();
    if (n < 0) throw ParameterError("BlockOperator::dense: empty operator");
    if (3 * n > 20000) throw ParameterError("BlockOperator::dense: exceeds the 20000 DoF guard");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            for (const Term& t : blocks_[r][c]) d.block(r * n, c * n, n, n) += t.coef * kron(t.x->dense(), t.y->dense());
    return d;
}

SchemeOps::SchemeOps(SchemeConfig cfg) : cfg_(std::move(cfg)) {
    if (!(cfg_.alpha >= 0.0)) throw ParameterError("scheme: alpha must be non-negative");
    ox_ = LineOperators::build(cfg_.grid.x);
    oy_ = LineOperators::build(cfg_.grid.y);
    const LineOperators& X = ox_;
    const LineOperators& Y = oy_;
    const double ah = cfg_.alpha * cfg_.grid.h();
    const SchemeKind s = cfg_.scheme;

    for (int c = 0; c < 3; ++c) A_.add(c, c, 1.0, X.M, Y.M);
    if (s == SchemeKind::supg || s == SchemeKind::supg_gfq) {
        A_.add(0, 2, ah, X.DX, Y.M);
        A_.add(1, 2, ah, X.M, Y.DX);
        A_.add(2, 0, ah, X.DX, Y.M);
        A_.add(2, 1, ah, X.M, Y.DX);
    }

    E_.add(0, 2, 1.0, X.D, Y.M);
    E_.add(1, 2, 1.0, X.M, Y.D);
    if (is_gfq(s)) {
        E_.add(2, 0, 1.0, X.D, Y.DI);
        E_.add(2, 1, 1.0, X.DI, Y.D);
    } else {
        E_.add(2, 0, 1.0, X.D, Y.M);
        E_.add(2, 1, 1.0, X.M, Y.D);
    }
    switch (s) {
        case SchemeKind::galerkin: break;
        case SchemeKind::supg:
            E_.add(0, 0, ah, X.DXX, Y.M);
            E_.add(0, 1, ah, X.DX, Y.D);
            E_.add(1, 0, ah, X.D, Y.DX);
            E_.add(1, 1, ah, X.M, Y.DXX);
            E_.add(2, 2, ah, X.DXX, Y.M);
            E_.add(2, 2, ah, X.M, Y.DXX);
            break;
        case SchemeKind::supg_gfq:
            E_.add(0, 0, ah, X.DXX, Y.DI);
            E_.add(0, 1, ah, X.DXXI, Y.D);
            E_.add(1, 0, ah, X.D, Y.DXXI);
            E_.add(1, 1, ah, X.DI, Y.DXX);
            E_.add(2, 2, ah, X.DXX, Y.M);
            E_.add(2, 2, ah, X.M, Y.DXX);
            break;
        case SchemeKind::oss:
            E_.add(0, 0, ah, X.Z, Y.M);
            E_.add(1, 1, ah, X.M, Y.Z);
            E_.add(2, 2, ah, X.Z, Y.M);
            E_.add(2, 2, ah, X.M, Y.Z);
            break;
        case SchemeKind::oss_gfq:
            E_.add(0, 0, ah, X.Z, Y.DI);
            E_.add(0, 1, ah, X.ZI, Y.D);
            E_.add(1, 0, ah, X.D, Y.ZI);
            E_.add(1, 1, ah, X.DI, Y.Z);
            E_.add(2, 2, ah, X.Z, Y.M);
            E_.add(2, 2, ah, X.M, Y.Z);
            break;
    }

    const Eigen::VectorXd mx = X.L->matrix.diagonal(), my = Y.L->matrix.diagonal();
    mass_ = mx * my.transpose();
    const int nx = cfg_.grid.nx(), ny = cfg_.grid.ny();
    boundary_.setConstant(nx, ny, false);
    if (cfg_.grid.bc() == Boundary::dirichlet) {
        boundary_.row(0).setConstant(true);
        boundary_.row(nx - 1).setConstant(true);
        boundary_.col(0).setConstant(true);
        boundary_.col(ny - 1).setConstant(true);
    }
}

DivergenceKind SchemeOps::divergence_kind() const {
    return is_gfq(cfg_.scheme) ? DivergenceKind::gfq : DivergenceKind::galerkin;
}

StateField SchemeOps::apply_L_inv(const StateField& q) const {
    return {q.u.cwiseQuotient(mass_), q.v.cwiseQuotient(mass_), q.p.cwiseQuotient(mass_)};
}

void SchemeOps::add_L_inv(double a, const StateField& q, StateField& out) const {
    for (int c = 0; c < 3; ++c) out[c].array() += a * q[c].array() / mass_.array();
}

SchemeOps build_scheme(const SchemeConfig& cfg) { return SchemeOps(cfg); }

Field discrete_divergence(DivergenceKind kind, const LineOperators& ox, const LineOperators& oy, const Field& u,
                          const Field& v) {
    if (kind == DivergenceKind::galerkin) return apply_tensor(*ox.D, *oy.M, u) + apply_tensor(*ox.M, *oy.D, v);
    return apply_tensor(*ox.D, *oy.DI, u) + apply_tensor(*ox.DI, *oy.D, v);
}

Field discrete_divergence(DivergenceKind kind, const Grid2D& grid, const Field& u, const Field& v) {
    return discrete_divergence(kind, LineOperators::build(grid.x), LineOperators::build(grid.y), u, v);
}

std::vector<Eigen::MatrixXd> subcell_phi(const Grid2D& grid, const Field& u, const Field& v) {
    const SparseMatrix C = subcell_phi_matrix(grid);
    Eigen::VectorXd uv(u.size() + v.size());
    uv << flatten(u), flatten(v);
    const Eigen::VectorXd phi = C * uv;
    const int K = grid.K(), ne = grid.x.cells * grid.y.cells;
    std::vector<Eigen::MatrixXd> out(ne, Eigen::MatrixXd(K, K));
    for (int e = 0; e < ne; ++e)
        for (int s = 0; s < K; ++s)
            for (int p = 0; p < K; ++p) out[e](s, p) = phi((static_cast<Eigen::Index>(e) * K + s) * K + p);
    return out;
}

SparseMatrix subcell_phi_matrix(const Grid2D& grid) {
    const int K = grid.K(), nx = grid.nx(), ny = grid.ny();
    const Eigen::MatrixXd Ix = local_blocks(lobatto_rule(K), grid.x.dx()).integrator();
    const Eigen::MatrixXd Iy = local_blocks(lobatto_rule(K), grid.y.dx()).integrator();
    const Eigen::Index nuv = static_cast<Eigen::Index>(nx) * ny;
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::Index row = 0;
    for (int i = 0; i < grid.x.cells; ++i)
        for (int j = 0; j < grid.y.cells; ++j)
            for (int s = 1; s <= K; ++s)
                for (int p = 1; p <= K; ++p, ++row) {
                    const int as = node(grid.x, i, s), a0 = node(grid.x, i, 0);
                    const int bp = node(grid.y, j, p), b0 = node(grid.y, j, 0);
                    for (int w = 0; w <= K; ++w) {
                        const int bw = node(grid.y, j, w);
                        trips.emplace_back(row, static_cast<Eigen::Index>(as) * ny + bw, Iy(p, w));
                        trips.emplace_back(row, static_cast<Eigen::Index>(a0) * ny + bw, -Iy(p, w));
                    }
                    for (int z = 0; z <= K; ++z) {
                        const int az = node(grid.x, i, z);
                        trips.emplace_back(row, nuv + static_cast<Eigen::Index>(az) * ny + bp, Ix(s, z));
                        trips.emplace_back(row, nuv + static_cast<Eigen::Index>(az) * ny + b0, -Ix(s, z));
                    }
                }
    SparseMatrix C(row, 2 * nuv);
    C.setFromTriplets(trips.begin(), trips.end());
    return C;
}

Field assemble_phi(const Grid2D& grid, const std::vector<Eigen::MatrixXd>& phi) {
    const int K = grid.K();
    const LobattoRule rule = lobatto_rule(K);
    const Eigen::MatrixXd Dx = local_blocks(rule, grid.x.dx()).D;
    const Eigen::MatrixXd Dy = local_blocks(rule, grid.y.dx()).D;
    Field out = Field::Zero(grid.nx(), grid.ny());
    for (int i = 0; i < grid.x.cells; ++i)
        for (int j = 0; j < grid.y.cells; ++j) {
            Eigen::MatrixXd pad = Eigen::MatrixXd::Zero(K + 1, K + 1);
            pad.bottomRightCorner(K, K) = phi[static_cast<std::size_t>(i) * grid.y.cells + j];
            const Eigen::MatrixXd loc = Dx * pad * Dy.transpose();
            for (int z = 0; z <= K; ++z)
                for (int w = 0; w <= K; ++w) out(node(grid.x, i, z), node(grid.y, j, w)) += loc(z, w);
        }
    return out;
}

OssProjection oss_projection(const SchemeOps& ops, const StateField& q) {
    const LineOperators& X = ops.ops(Direction::x);
    const LineOperators& Y = ops.ops(Direction::y);
    const Field& m = ops.lumped_mass();
    OssProjection w;
    w.w_div = discrete_divergence(ops.divergence_kind(), X, Y, q.u, q.v).cwiseQuotient(m);
    w.w_px = apply_tensor(*X.D, *Y.M, q.p).cwiseQuotient(m);
    w.w_py = apply_tensor(*X.M, *Y.D, q.p).cwiseQuotient(m);
    return w;
}

}  // namespace gfq
