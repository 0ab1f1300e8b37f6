#include "gfq/operator1d.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gfq/errors.hpp"

namespace gfq {

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int wrap(int a, int n) { return ((a % n) + n) % n; }

BlockStencil stencil_from_element(const Eigen::MatrixXd& blk, int K, bool integrator_rows) {
    BlockStencil st;
    for (int e = -1; e <= 1; ++e) {
        for (int a = integrator_rows ? 1 : 0; a <= K; ++a) {
            const int g = e * K + a;
            if (g < 1 || g > K) continue;
            for (int b = 0; b <= K; ++b) {
                if (blk(a, b) == 0.0) continue;
                const int gc = e * K + b;
                const int c = floor_div(gc - 1, K);
                const int p = gc - c * K;
                auto& m = st[c];
                if (m.size() == 0) m = Eigen::MatrixXd::Zero(K, K);
                m(g - 1, p - 1) += blk(a, b);
            }
        }
    }
    return st;
}

SparseMatrix periodic_matrix(const BlockStencil& st, const Line1D& line) {
    const int K = line.K, N = line.cells, n = line.size();
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < N; ++i)
        for (const auto& [k, m] : st)
            for (int s = 1; s <= K; ++s)
                for (int p = 1; p <= K; ++p)
                    if (m(s - 1, p - 1) != 0.0)
                        trips.emplace_back(wrap(i * K + s, n), wrap((i + k) * K + p, n), m(s - 1, p - 1));
    SparseMatrix a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

SparseMatrix line_matrix(const Eigen::MatrixXd& blk, const Line1D& line, bool integrator_rows) {
    const int K = line.K, n = line.size();
    std::vector<Eigen::Triplet<double>> trips;
    for (int e = 0; e < line.cells; ++e)
        for (int a = integrator_rows ? 1 : 0; a <= K; ++a)
            for (int b = 0; b <= K; ++b)
                if (blk(a, b) != 0.0) trips.emplace_back(e * K + a, e * K + b, blk(a, b));
    SparseMatrix m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

void check_compatible(const Operator1D& a, const Operator1D& b) {
    if (a.K() != b.K()) throw ParameterError("operator degree mismatch");
    if (a.line.cells != b.line.cells || a.bc() != b.bc() || a.line.length != b.line.length)
        throw ParameterError("operators live on different lines");
}

}  // namespace

int Operator1D::kmax() const {
    int k = 0;
    for (const auto& [off, m] : stencil)
        if (m.cwiseAbs().maxCoeff() > 0.0) k = std::max(k, std::abs(off));
    return k;
}

Operator1D from_element(const Eigen::MatrixXd& block, const Line1D& line, OpKind kind, bool integrator_rows) {
    Operator1D op;
    op.kind = kind;
    op.line = line;
    op.element = block;
    op.stencil = stencil_from_element(block, line.K, integrator_rows);
    op.matrix = line.bc == Boundary::periodic ? periodic_matrix(op.stencil, line)
                                              : line_matrix(block, line, integrator_rows);
    return op;
}

Operator1D assemble_1d(OpKind kind, const Line1D& line) {
    if (line.cells < 1) throw ParameterError("assemble_1d: line has no cells");
    const LocalBlocks lb = local_blocks(lobatto_rule(line.K), line.dx());
    switch (kind) {
        case OpKind::mass:
        case OpKind::lumped: {
            // Collocated quadrature already gives a diagonal mass; lumping is the identity map on it.
            Operator1D m = from_element(lb.M, line, kind);
            if (kind == OpKind::lumped) {
                Eigen::VectorXd rows = m.dense().rowwise().sum();
                m.matrix = SparseMatrix(rows.asDiagonal().toDenseMatrix().sparseView());
            }
            return m;
        }
        case OpKind::mass_inverse: {
            Operator1D m = from_element(lb.M, line, OpKind::mass);
            Operator1D inv;
            inv.kind = kind;
            inv.line = line;
            inv.stencil[0] = m.stencil.at(0).diagonal().cwiseInverse().asDiagonal();
            Eigen::VectorXd d = Eigen::VectorXd(m.matrix.diagonal()).cwiseInverse();
            inv.matrix = SparseMatrix(d.asDiagonal().toDenseMatrix().sparseView());
            return inv;
        }
        case OpKind::D: return from_element(lb.D, line, kind);
        case OpKind::DX: return from_element(lb.DX, line, kind);
        case OpKind::DXX: return from_element(lb.DXX, line, kind);
        case OpKind::I: return from_element(lb.integrator(), line, kind, true);
        case OpKind::I_reversed: return from_element(lb.reversed_integrator(), line, kind, true);
        case OpKind::identity: {
            Operator1D id;
            id.kind = kind;
            id.line = line;
            id.stencil[0] = Eigen::MatrixXd::Identity(line.K, line.K);
            id.matrix = SparseMatrix(line.size(), line.size());
            id.matrix.setIdentity();
            return id;
        }
        case OpKind::composed: break;
    }
    throw ParameterError("assemble_1d: unsupported operator kind");
}

Operator1D assemble_1d(OpKind kind, const Grid2D& grid, Direction dir) { return assemble_1d(kind, grid.line(dir)); }

Operator1D compose(const Operator1D& a, const Operator1D& b) {
    check_compatible(a, b);
    if (a.kind == OpKind::identity) return b;
    if (b.kind == OpKind::identity) return a;
    if (a.is_integrator()) throw ParameterError("compose: an integrator cannot be the left factor");
    if (b.is_integrator()) {
        if (!a.element) throw ParameterError("compose: left factor of an integrator needs an element block");
        return from_element(*a.element * *b.element, a.line, OpKind::composed);
    }
    Operator1D c;
    c.kind = OpKind::composed;
    c.line = a.line;
    const int K = a.K();
    for (const auto& [ka, ma] : a.stencil)
        for (const auto& [kb, mb] : b.stencil) {
            auto& m = c.stencil[ka + kb];
            if (m.size() == 0) m = Eigen::MatrixXd::Zero(K, K);
            m += ma * mb;
        }
    c.matrix = (a.matrix * b.matrix).pruned();
    return c;
}

Operator1D compose(const Operator1D& a, const Operator1D& b, const Operator1D& c) { return compose(a, compose(b, c)); }

Operator1D combine(double a, const Operator1D& A, double b, const Operator1D& B) {
    check_compatible(A, B);
    Operator1D c;
    c.kind = OpKind::composed;
    c.line = A.line;
    const int K = A.K();
    const auto add = [&](double f, const Operator1D& src) {
        for (const auto& [k, m] : src.stencil) {
            auto& t = c.stencil[k];
            if (t.size() == 0) t = Eigen::MatrixXd::Zero(K, K);
            t += f * m;
        }
    };
    add(a, A);
    add(b, B);
    c.matrix = (a * A.matrix + b * B.matrix).pruned();
    if (A.element && B.element) c.element = a * *A.element + b * *B.element;
    return c;
}

Eigen::MatrixXd dense_assemble(const Operator1D& op) {
    if (op.size() > 20000) throw ParameterError("dense_assemble: operator exceeds the 20000 DoF guard");
    return op.dense();
}

Operator1D with_bands(Operator1D op) {
    const int n = op.size();
    std::map<int, int> slot;
    const auto offset = [&](int i, int k) {
        int d = k - i;
        if (op.bc() == Boundary::periodic) {
            d = ((d % n) + n) % n;
            if (d > n / 2) d -= n;
        }
        return d;
    };
    for (int i = 0; i < op.matrix.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(op.matrix, i); it; ++it) slot.emplace(offset(i, static_cast<int>(it.col())), 0);
    const auto nd = static_cast<Eigen::Index>(slot.size());
    op.bands = {};
    if (nd == 0 || nd * n > 2 * op.matrix.nonZeros() + n) return op;
    int k = 0;
    for (auto& [d, s] : slot) {
        s = k++;
        op.bands.offsets.push_back(d);
    }
    op.bands.coef = Eigen::MatrixXd::Zero(n, nd);
    for (int i = 0; i < op.matrix.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(op.matrix, i); it; ++it)
            op.bands.coef(i, slot.at(offset(i, static_cast<int>(it.col())))) += it.value();
    return op;
}

}  // namespace gfq
