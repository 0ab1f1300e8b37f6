#include "gfq/tensor.hpp"

#include <algorithm>

#include "gfq/errors.hpp"

namespace gfq {

void apply_x_add(const Operator1D& a, const Field& f, double s, Field& out) {
    if (f.rows() != a.size() || out.rows() != f.rows() || out.cols() != f.cols())
        throw ParameterError("apply_x: field shape mismatch");
    if (a.bands.empty()) {
        out.noalias() += s * (a.matrix * f);
        return;
    }
    const Eigen::Index n = f.rows();
    for (std::size_t k = 0; k < a.bands.offsets.size(); ++k) {
        const int d = a.bands.offsets[k];
        const Eigen::VectorXd c = s * a.bands.coef.col(k);
        const Eigen::Index lo = std::max<Eigen::Index>(0, -d), hi = std::min<Eigen::Index>(n, n - d);
        if (hi > lo) out.middleRows(lo, hi - lo).noalias() += c.segment(lo, hi - lo).asDiagonal() * f.middleRows(lo + d, hi - lo);
        if (a.bc() != Boundary::periodic) continue;
        if (d > 0) out.bottomRows(d).noalias() += c.tail(d).asDiagonal() * f.topRows(d);
        if (d < 0) out.topRows(-d).noalias() += c.head(-d).asDiagonal() * f.bottomRows(-d);
    }
}

Field apply_x(const Operator1D& a, const Field& f) {
    Field out = Field::Zero(f.rows(), f.cols());
    apply_x_add(a, f, 1.0, out);
    return out;
}

Field apply_y(const Operator1D& b, const Field& f) {
    if (f.cols() != b.size()) throw ParameterError("apply_y: field shape mismatch");
    if (b.bands.empty()) return Field(f * b.matrix.transpose());
    const Eigen::Index n = f.cols();
    Field out = Field::Zero(f.rows(), n);
    for (std::size_t k = 0; k < b.bands.offsets.size(); ++k) {
        const int d = b.bands.offsets[k];
        const auto c = b.bands.coef.col(k);
        const Eigen::Index lo = std::max<Eigen::Index>(0, -d), hi = std::min<Eigen::Index>(n, n - d);
        if (hi > lo) out.middleCols(lo, hi - lo).noalias() += f.middleCols(lo + d, hi - lo) * c.segment(lo, hi - lo).asDiagonal();
        if (b.bc() != Boundary::periodic) continue;
        if (d > 0) out.rightCols(d).noalias() += f.leftCols(d) * c.tail(d).asDiagonal();
        if (d < 0) out.leftCols(-d).noalias() += f.rightCols(-d) * c.head(-d).asDiagonal();
    }
    return out;
}

Field apply_tensor(const Operator1D& ax, const Operator1D& by, const Field& f) {
    if (f.rows() != ax.size() || f.cols() != by.size()) throw ParameterError("apply_tensor: field shape mismatch");
    return apply_x(ax, apply_y(by, f));
}

Field apply_tensor(const TensorOp& t, const Field& f) { return apply_tensor(*t.ax, *t.by, f); }

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
}

Eigen::MatrixXd dense_assemble(const TensorOp& t) {
    if (static_cast<long>(t.ax->size()) * t.by->size() > 20000)
        throw ParameterError("dense_assemble: tensor operator exceeds the 20000 DoF guard");
    return kron(t.ax->dense(), t.by->dense());
}

Eigen::VectorXd flatten(const Field& f) {
    Eigen::VectorXd v(f.size());
    const Eigen::Index ny = f.cols();
    for (Eigen::Index a = 0; a < f.rows(); ++a)
        for (Eigen::Index b = 0; b < ny; ++b) v(a * ny + b) = f(a, b);
    return v;
}

Field unflatten(const Eigen::VectorXd& v, int nx, int ny) {
    if (v.size() != static_cast<Eigen::Index>(nx) * ny) throw ParameterError("unflatten: size mismatch");
    Field f(nx, ny);
    for (int a = 0; a < nx; ++a)
        for (int b = 0; b < ny; ++b) f(a, b) = v(static_cast<Eigen::Index>(a) * ny + b);
    return f;
}

StateField& StateField::operator+=(const StateField& o) {
    u += o.u;
    v += o.v;
    p += o.p;
    return *this;
}

StateField& StateField::operator-=(const StateField& o) {
    u -= o.u;
    v -= o.v;
    p -= o.p;
    return *this;
}

StateField& StateField::operator*=(double a) {
    u *= a;
    v *= a;
    p *= a;
    return *this;
}

StateField& StateField::axpy(double a, const StateField& o) {
    u += a * o.u;
    v += a * o.v;
    p += a * o.p;
    return *this;
}

double StateField::max_abs() const {
    return std::max({u.cwiseAbs().maxCoeff(), v.cwiseAbs().maxCoeff(), p.cwiseAbs().maxCoeff()});
}

bool StateField::all_finite() const { return u.allFinite() && v.allFinite() && p.allFinite(); }

Eigen::VectorXd StateField::stacked() const {
    const Eigen::Index n = u.size();
    Eigen::VectorXd s(3 * n);
    s << flatten(u), flatten(v), flatten(p);
    return s;
}

StateField StateField::from_stacked(const Eigen::VectorXd& s, int nx, int ny) {
    const Eigen::Index n = static_cast<Eigen::Index>(nx) * ny;
    if (s.size() != 3 * n) throw ParameterError("from_stacked: size mismatch");
    return {unflatten(s.segment(0, n), nx, ny), unflatten(s.segment(n, n), nx, ny), unflatten(s.segment(2 * n, n), nx, ny)};
}

StateField operator+(StateField a, const StateField& b) { return a += b; }
StateField operator-(StateField a, const StateField& b) { return a -= b; }
StateField operator*(double s, StateField a) { return a *= s; }

}  // namespace gfq
