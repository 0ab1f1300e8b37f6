#pragma once

#include <Eigen/Dense>
#include <memory>

#include "gfq/operator1d.hpp"

namespace gfq {

// Nodal 2D array: rows are x-indices alpha, columns are y-indices beta.
// Flattened vectors use index alpha * ny + beta.
using Field = Eigen::MatrixXd;

using OpPtr = std::shared_ptr<const Operator1D>;

struct TensorOp {
    OpPtr ax;
    OpPtr by;
};

// (Ax (x) By) f = Ax * F * By^T.
Field apply_tensor(const TensorOp& t, const Field& f);
Field apply_tensor(const Operator1D& ax, const Operator1D& by, const Field& f);
// Ax * F and F * By^T; use the band form when present.
Field apply_x(const Operator1D& a, const Field& f);
Field apply_y(const Operator1D& b, const Field& f);
// out += s * Ax * F
void apply_x_add(const Operator1D& a, const Field& f, double s, Field& out);

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
Eigen::MatrixXd dense_assemble(const TensorOp& t);

Eigen::VectorXd flatten(const Field& f);
Field unflatten(const Eigen::VectorXd& v, int nx, int ny);

struct StateField {
    Field u, v, p;

    StateField() = default;
    StateField(int nx, int ny) : u(Field::Zero(nx, ny)), v(Field::Zero(nx, ny)), p(Field::Zero(nx, ny)) {}
    StateField(Field u_, Field v_, Field p_) : u(std::move(u_)), v(std::move(v_)), p(std::move(p_)) {}

    int nx() const { return static_cast<int>(u.rows()); }
    int ny() const { return static_cast<int>(u.cols()); }
    Field& operator[](int i) { return i == 0 ? u : (i == 1 ? v : p); }
    const Field& operator[](int i) const { return i == 0 ? u : (i == 1 ? v : p); }

    StateField& operator+=(const StateField& o);
    StateField& operator-=(const StateField& o);
    StateField& operator*=(double a);
    // this += a * o
    StateField& axpy(double a, const StateField& o);

    double max_abs() const;
    bool all_finite() const;
    Eigen::VectorXd stacked() const;
    static StateField from_stacked(const Eigen::VectorXd& v, int nx, int ny);
};

StateField operator+(StateField a, const StateField& b);
StateField operator-(StateField a, const StateField& b);
StateField operator*(double s, StateField a);

}  // namespace gfq
