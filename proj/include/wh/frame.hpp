#pragma once

#include "wh/lorentz_block.hpp"
#include "wh/tensor.hpp"

#include <Eigen/Dense>

namespace wh {

enum class Part { Tperp, Screen, Transversal };

/// Components (u, s_1..s_n, v) of a vector in the adapted basis (xi, X_1..X_n, N).
struct FrameVector {
    Eigen::VectorXd c;

    FrameVector() = default;
    explicit FrameVector(Eigen::VectorXd comps) : c(std::move(comps)) {}
    static FrameVector make(double u, const Eigen::VectorXd& s, double v);
    /// k-th adapted basis vector (0 = xi, 1..n = X_k, n+1 = N).
    static FrameVector basis(int n, int k);

    [[nodiscard]] int n() const { return static_cast<int>(c.size()) - 2; }
    [[nodiscard]] double u() const { return c[0]; }
    [[nodiscard]] Eigen::VectorXd s() const { return c.segment(1, n()); }
    [[nodiscard]] double v() const { return c[c.size() - 1]; }
};

/// Pointwise splitting T⊥ ⊕ S ⊕ Tr of the tangent space.
///
/// xi = d_0, N = -f/2 d_0 + d_{n+1}, and the screen is the index-ordered
/// Gram-Schmidt of d_1..d_n under g_ij (equivalently X = d L^{-T} for the
/// Cholesky factor g_ij = L L^T). No pivoting, so the fields are smooth.
struct AdaptedFrame {
    Point point;
    Eigen::MatrixXd g;        // coordinate metric at the point
    Eigen::MatrixXd basis;    // columns: xi, X_1..X_n, N
    Eigen::MatrixXd inverse;  // basis^{-1} = eta basis^T g

    [[nodiscard]] int n() const { return static_cast<int>(basis.cols()) - 2; }
    [[nodiscard]] Eigen::VectorXd xi() const { return basis.col(0); }
    [[nodiscard]] Eigen::VectorXd nvec() const { return basis.col(basis.cols() - 1); }
    [[nodiscard]] Eigen::MatrixXd screen() const { return basis.block(0, 1, basis.rows(), n()); }

    [[nodiscard]] FrameVector to_frame(const Eigen::VectorXd& coords) const { return FrameVector(inverse * coords); }
    [[nodiscard]] Eigen::VectorXd to_coords(const FrameVector& w) const { return basis * w.c; }
};

AdaptedFrame build_frame(const Geometry& geo, const Point& p);

/// Component of w (coordinates) in one summand, in coordinates.
Eigen::VectorXd project(const AdaptedFrame& frame, const Eigen::VectorXd& w, Part part);

/// d_w of the frame fields at p (columns as in AdaptedFrame::basis), computed
/// from the symbolic metric derivatives.
Eigen::MatrixXd frame_derivative(const Geometry& geo, const Point& p, const Eigen::VectorXd& w);

/// nabla_w of the frame fields at p: column b is nabla_w e_b, in coordinates.
Eigen::MatrixXd frame_covariant_derivative(const Geometry& geo, const Point& p, const Eigen::VectorXd& w);

/// Connection form of the adapted frame along w: nabla_w e_b = sum_a Theta^a_b e_a.
/// Theta has block shape; a = omega_perp(w), x_b = *h(w, X_b) coefficient,
/// A = matrix of *nabla_w on the screen frame.
LorentzBlockElement connection_form(const Geometry& geo, const Point& p, const Eigen::VectorXd& w);

/// Frame fields as functions of the point, for finite-difference checks.
VectorField xi_field(const Geometry& geo);
VectorField transversal_field(const Geometry& geo);
VectorField screen_field(const Geometry& geo, int k);

/// A_V w for V = v_scale * N. Returned in coordinates; lies in S.
/// Throws ConventionError if the T⊥ part of -nabla_w V exceeds 1e-8 (relative).
Eigen::VectorXd shape_operator(const Geometry& geo, const Point& p, const Eigen::VectorXd& w, double v_scale = 1.0);

/// *h(w, y) for y in S (coordinates), y extended with constant frame components.
Eigen::VectorXd screen_second_form(const Geometry& geo, const Point& p, const Eigen::VectorXd& w,
                                   const Eigen::VectorXd& y);

struct ConnectionScalars {
    double omega_t = 0.0;     // nabla^t_w N = omega_t N
    double omega_perp = 0.0;  // *nabla^t_w xi = omega_perp xi
};

ConnectionScalars connection_scalars(const Geometry& geo, const Point& p, const Eigen::VectorXd& w);

/// *nabla_w X_k (k in 0..n-1), in coordinates.
Eigen::VectorXd star_nabla(const Geometry& geo, const Point& p, const Eigen::VectorXd& w, int k);

}  // namespace wh
