#pragma once

#include "wh/frame.hpp"
#include "wh/lorentz_block.hpp"

#include <vector>

namespace wh {

/// Slot conventions for reading components out of R(w1, w2) in the adapted
/// basis (U = xi, X_1..X_n, V = N). Every extraction goes through this table.
///
///   r_h(i, j)    A-block of R(X_i, X_j)
///   p_map(i)     A-block of R(V, X_i)
///   t_sym(i, .)  x-row   of R(V, X_i)
///   lambda       a       of R(U, V)
///   l_row(i)     a       of R(V, X_i)
///
/// The remaining faces follow from the symmetries of a Walker curvature:
///   R(U, X_i) = 0,  A-block of R(U, V) = 0,  a of R(X_i, X_j) = 0,
///   x-row of R(X_i, X_j) = ((P_1)_ij, ..., (P_n)_ij),
///   x-row of R(U, V) = -l_row.
namespace slots {
inline constexpr int U = 0;
inline int X(int i) { return 1 + i; }
inline int V(int n) { return n + 1; }
}  // namespace slots

struct CurvatureComponents {
    int n = 0;
    std::vector<Eigen::MatrixXd> r_h;    // n*n entries, r_h[i*n + j]
    std::vector<Eigen::MatrixXd> p_map;  // n entries
    Eigen::MatrixXd t_sym;
    double lambda = 0.0;
    Eigen::VectorXd l_row;

    static CurvatureComponents zero(int n);

    [[nodiscard]] const Eigen::MatrixXd& rh(int i, int j) const { return r_h[i * n + j]; }
    Eigen::MatrixXd& rh(int i, int j) { return r_h[i * n + j]; }
    [[nodiscard]] double max_abs() const;
};

/// Largest entrywise difference between two component sets of the same n.
double max_difference(const CurvatureComponents& a, const CurvatureComponents& b);

/// Curvature on every ordered pair of adapted basis vectors at a point,
/// computed once from the Riemann tensor.
class FrameCurvature {
public:
    FrameCurvature(const Geometry& geo, const Point& p);

    [[nodiscard]] int n() const { return frame_.n(); }
    [[nodiscard]] const AdaptedFrame& frame() const { return frame_; }
    [[nodiscard]] const LorentzBlockElement& on_basis(int alpha, int beta) const
    {
        return table_[alpha * (n() + 2) + beta];
    }
    [[nodiscard]] LorentzBlockElement operator()(const FrameVector& w1, const FrameVector& w2) const;
    [[nodiscard]] double scale() const { return scale_; }

private:
    AdaptedFrame frame_;
    std::vector<LorentzBlockElement> table_;
    double scale_ = 0.0;
};

/// R(w1, w2) in the adapted basis. Throws ConventionError when the matrix is
/// not of block form to 1e-8 (relative to the curvature size).
LorentzBlockElement curvature_endomorphism(const Geometry& geo, const Point& p, const FrameVector& w1,
                                           const FrameVector& w2);

CurvatureComponents decompose_block(const Geometry& geo, const Point& p);
CurvatureComponents decompose_block(const FrameCurvature& fc);

LorentzBlockElement reconstruct(const CurvatureComponents& c, const FrameVector& w1, const FrameVector& w2);
/// reconstruct on a pair of adapted basis vectors.
LorentzBlockElement reconstruct_basis(const CurvatureComponents& c, int alpha, int beta);

/// Components recomputed from derivatives of the adapted connection form.
struct OperatorRoute {
    CurvatureComponents comps;           // r_h, p_map from *R; lambda, l_row from *R^t; t_sym from nabla *h
    std::vector<Eigen::MatrixXd> p_star;  // p_star[c](a, b): xi-coefficient of R(X_a, X_b) X_c
    Eigen::VectorXd r5uv;                 // screen part of R(U, V) V
    Eigen::MatrixXd star_rt;              // *R^t on coordinate pairs
};

OperatorRoute operator_route(const Geometry& geo, const Point& p, double h = 0.0);

/// Largest disagreement between the operator route and block extraction,
/// including the adjoint faces, relative to max(1, curvature size).
double route_residual(const CurvatureComponents& block, const OperatorRoute& route);

/// mu with *R^t(w1, w2) xi = mu xi, from the exterior derivative of omega_perp.
double star_rt_at(const Geometry& geo, const Point& p, const FrameVector& w1, const FrameVector& w2, double h = 0.0);

}  // namespace wh
