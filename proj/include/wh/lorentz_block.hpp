#pragma once

#include <Eigen/Dense>

namespace wh {

/// Element of the stabilizer of the isotropic line RU in so(1, n+1), written
/// in the basis (U, X_1..X_n, V) with Gram matrix [[0,0,1],[0,I,0],[1,0,0]]:
///
///     [ a   x    0  ]
///     [ 0   A  -x^T ]
///     [ 0   0   -a  ]
///
/// with A antisymmetric. Column k of the matrix is the image of basis vector k.
struct LorentzBlockElement {
    double a = 0.0;
    Eigen::VectorXd x;  // the row x
    Eigen::MatrixXd A;  // antisymmetric n x n

    LorentzBlockElement() = default;
    LorentzBlockElement(double a_, Eigen::VectorXd x_, Eigen::MatrixXd A_)
        : a(a_), x(std::move(x_)), A(std::move(A_)) {}

    static LorentzBlockElement zero(int n);

    [[nodiscard]] int n() const { return static_cast<int>(x.size()); }
    [[nodiscard]] Eigen::MatrixXd to_matrix() const;

    /// Coordinates (a, x, A_ij for i<j); the Euclidean norm of this vector is
    /// the Frobenius norm of the full matrix divided by sqrt(2).
    [[nodiscard]] Eigen::VectorXd to_vector() const;
    static LorentzBlockElement from_vector(const Eigen::VectorXd& v, int n);
    static int vector_dim(int n) { return 1 + n + n * (n - 1) / 2; }

    /// Largest deviation of `m` from block shape (entries that must vanish,
    /// mirrored entries that must cancel, and the antisymmetry of A).
    static double block_residual(const Eigen::MatrixXd& m);
    /// Reads a, x and the antisymmetric part of A from a matrix in the adapted basis.
    static LorentzBlockElement from_matrix(const Eigen::MatrixXd& m);

    [[nodiscard]] double norm() const { return to_vector().norm(); }

    LorentzBlockElement& operator+=(const LorentzBlockElement& o);
    LorentzBlockElement& operator*=(double s);
};

LorentzBlockElement operator+(LorentzBlockElement a, const LorentzBlockElement& b);
LorentzBlockElement operator-(LorentzBlockElement a, const LorentzBlockElement& b);
LorentzBlockElement operator*(double s, LorentzBlockElement a);

/// Matrix commutator [p, q] = pq - qp, which stays in block form.
LorentzBlockElement bracket(const LorentzBlockElement& p, const LorentzBlockElement& q);

/// Gram matrix of the adapted basis (U, X_1..X_n, V).
Eigen::MatrixXd adapted_gram(int n);

/// Antisymmetric matrices <-> upper-triangle coordinate vectors (i<j, row-major).
Eigen::VectorXd so_to_vector(const Eigen::MatrixXd& A);
Eigen::MatrixXd so_from_vector(const Eigen::VectorXd& v, int n);

}  // namespace wh
