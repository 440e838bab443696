#include "wh/lorentz_block.hpp"

#include <algorithm>
#include <cmath>

namespace wh {

LorentzBlockElement LorentzBlockElement::zero(int n)
{
    return {0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
}

Eigen::MatrixXd LorentzBlockElement::to_matrix() const
{
    const int n = this->n();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 2, n + 2);
    m(0, 0) = a;
    m(n + 1, n + 1) = -a;
    m.block(0, 1, 1, n) = x.transpose();
    m.block(1, n + 1, n, 1) = -x;
    m.block(1, 1, n, n) = A;
    return m;
}

Eigen::VectorXd so_to_vector(const Eigen::MatrixXd& A)
{
    const int n = static_cast<int>(A.rows());
    Eigen::VectorXd v(n * (n - 1) / 2);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) v[k++] = A(i, j);
    return v;
}

Eigen::MatrixXd so_from_vector(const Eigen::VectorXd& v, int n)
{
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            A(i, j) = v[k];
            A(j, i) = -v[k];
            ++k;
        }
    return A;
}

Eigen::VectorXd LorentzBlockElement::to_vector() const
{
    const int n = this->n();
    Eigen::VectorXd v(vector_dim(n));
    v[0] = a;
    v.segment(1, n) = x;
    v.tail(n * (n - 1) / 2) = so_to_vector(A);
    return v;
}

LorentzBlockElement LorentzBlockElement::from_vector(const Eigen::VectorXd& v, int n)
{
    return {v[0], v.segment(1, n), so_from_vector(v.tail(n * (n - 1) / 2), n)};
}

double LorentzBlockElement::block_residual(const Eigen::MatrixXd& m)
{
    const int n = static_cast<int>(m.rows()) - 2;
    double r = 0.0;
    for (int i = 1; i < n + 2; ++i) r = std::max(r, std::abs(m(i, 0)));
    for (int j = 0; j < n + 1; ++j) r = std::max(r, std::abs(m(n + 1, j)));
    r = std::max(r, std::abs(m(0, n + 1)));
    r = std::max(r, std::abs(m(0, 0) + m(n + 1, n + 1)));
    for (int i = 0; i < n; ++i) {
        r = std::max(r, std::abs(m(0, 1 + i) + m(1 + i, n + 1)));
        for (int j = 0; j < n; ++j) r = std::max(r, std::abs(m(1 + i, 1 + j) + m(1 + j, 1 + i)));
    }
    return r;
}

LorentzBlockElement LorentzBlockElement::from_matrix(const Eigen::MatrixXd& m)
{
    const int n = static_cast<int>(m.rows()) - 2;
    const Eigen::MatrixXd block = m.block(1, 1, n, n);
    return {0.5 * (m(0, 0) - m(n + 1, n + 1)),
            0.5 * (m.block(0, 1, 1, n).transpose() - m.block(1, n + 1, n, 1)),
            0.5 * (block - block.transpose())};
}

LorentzBlockElement& LorentzBlockElement::operator+=(const LorentzBlockElement& o)
{
    a += o.a;
    x += o.x;
    A += o.A;
    return *this;
}

LorentzBlockElement& LorentzBlockElement::operator*=(double s)
{
    a *= s;
    x *= s;
    A *= s;
    return *this;
}

LorentzBlockElement operator+(LorentzBlockElement a, const LorentzBlockElement& b) { return a += b; }
LorentzBlockElement operator-(LorentzBlockElement a, const LorentzBlockElement& b) { return a += -1.0 * b; }
LorentzBlockElement operator*(double s, LorentzBlockElement a) { return a *= s; }

LorentzBlockElement bracket(const LorentzBlockElement& p, const LorentzBlockElement& q)
{
    // [p, q] has a = 0, x = a_p x_q + x_p A_q - a_q x_p - x_q A_p, A = [A_p, A_q].
    Eigen::VectorXd x = p.a * q.x - q.a * p.x + (p.x.transpose() * q.A).transpose() -
                        (q.x.transpose() * p.A).transpose();
    return {0.0, std::move(x), p.A * q.A - q.A * p.A};
}

Eigen::MatrixXd adapted_gram(int n)
{
    Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(n + 2, n + 2);
    eta(0, n + 1) = eta(n + 1, 0) = 1.0;
    eta.block(1, 1, n, n).setIdentity();
    return eta;
}

}  // namespace wh
