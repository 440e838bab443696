#pragma once

#include "wh/expr.hpp"
#include "wh/metric_spec.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace wh {

/// Christoffel symbols Gamma^k_ij, symmetric in (i, j).
class Christoffel {
public:
    explicit Christoffel(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}

    [[nodiscard]] int dim() const { return dim_; }
    double& operator()(int k, int i, int j) { return data_[idx(k, i, j)]; }
    double operator()(int k, int i, int j) const { return data_[idx(k, i, j)]; }

    /// Gamma(a, b)^k = Gamma^k_ij a^i b^j.
    [[nodiscard]] Eigen::VectorXd contract(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
    /// Matrix M with (M v)^k = Gamma^k_ij a^i v^j.
    [[nodiscard]] Eigen::MatrixXd along(const Eigen::VectorXd& a) const;

private:
    [[nodiscard]] std::size_t idx(int k, int i, int j) const
    {
        return static_cast<std::size_t>((k * dim_ + i) * dim_ + j);
    }
    int dim_;
    std::vector<double> data_;
};

/// Riemann tensor R^l_kij with R(d_i, d_j) d_k = R^l_kij d_l and
/// R(X, Y) Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
/// This is the only curvature convention used in the library.
class RiemannTensor {
public:
    explicit RiemannTensor(int dim)
        : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim * dim), 0.0) {}

    [[nodiscard]] int dim() const { return dim_; }
    double& operator()(int l, int k, int i, int j) { return data_[idx(l, k, i, j)]; }
    double operator()(int l, int k, int i, int j) const { return data_[idx(l, k, i, j)]; }

    /// Coordinate matrix of the endomorphism R(a, b): column k is R(a, b) d_k.
    [[nodiscard]] Eigen::MatrixXd endomorphism(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
    [[nodiscard]] double max_abs() const;

private:
    [[nodiscard]] std::size_t idx(int l, int k, int i, int j) const
    {
        return static_cast<std::size_t>(((l * dim_ + k) * dim_ + i) * dim_ + j);
    }
    int dim_;
    std::vector<double> data_;
};

/// Metric values and coordinate derivatives at one point.
struct MetricJet {
    Eigen::MatrixXd g;
    Eigen::MatrixXd ginv;
    std::vector<Eigen::MatrixXd> dg;                // dg[c] = d_c g
    std::vector<std::vector<Eigen::MatrixXd>> ddg;  // ddg[c][d] = d_c d_d g (order 2 only)
};

/// Default central-difference step 1e-5 * (1 + |p|_inf).
double fd_step(const Point& p);

/// Symbolic Walker metric with all first and second partial derivatives of
/// g_ij and f differentiated once, up front, and compiled for evaluation.
class Geometry {
public:
    explicit Geometry(MetricSpec spec);

    [[nodiscard]] const MetricSpec& spec() const { return spec_; }
    [[nodiscard]] int n() const { return spec_.n; }
    [[nodiscard]] int dim() const { return spec_.n + 2; }

    /// Values of f and its gradient; used by the transversal frame field.
    [[nodiscard]] double f_at(const Point& p) const;
    [[nodiscard]] Eigen::VectorXd df_at(const Point& p) const;

    /// order 0: g and ginv; 1: adds dg; 2: adds ddg.
    [[nodiscard]] MetricJet jet(const Point& p, int order) const;

private:
    struct Entry {
        int row;
        int col;
        CompiledExpr value;
        std::vector<CompiledExpr> d;               // by coordinate; empty program = 0
        std::vector<std::vector<CompiledExpr>> dd;
        std::vector<bool> has_d;
        std::vector<std::vector<bool>> has_dd;
    };

    MetricSpec spec_;
    std::vector<Entry> entries_;  // upper-triangular nonconstant-capable entries
};

/// Coordinate metric matrix. Throws DegenerateScreenError when the smallest
/// eigenvalue of the screen block is <= 1e-12.
Eigen::MatrixXd metric_at(const Geometry& geo, const Point& p);

/// Inverse metric using the Walker block structure.
Eigen::MatrixXd inverse_metric_at(const Geometry& geo, const Point& p);

Christoffel christoffel_at(const Geometry& geo, const Point& p);
Christoffel christoffel_from_jet(const MetricJet& jet);

RiemannTensor riemann_at(const Geometry& geo, const Point& p);

/// Vector field on the chart.
using VectorField = std::function<Eigen::VectorXd(const Point&)>;

/// nabla_direction field at p: central difference of the components with
/// step `h` (fd_step(p) when h <= 0) plus the Christoffel contraction.
Eigen::VectorXd covariant_derivative(const Geometry& geo, const Point& p,
                                     const Eigen::VectorXd& direction, const VectorField& field,
                                     double h = 0.0);

}  // namespace wh
