#include "wh/tensor.hpp"

#include "wh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace wh {

namespace {

constexpr double kScreenEigenFloor = 1e-12;

std::span<const double> as_span(const Point& p)
{
    return {p.data(), static_cast<std::size_t>(p.size())};
}

}  // namespace

Eigen::VectorXd Christoffel::contract(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
    for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i) {
            if (a[i] == 0.0) continue;
            for (int j = 0; j < dim_; ++j) out[k] += (*this)(k, i, j) * a[i] * b[j];
        }
    return out;
}

Eigen::MatrixXd Christoffel::along(const Eigen::VectorXd& a) const
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i) {
            if (a[i] == 0.0) continue;
            for (int j = 0; j < dim_; ++j) m(k, j) += (*this)(k, i, j) * a[i];
        }
    return m;
}

Eigen::MatrixXd RiemannTensor::endomorphism(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            const double w = a[i] * b[j];
            if (w == 0.0) continue;
            for (int l = 0; l < dim_; ++l)
                for (int k = 0; k < dim_; ++k) m(l, k) += (*this)(l, k, i, j) * w;
        }
    return m;
}

double RiemannTensor::max_abs() const
{
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double fd_step(const Point& p) { return 1e-5 * (1.0 + p.cwiseAbs().maxCoeff()); }

Geometry::Geometry(MetricSpec spec) : spec_(std::move(spec))
{
    const int n = spec_.n;
    const int dim = n + 2;
    auto add_entry = [&](int row, int col, const Expr& e) {
        Entry entry;
        entry.row = row;
        entry.col = col;
        entry.value = CompiledExpr(e);
        entry.d.resize(dim);
        entry.has_d.assign(dim, false);
        entry.dd.assign(dim, std::vector<CompiledExpr>(dim));
        entry.has_dd.assign(dim, std::vector<bool>(dim, false));
        for (int c = 0; c < dim; ++c) {
            const Expr dc = diff_expr(e, c);
            if (dc.is_zero()) continue;
            entry.has_d[c] = true;
            entry.d[c] = CompiledExpr(dc);
            for (int d = 0; d < dim; ++d) {
                const Expr dcd = diff_expr(dc, d);
                if (dcd.is_zero()) continue;
                entry.has_dd[c][d] = true;
                entry.dd[c][d] = CompiledExpr(dcd);
            }
        }
        entries_.push_back(std::move(entry));
    };
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) add_entry(i + 1, j + 1, spec_.gij[i][j]);
    add_entry(n + 1, n + 1, spec_.f);
}

double Geometry::f_at(const Point& p) const
{
    validate_point(spec_, p);
    return entries_.back().value(as_span(p));
}

Eigen::VectorXd Geometry::df_at(const Point& p) const
{
    validate_point(spec_, p);
    const Entry& e = entries_.back();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
    for (int c = 0; c < dim(); ++c)
        if (e.has_d[c]) out[c] = e.d[c](as_span(p));
    return out;
}

MetricJet Geometry::jet(const Point& p, int order) const
{
    validate_point(spec_, p);
    const int dim = this->dim();
    const int n = spec_.n;
    const auto x = as_span(p);

    MetricJet jet;
    jet.g = Eigen::MatrixXd::Zero(dim, dim);
    jet.g(0, n + 1) = jet.g(n + 1, 0) = 1.0;
    if (order >= 1) jet.dg.assign(dim, Eigen::MatrixXd::Zero(dim, dim));
    if (order >= 2) jet.ddg.assign(dim, std::vector<Eigen::MatrixXd>(dim, Eigen::MatrixXd::Zero(dim, dim)));

    for (const Entry& e : entries_) {
        const double v = e.value(x);
        jet.g(e.row, e.col) = jet.g(e.col, e.row) = v;
        if (order < 1) continue;
        for (int c = 0; c < dim; ++c) {
            if (!e.has_d[c]) continue;
            const double dv = e.d[c](x);
            jet.dg[c](e.row, e.col) = jet.dg[c](e.col, e.row) = dv;
            if (order < 2) continue;
            for (int d = 0; d < dim; ++d) {
                if (!e.has_dd[c][d]) continue;
                const double ddv = e.dd[c][d](x);
                jet.ddg[c][d](e.row, e.col) = jet.ddg[c][d](e.col, e.row) = ddv;
            }
        }
    }

    const Eigen::MatrixXd screen = jet.g.block(1, 1, n, n);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(screen, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= kScreenEigenFloor)
        throw DegenerateScreenError("screen metric g_ij is not positive definite (smallest eigenvalue " +
                                    std::to_string(eig.eigenvalues().minCoeff()) + ")");

    jet.ginv = Eigen::MatrixXd::Zero(dim, dim);
    jet.ginv(0, 0) = -jet.g(n + 1, n + 1);
    jet.ginv(0, n + 1) = jet.ginv(n + 1, 0) = 1.0;
    jet.ginv.block(1, 1, n, n) = screen.llt().solve(Eigen::MatrixXd::Identity(n, n));
    return jet;
}

Eigen::MatrixXd metric_at(const Geometry& geo, const Point& p) { return geo.jet(p, 0).g; }

Eigen::MatrixXd inverse_metric_at(const Geometry& geo, const Point& p) { return geo.jet(p, 0).ginv; }

namespace {

// Gamma_lij = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
double first_kind(const std::vector<Eigen::MatrixXd>& dg, int l, int i, int j)
{
    return 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
}

}  // namespace

Christoffel christoffel_from_jet(const MetricJet& jet)
{
    const int dim = static_cast<int>(jet.g.rows());
    Christoffel gamma(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j)
            for (int l = 0; l < dim; ++l) {
                const double lower = first_kind(jet.dg, l, i, j);
                if (lower == 0.0) continue;
                for (int k = 0; k < dim; ++k) gamma(k, i, j) += jet.ginv(k, l) * lower;
            }
    for (int k = 0; k < dim; ++k)
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < i; ++j) gamma(k, i, j) = gamma(k, j, i);
    return gamma;
}

Christoffel christoffel_at(const Geometry& geo, const Point& p) { return christoffel_from_jet(geo.jet(p, 1)); }

RiemannTensor riemann_at(const Geometry& geo, const Point& p)
{
    const MetricJet jet = geo.jet(p, 2);
    const int dim = geo.dim();
    const Christoffel gamma = christoffel_from_jet(jet);

    // dgamma[m](k, i, j) = d_m Gamma^k_ij, from d_m ginv = -ginv (d_m g) ginv.
    std::vector<Christoffel> dgamma(dim, Christoffel(dim));
    for (int m = 0; m < dim; ++m) {
        const Eigen::MatrixXd dginv = -jet.ginv * jet.dg[m] * jet.ginv;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                for (int l = 0; l < dim; ++l) {
                    const double lower = first_kind(jet.dg, l, i, j);
                    const double dlower = 0.5 * (jet.ddg[m][i](j, l) + jet.ddg[m][j](i, l) - jet.ddg[m][l](i, j));
                    if (lower == 0.0 && dlower == 0.0) continue;
                    for (int k = 0; k < dim; ++k)
                        dgamma[m](k, i, j) += dginv(k, l) * lower + jet.ginv(k, l) * dlower;
                }
    }

    RiemannTensor r(dim);
    for (int l = 0; l < dim; ++l)
        for (int k = 0; k < dim; ++k)
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) {
                    double v = dgamma[i](l, j, k) - dgamma[j](l, i, k);
                    for (int m = 0; m < dim; ++m)
                        v += gamma(l, i, m) * gamma(m, j, k) - gamma(l, j, m) * gamma(m, i, k);
                    r(l, k, i, j) = v;
                }
    return r;
}

Eigen::VectorXd covariant_derivative(const Geometry& geo, const Point& p,
                                     const Eigen::VectorXd& direction, const VectorField& field,
                                     double h)
{
    if (h <= 0.0) h = fd_step(p);
    const Eigen::VectorXd plus = field(p + h * direction);
    const Eigen::VectorXd minus = field(p - h * direction);
    const Eigen::VectorXd at = field(p);
    return (plus - minus) / (2.0 * h) + christoffel_at(geo, p).contract(direction, at);
}

}  // namespace wh
