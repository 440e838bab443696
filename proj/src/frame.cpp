#include "wh/frame.hpp"

#include "wh/errors.hpp"

#include <cmath>

namespace wh {

namespace {

constexpr double kShapeTperpTol = 1e-8;

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& screen)
{
    Eigen::LLT<Eigen::MatrixXd> llt(screen);
    if (llt.info() != Eigen::Success) throw DegenerateScreenError("screen metric g_ij is not positive definite");
    return llt.matrixL();
}

// Screen frame coefficients C = L^{-T}: X_b = sum_a C(a, b) d_{a+1}.
Eigen::MatrixXd screen_coefficients(const Eigen::MatrixXd& lower)
{
    const int n = static_cast<int>(lower.rows());
    return lower.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
}

}  // namespace

FrameVector FrameVector::make(double u, const Eigen::VectorXd& s, double v)
{
    Eigen::VectorXd c(s.size() + 2);
    c[0] = u;
    c.segment(1, s.size()) = s;
    c[c.size() - 1] = v;
    return FrameVector(std::move(c));
}

FrameVector FrameVector::basis(int n, int k) { return FrameVector(Eigen::VectorXd::Unit(n + 2, k)); }

AdaptedFrame build_frame(const Geometry& geo, const Point& p)
{
    const int n = geo.n();
    const int dim = geo.dim();
    const MetricJet jet = geo.jet(p, 0);

    AdaptedFrame frame;
    frame.point = p;
    frame.g = jet.g;
    frame.basis = Eigen::MatrixXd::Zero(dim, dim);
    frame.basis(0, 0) = 1.0;
    frame.basis(0, n + 1) = -0.5 * jet.g(n + 1, n + 1);
    frame.basis(n + 1, n + 1) = 1.0;
    frame.basis.block(1, 1, n, n) = screen_coefficients(cholesky_lower(jet.g.block(1, 1, n, n)));
    frame.inverse = adapted_gram(n) * frame.basis.transpose() * jet.g;
    return frame;
}

Eigen::VectorXd project(const AdaptedFrame& frame, const Eigen::VectorXd& w, Part part)
{
    const Eigen::VectorXd c = frame.inverse * w;
    const int n = frame.n();
    switch (part) {
    case Part::Tperp: return c[0] * frame.basis.col(0);
    case Part::Screen: return frame.basis.block(0, 1, w.size(), n) * c.segment(1, n);
    case Part::Transversal: return c[n + 1] * frame.basis.col(n + 1);
    }
    return Eigen::VectorXd::Zero(w.size());
}

Eigen::MatrixXd frame_derivative(const Geometry& geo, const Point& p, const Eigen::VectorXd& w)
{
    const int n = geo.n();
    const int dim = geo.dim();
    const MetricJet jet = geo.jet(p, 1);

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim, dim);
    double df = 0.0;
    Eigen::MatrixXd dscreen = Eigen::MatrixXd::Zero(n, n);
    for (int c = 0; c < dim; ++c) {
        if (w[c] == 0.0) continue;
        df += w[c] * jet.dg[c](n + 1, n + 1);
        dscreen += w[c] * jet.dg[c].block(1, 1, n, n);
    }
    d(0, n + 1) = -0.5 * df;

    // Differential of the Cholesky factor: dL = L Phi(L^{-1} dG L^{-T}),
    // Phi = strict lower part plus half the diagonal. Then dC = -C dL^T C.
    const Eigen::MatrixXd lower = cholesky_lower(jet.g.block(1, 1, n, n));
    const Eigen::MatrixXd coeff = screen_coefficients(lower);
    const Eigen::MatrixXd inner = coeff.transpose() * dscreen * coeff;
    Eigen::MatrixXd phi = inner.triangularView<Eigen::StrictlyLower>();
    phi.diagonal() = 0.5 * inner.diagonal();
    const Eigen::MatrixXd dlower = lower * phi;
    d.block(1, 1, n, n) = -coeff * dlower.transpose() * coeff;
    return d;
}

Eigen::MatrixXd frame_covariant_derivative(const Geometry& geo, const Point& p, const Eigen::VectorXd& w)
{
    const AdaptedFrame frame = build_frame(geo, p);
    return frame_derivative(geo, p, w) + christoffel_at(geo, p).along(w) * frame.basis;
}

LorentzBlockElement connection_form(const Geometry& geo, const Point& p, const Eigen::VectorXd& w)
{
    const AdaptedFrame frame = build_frame(geo, p);
    const Eigen::MatrixXd nabla = frame_derivative(geo, p, w) + christoffel_at(geo, p).along(w) * frame.basis;
    return LorentzBlockElement::from_matrix(frame.inverse * nabla);
}

VectorField xi_field(const Geometry& geo)
{
    const int dim = geo.dim();
    return [dim](const Point&) { return Eigen::VectorXd::Unit(dim, 0); };
}

VectorField transversal_field(const Geometry& geo)
{
    return [&geo](const Point& q) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(geo.dim());
        v[0] = -0.5 * geo.f_at(q);
        v[geo.n() + 1] = 1.0;
        return v;
    };
}

VectorField screen_field(const Geometry& geo, int k)
{
    return [&geo, k](const Point& q) -> Eigen::VectorXd { return build_frame(geo, q).basis.col(1 + k); };
}

Eigen::VectorXd shape_operator(const Geometry& geo, const Point& p, const Eigen::VectorXd& w, double v_scale)
{
    const AdaptedFrame frame = build_frame(geo, p);
    const Eigen::VectorXd nabla_v = v_scale * frame_covariant_derivative(geo, p, w).col(geo.n() + 1);
    const Eigen::VectorXd tperp = project(frame, -nabla_v, Part::Tperp);
    const double scale = std::max(1.0, nabla_v.cwiseAbs().maxCoeff());
    if (tperp.cwiseAbs().maxCoeff() > kShapeTperpTol * scale)
        throw ConventionError("shape operator has a T-perp component of size " +
                              std::to_string(tperp.cwiseAbs().maxCoeff()));
    return project(frame, -nabla_v, Part::Screen);
}

Eigen::VectorXd screen_second_form(const Geometry& geo, const Point& p, const Eigen::VectorXd& w,
                                   const Eigen::VectorXd& y)
{
    const AdaptedFrame frame = build_frame(geo, p);
    const int n = geo.n();
    const Eigen::VectorXd comps = (frame.inverse * y).segment(1, n);
    const Eigen::MatrixXd nabla = frame_covariant_derivative(geo, p, w);
    const Eigen::VectorXd nabla_y = nabla.block(0, 1, geo.dim(), n) * comps;
    return project(frame, nabla_y, Part::Tperp);
}

ConnectionScalars connection_scalars(const Geometry& geo, const Point& p, const Eigen::VectorXd& w)
{
    const AdaptedFrame frame = build_frame(geo, p);
    const Eigen::MatrixXd nabla = frame_covariant_derivative(geo, p, w);
    const int n = geo.n();
    ConnectionScalars out;
    out.omega_t = (frame.inverse * nabla.col(n + 1))[n + 1];
    out.omega_perp = (frame.inverse * nabla.col(0))[0];
    return out;
}

Eigen::VectorXd star_nabla(const Geometry& geo, const Point& p, const Eigen::VectorXd& w, int k)
{
    const AdaptedFrame frame = build_frame(geo, p);
    return project(frame, frame_covariant_derivative(geo, p, w).col(1 + k), Part::Screen);
}

}  // namespace wh
