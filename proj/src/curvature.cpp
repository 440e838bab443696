#include "wh/curvature.hpp"

#include "wh/errors.hpp"

#include <cmath>
#include <string>

namespace wh {

namespace {

constexpr double kBlockTol = 1e-8;

double mat_max(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Connection form of the adapted frame along its own basis field e_beta, at q.
LorentzBlockElement theta_field(const Geometry& geo, const Point& q, int beta)
{
    return connection_form(geo, q, build_frame(geo, q).basis.col(beta));
}

// Exterior derivative of omega_perp on coordinate pairs.
Eigen::MatrixXd star_rt_coordinates(const Geometry& geo, const Point& p, double h)
{
    const int dim = geo.dim();
    if (h <= 0.0) h = fd_step(p);
    // da(i, j) = d_i a_j
    Eigen::MatrixXd da(dim, dim);
    for (int i = 0; i < dim; ++i) {
        Point plus = p, minus = p;
        plus[i] += h;
        minus[i] -= h;
        for (int j = 0; j < dim; ++j) {
            const Eigen::VectorXd ej = Eigen::VectorXd::Unit(dim, j);
            da(i, j) = (connection_scalars(geo, plus, ej).omega_perp - connection_scalars(geo, minus, ej).omega_perp) /
                       (2 * h);
        }
    }
    return da - da.transpose();
}

}  // namespace

CurvatureComponents CurvatureComponents::zero(int n)
{
    CurvatureComponents c;
    c.n = n;
    c.r_h.assign(static_cast<size_t>(n * n), Eigen::MatrixXd::Zero(n, n));
    c.p_map.assign(static_cast<size_t>(n), Eigen::MatrixXd::Zero(n, n));
    c.t_sym = Eigen::MatrixXd::Zero(n, n);
    c.l_row = Eigen::VectorXd::Zero(n);
    return c;
}

double CurvatureComponents::max_abs() const
{
    double m = std::max(std::abs(lambda), mat_max(t_sym));
    m = std::max(m, mat_max(l_row));
    for (const auto& r : r_h) m = std::max(m, mat_max(r));
    for (const auto& r : p_map) m = std::max(m, mat_max(r));
    return m;
}

double max_difference(const CurvatureComponents& a, const CurvatureComponents& b)
{
    double m = std::max(std::abs(a.lambda - b.lambda), mat_max(a.t_sym - b.t_sym));
    m = std::max(m, mat_max(a.l_row - b.l_row));
    for (size_t k = 0; k < a.r_h.size(); ++k) m = std::max(m, mat_max(a.r_h[k] - b.r_h[k]));
    for (size_t k = 0; k < a.p_map.size(); ++k) m = std::max(m, mat_max(a.p_map[k] - b.p_map[k]));
    return m;
}

FrameCurvature::FrameCurvature(const Geometry& geo, const Point& p) : frame_(build_frame(geo, p))
{
    const int dim = geo.dim();
    const RiemannTensor r = riemann_at(geo, p);
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(static_cast<size_t>(dim * dim));
    for (int alpha = 0; alpha < dim; ++alpha)
        for (int beta = 0; beta < dim; ++beta) {
            mats.push_back(frame_.inverse * r.endomorphism(frame_.basis.col(alpha), frame_.basis.col(beta)) *
                           frame_.basis);
            scale_ = std::max(scale_, mat_max(mats.back()));
        }
    const double tol = kBlockTol * std::max(1.0, scale_);
    table_.reserve(mats.size());
    for (const auto& m : mats) {
        const double residual = LorentzBlockElement::block_residual(m);
        if (residual > tol)
            throw ConventionError("curvature endomorphism is not of block form (residual " + std::to_string(residual) +
                                  ")");
        table_.push_back(LorentzBlockElement::from_matrix(m));
    }
}

LorentzBlockElement FrameCurvature::operator()(const FrameVector& w1, const FrameVector& w2) const
{
    const int dim = n() + 2;
    LorentzBlockElement out = LorentzBlockElement::zero(n());
    for (int alpha = 0; alpha < dim; ++alpha) {
        if (w1.c[alpha] == 0.0) continue;
        for (int beta = 0; beta < dim; ++beta)
            if (w2.c[beta] != 0.0) out += (w1.c[alpha] * w2.c[beta]) * on_basis(alpha, beta);
    }
    return out;
}

LorentzBlockElement curvature_endomorphism(const Geometry& geo, const Point& p, const FrameVector& w1,
                                           const FrameVector& w2)
{
    return FrameCurvature(geo, p)(w1, w2);
}

CurvatureComponents decompose_block(const Geometry& geo, const Point& p) { return decompose_block(FrameCurvature(geo, p)); }

CurvatureComponents decompose_block(const FrameCurvature& fc)
{
    using namespace slots;
    const int n = fc.n();
    CurvatureComponents c = CurvatureComponents::zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.rh(i, j) = fc.on_basis(X(i), X(j)).A;
    for (int i = 0; i < n; ++i) {
        const LorentzBlockElement& vx = fc.on_basis(V(n), X(i));
        c.p_map[i] = vx.A;
        c.t_sym.row(i) = vx.x.transpose();
        c.l_row[i] = vx.a;
    }
    c.lambda = fc.on_basis(U, V(n)).a;
    return c;
}

LorentzBlockElement reconstruct_basis(const CurvatureComponents& c, int alpha, int beta)
{
    using namespace slots;
    const int n = c.n;
    if (alpha == beta) return LorentzBlockElement::zero(n);
    if (alpha > beta) return -1.0 * reconstruct_basis(c, beta, alpha);
    if (alpha == U) {
        if (beta != V(n)) return LorentzBlockElement::zero(n);
        return {c.lambda, -c.l_row, Eigen::MatrixXd::Zero(n, n)};
    }
    const int i = alpha - 1;
    if (beta == V(n)) return {-c.l_row[i], -c.t_sym.row(i).transpose(), -c.p_map[i]};
    const int j = beta - 1;
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) x[k] = c.p_map[k](i, j);
    return {0.0, x, c.rh(i, j)};
}

LorentzBlockElement reconstruct(const CurvatureComponents& c, const FrameVector& w1, const FrameVector& w2)
{
    const int dim = c.n + 2;
    LorentzBlockElement out = LorentzBlockElement::zero(c.n);
    for (int alpha = 0; alpha < dim; ++alpha) {
        if (w1.c[alpha] == 0.0) continue;
        for (int beta = 0; beta < dim; ++beta)
            if (w2.c[beta] != 0.0) out += (w1.c[alpha] * w2.c[beta]) * reconstruct_basis(c, alpha, beta);
    }
    return out;
}

OperatorRoute operator_route(const Geometry& geo, const Point& p, double h)
{
    using namespace slots;
    const int n = geo.n();
    const int dim = geo.dim();
    if (h <= 0.0) h = fd_step(p);
    const AdaptedFrame frame = build_frame(geo, p);

    std::vector<LorentzBlockElement> theta;
    for (int beta = 0; beta < dim; ++beta) theta.push_back(connection_form(geo, p, frame.basis.col(beta)));
    std::vector<Eigen::MatrixXd> theta_m;
    for (const auto& t : theta) theta_m.push_back(t.to_matrix());

    // e_alpha(Theta(e_beta)): derivative of the frame-field connection form.
    auto derivative = [&](int alpha, int beta) {
        const Eigen::VectorXd e = frame.basis.col(alpha);
        return (1.0 / (2 * h)) * (theta_field(geo, p + h * e, beta) - theta_field(geo, p - h * e, beta));
    };

    // Curvature of the adapted connection on frame fields:
    //   Omega(e_a, e_b) = e_a(Theta_b) - e_b(Theta_a) + [Theta_a, Theta_b] - Theta([e_a, e_b]).
    // Its A-part is d*omega + [*omega, *omega] (the screen curvature *R), its
    // x-part on screen pairs is the nabla *h difference, and on (X, V) the
    // nabla *h / *nabla_V *h difference.
    auto omega = [&](int alpha, int beta) {
        LorentzBlockElement out = derivative(alpha, beta) - derivative(beta, alpha) + bracket(theta[alpha], theta[beta]);
        for (int d = 0; d < dim; ++d) {
            const double coeff = theta_m[alpha](d, beta) - theta_m[beta](d, alpha);
            if (coeff != 0.0) out = out - coeff * theta[d];
        }
        return out;
    };

    OperatorRoute route;
    route.comps = CurvatureComponents::zero(n);
    route.p_star.assign(static_cast<size_t>(n), Eigen::MatrixXd::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const LorentzBlockElement o = omega(X(i), X(j));
            route.comps.rh(i, j) = o.A;
            route.comps.rh(j, i) = -o.A;
            for (int c = 0; c < n; ++c) {
                route.p_star[c](i, j) = o.x[c];
                route.p_star[c](j, i) = -o.x[c];
            }
        }
    for (int i = 0; i < n; ++i) {
        const LorentzBlockElement o = omega(V(n), X(i));
        route.comps.p_map[i] = o.A;
        route.comps.t_sym.row(i) = o.x.transpose();
    }
    // Screen part of R(U, V) V: the V column of the block matrix is (0, -x^T, -a).
    route.r5uv = -omega(U, V(n)).x;

    // Line curvature *R^t = d omega_perp, in coordinates, then read in the frame.
    route.star_rt = star_rt_coordinates(geo, p, h);
    route.comps.lambda = frame.xi().dot(route.star_rt * frame.nvec());
    for (int i = 0; i < n; ++i) route.comps.l_row[i] = frame.nvec().dot(route.star_rt * frame.basis.col(X(i)));
    return route;
}

double route_residual(const CurvatureComponents& block, const OperatorRoute& route)
{
    const int n = block.n;
    double m = max_difference(block, route.comps);
    for (int c = 0; c < n; ++c) m = std::max(m, mat_max(route.p_star[c] - block.p_map[c]));
    m = std::max(m, mat_max(route.r5uv - block.l_row));
    return m / std::max(1.0, block.max_abs());
}

double star_rt_at(const Geometry& geo, const Point& p, const FrameVector& w1, const FrameVector& w2, double h)
{
    const AdaptedFrame frame = build_frame(geo, p);
    const Eigen::MatrixXd rt = star_rt_coordinates(geo, p, h);
    return frame.to_coords(w1).dot(rt * frame.to_coords(w2));
}

}  // namespace wh
