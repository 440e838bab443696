#include "wh/transport.hpp"

#include "wh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace wh {

namespace {

constexpr int kMaxClosureRounds = 10;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// d tau / dt = -Gamma(gamma'(t)) tau along one straight segment.
void transport_segment(const Geometry& geo, const Point& a, const Point& b, int steps_per_unit, Eigen::MatrixXd& tau)
{
    const Eigen::VectorXd vel = b - a;
    const int steps = std::max(1, static_cast<int>(std::ceil(steps_per_unit * vel.norm())));
    const double h = 1.0 / steps;
    auto rhs = [&](double t, const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
        return -christoffel_at(geo, a + t * vel).along(vel) * m;
    };
    for (int s = 0; s < steps; ++s) {
        const double t = s * h;
        const Eigen::MatrixXd k1 = rhs(t, tau);
        const Eigen::MatrixXd k2 = rhs(t + 0.5 * h, tau + 0.5 * h * k1);
        const Eigen::MatrixXd k3 = rhs(t + 0.5 * h, tau + 0.5 * h * k2);
        const Eigen::MatrixXd k4 = rhs(t + h, tau + h * k3);
        tau += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

}  // namespace

Curve::Curve(std::vector<Point> points) : points_(std::move(points))
{
    if (points_.size() < 2) throw DomainError("a curve needs at least two points");
    for (size_t k = 1; k < points_.size(); ++k) {
        if (points_[k].size() != points_[0].size()) throw DomainError("curve points have different dimensions");
        if ((points_[k] - points_[k - 1]).cwiseAbs().maxCoeff() == 0.0)
            throw DomainError("consecutive curve points coincide");
    }
}

Curve Curve::constant(const Point& p)
{
    Curve c;
    c.points_ = {p};
    return c;
}

Curve Curve::reversed() const
{
    Curve c;
    c.points_.assign(points_.rbegin(), points_.rend());
    return c;
}

Curve Curve::then(const Curve& next) const
{
    if ((next.start() - end()).cwiseAbs().maxCoeff() != 0.0) throw DomainError("curves do not join");
    Curve c;
    c.points_ = points_;
    c.points_.insert(c.points_.end(), next.points_.begin() + 1, next.points_.end());
    return c;
}

Eigen::MatrixXd transport_map(const Geometry& geo, const Curve& curve, int steps_per_unit)
{
    Eigen::MatrixXd tau = Eigen::MatrixXd::Identity(geo.dim(), geo.dim());
    const auto& pts = curve.points();
    for (size_t k = 1; k < pts.size(); ++k) transport_segment(geo, pts[k - 1], pts[k], steps_per_unit, tau);
    return tau;
}

Eigen::VectorXd transport_along(const Geometry& geo, const Curve& curve, const Eigen::VectorXd& v, int steps_per_unit)
{
    return transport_map(geo, curve, steps_per_unit) * v;
}

Curve random_curve(const Point& base, const SampleOptions& opts, int index)
{
    if (index == 0) return Curve::constant(base);
    std::mt19937_64 rng(splitmix64(opts.seed ^ splitmix64(static_cast<std::uint64_t>(index))));
    std::uniform_int_distribution<int> segs(opts.min_segments, opts.max_segments);
    std::uniform_real_distribution<double> coord(-opts.half_width, opts.half_width);
    const int count = segs(rng);
    std::vector<Point> pts{base};
    for (int s = 0; s < count; ++s) {
        Point q = base;
        for (int i = 0; i < q.size(); ++i) q[i] += coord(rng);
        pts.push_back(q);
    }
    return Curve(std::move(pts));
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn)
{
    if (count <= 0) return;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(count));
    auto guarded = [&](int k) {
        try {
            fn(k);
        } catch (...) {
            errors[static_cast<size_t>(k)] = std::current_exception();
        }
    };
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, count);
    if (threads == 1) {
        for (int k = 0; k < count; ++k) guarded(k);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (int k = t; k < count; k += threads) guarded(k);
            });
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<CurveSample> sample_curves(const Geometry& geo, const Point& base, const SampleOptions& opts)
{
    if (opts.n_curves < 0) throw DomainError("number of curves must be non-negative");
    std::vector<CurveSample> out(static_cast<size_t>(opts.n_curves + 1));
    parallel_for(opts.n_curves + 1, opts.threads, [&](int index) {
        CurveSample& s = out[static_cast<size_t>(index)];
        s.index = index;
        s.curve = random_curve(base, opts, index);
        s.tau = transport_map(geo, s.curve, opts.steps_per_unit);
    });
    return out;
}

std::vector<HolonomySample> holonomy_elements(const Geometry& geo, const Point& base,
                                              const std::vector<CurveSample>& curves, int threads)
{
    const int dim = geo.dim();
    const AdaptedFrame frame = build_frame(geo, base);
    std::vector<std::vector<HolonomySample>> per_curve(curves.size());
    parallel_for(static_cast<int>(curves.size()), threads, [&](int k) {
        const CurveSample& cs = curves[static_cast<size_t>(k)];
        const Eigen::MatrixXd tau_inv = cs.tau.partialPivLu().inverse();
        const RiemannTensor r = riemann_at(geo, cs.curve.end());
        const Eigen::MatrixXd moved = cs.tau * frame.basis;
        for (int alpha = 0; alpha < dim; ++alpha)
            for (int beta = alpha + 1; beta < dim; ++beta) {
                const Eigen::MatrixXd m =
                    frame.inverse * tau_inv * r.endomorphism(moved.col(alpha), moved.col(beta)) * moved;
                HolonomySample s;
                s.element = LorentzBlockElement::from_matrix(m);
                s.curve = cs.index;
                s.alpha = alpha;
                s.beta = beta;
                s.block_residual = LorentzBlockElement::block_residual(m);
                per_curve[static_cast<size_t>(k)].push_back(std::move(s));
            }
    });
    std::vector<HolonomySample> out;
    for (auto& v : per_curve) std::move(v.begin(), v.end(), std::back_inserter(out));
    return out;
}

std::vector<HolonomySample> sample_holonomy(const Geometry& geo, const Point& base, const SampleOptions& opts)
{
    return holonomy_elements(geo, base, sample_curves(geo, base, opts), opts.threads);
}

Eigen::MatrixXd AlgebraBasis::matrix() const
{
    Eigen::MatrixXd m(LorentzBlockElement::vector_dim(n), dim());
    for (int k = 0; k < dim(); ++k) m.col(k) = elements[static_cast<size_t>(k)].to_vector();
    return m;
}

Eigen::MatrixXd orthonormal_span(const Eigen::MatrixXd& columns, double tol)
{
    if (columns.cols() == 0) return Eigen::MatrixXd(columns.rows(), 0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return Eigen::MatrixXd(columns.rows(), 0);
    int rank = 0;
    while (rank < sv.size() && sv[rank] > tol * sv[0]) ++rank;
    return svd.matrixU().leftCols(rank);
}

AlgebraBasis lie_closure(const std::vector<LorentzBlockElement>& elements, double tol, int n)
{
    AlgebraBasis out;
    out.n = n >= 0 ? n : (elements.empty() ? 0 : elements.front().n());
    if (elements.empty()) {
        out.log.push_back("empty input");
        return out;
    }
    const int vdim = LorentzBlockElement::vector_dim(out.n);
    Eigen::MatrixXd input(vdim, static_cast<Eigen::Index>(elements.size()));
    for (size_t k = 0; k < elements.size(); ++k) {
        if (elements[k].n() != out.n) throw DomainError("elements of different sizes");
        input.col(static_cast<Eigen::Index>(k)) = elements[k].to_vector();
    }
    Eigen::MatrixXd q = orthonormal_span(input, tol);
    out.log.push_back("input: rank " + std::to_string(q.cols()) + " from " + std::to_string(elements.size()) +
                      " elements");

    out.converged = false;
    for (int round = 1; round <= kMaxClosureRounds; ++round) {
        if (q.cols() == vdim || q.cols() <= 1) {
            out.converged = true;
            break;
        }
        out.rounds = round;
        std::vector<LorentzBlockElement> current;
        for (int k = 0; k < q.cols(); ++k) current.push_back(LorentzBlockElement::from_vector(q.col(k), out.n));
        Eigen::MatrixXd stacked(vdim, q.cols() + q.cols() * (q.cols() - 1) / 2);
        stacked.leftCols(q.cols()) = q;
        int col = static_cast<int>(q.cols());
        for (size_t i = 0; i < current.size(); ++i)
            for (size_t j = i + 1; j < current.size(); ++j) stacked.col(col++) = bracket(current[i], current[j]).to_vector();
        const Eigen::MatrixXd next = orthonormal_span(stacked, tol);
        const auto added = next.cols() - q.cols();
        out.log.push_back("round " + std::to_string(round) + ": +" + std::to_string(added) + " (dim " +
                          std::to_string(next.cols()) + ")");
        // Keep the previous basis when nothing was added so closing is idempotent.
        if (added <= 0) {
            out.converged = true;
            break;
        }
        q = next;
    }
    if (!out.converged && q.cols() == vdim) out.converged = true;
    if (!out.converged) out.log.push_back("closure did not converge within " + std::to_string(kMaxClosureRounds) + " rounds");
    for (int k = 0; k < q.cols(); ++k) out.elements.push_back(LorentzBlockElement::from_vector(q.col(k), out.n));
    return out;
}

double span_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    if (a.cols() != b.cols()) return 1.0;
    if (a.cols() == 0) return 0.0;
    const Eigen::MatrixXd qa = orthonormal_span(a, 1e-12), qb = orthonormal_span(b, 1e-12);
    if (qa.cols() != qb.cols()) return 1.0;
    const Eigen::MatrixXd r1 = qb - qa * (qa.transpose() * qb);
    const Eigen::MatrixXd r2 = qa - qb * (qb.transpose() * qa);
    Eigen::JacobiSVD<Eigen::MatrixXd> s1(r1), s2(r2);
    return std::max(s1.singularValues()[0], s2.singularValues()[0]);
}

}  // namespace wh
