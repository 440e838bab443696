#include "wh/propositions.hpp"

#include "wh/errors.hpp"

#include <cmath>
#include <optional>

namespace wh {

namespace {

double mat_max(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd lstsq(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    if (a.cols() == 0) return Eigen::MatrixXd::Zero(0, b.cols());
    if (a.rows() == 0) return Eigen::MatrixXd::Zero(a.cols(), b.cols());
    return a.completeOrthogonalDecomposition().solve(b);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double tol)
{
    const auto cols = m.cols();
    if (m.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    int rank = 0;
    while (rank < svd.singularValues().size() && svd.singularValues()[rank] > tol) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

double global_scale(const std::vector<CurveFrames>& frames)
{
    double s = 1.0;
    for (const auto& f : frames) s = std::max(s, f.curvature.scale());
    return s;
}

const char* kSamplingNote = "conditions quantified over all curves are Monte-Carlo sampled; a fit on the sampled "
                            "region cannot certify a global section";

}  // namespace

void CriterionReport::set(const std::string& key, double value)
{
    for (auto& [k, v] : residuals)
        if (k == key) {
            v = value;
            return;
        }
    residuals.emplace_back(key, value);
}

double CriterionReport::residual(const std::string& key) const
{
    for (const auto& [k, v] : residuals)
        if (k == key) return v;
    throw DomainError("no residual named " + key);
}

LorentzBlockElement CurveFrames::to_base(const LorentzBlockElement& f) const
{
    return LorentzBlockElement::from_matrix(transfer_inv * f.to_matrix() * transfer);
}

std::vector<CurveFrames> curve_frames(const Geometry& geo, const Point& base, const std::vector<CurveSample>& curves,
                                      int threads)
{
    const AdaptedFrame bf = build_frame(geo, base);
    std::vector<std::optional<CurveFrames>> slots(curves.size());
    parallel_for(static_cast<int>(curves.size()), threads, [&](int k) {
        const CurveSample& cs = curves[static_cast<size_t>(k)];
        FrameCurvature fc(geo, cs.curve.end());
        CurvatureComponents comps = decompose_block(fc);
        const Eigen::MatrixXd transfer = fc.frame().inverse * cs.tau * bf.basis;
        Eigen::MatrixXd inv = transfer.partialPivLu().inverse();
        slots[static_cast<size_t>(k)] =
            CurveFrames{cs.index, cs.curve.end(), std::move(fc), std::move(comps), transfer, std::move(inv)};
    });
    std::vector<CurveFrames> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

CriterionReport check_prop1(const Geometry& geo, const std::vector<Point>& points, double tol)
{
    CriterionReport rep;
    rep.name = "prop1";
    rep.tol = tol;
    double lambda = 0.0, lrow = 0.0, star_rt = 0.0, r5uv = 0.0;
    for (const Point& p : points) {
        const FrameCurvature fc(geo, p);
        const CurvatureComponents c = decompose_block(fc);
        const double scale = std::max(1.0, fc.scale());
        lambda = std::max(lambda, std::abs(c.lambda) / scale);
        lrow = std::max(lrow, mat_max(c.l_row) / scale);
        const OperatorRoute route = operator_route(geo, p);
        const Eigen::MatrixXd& e = fc.frame().basis;
        star_rt = std::max(star_rt, mat_max(e.transpose() * route.star_rt * e) / scale);
        r5uv = std::max(r5uv, mat_max(route.r5uv) / scale);
    }
    rep.set("R4_lambda", lambda);
    rep.set("R5_l_row", lrow);
    rep.set("star_Rt", star_rt);
    rep.set("R5UV", r5uv);
    rep.verdict = lambda <= tol && lrow <= tol && star_rt <= tol && r5uv <= tol;
    rep.notes.push_back("evaluated at " + std::to_string(points.size()) + " points");
    return rep;
}

CriterionReport check_prop2(const Geometry& geo, const Point& base, const std::vector<CurveFrames>& frames, double tol,
                            const std::optional<Eigen::VectorXd>& phi)
{
    (void)base;
    const int n = geo.n();
    const int m = n * (n - 1) / 2;
    const double scale = global_scale(frames);
    CriterionReport rep;
    rep.name = "prop2";
    rep.tol = tol;

    double cond1 = 0.0, r21 = 0.0, r22 = 0.0, witness = 0.0;
    std::vector<Eigen::VectorXd> rows;  // so(n) coordinates of transported *R(V_y, X_y)
    std::vector<double> lhs;            // *R^t_y(V_y, X_y)
    for (const CurveFrames& cf : frames) {
        const CurvatureComponents& c = cf.comps;
        cond1 = std::max(cond1, std::abs(c.lambda) / scale);
        witness = std::max(witness, mat_max(c.l_row) / scale);

        // Pointwise phi_y from 2.1 (phi kills *R on screen pairs) and 2.2 (phi(P_i) = L_i).
        const int pairs = n * (n - 1) / 2;
        Eigen::MatrixXd a(n + pairs, m);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n + pairs);
        for (int i = 0; i < n; ++i) {
            a.row(i) = so_to_vector(c.p_map[i]).transpose();
            b[i] = c.l_row[i];
        }
        int r = n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) a.row(r++) = so_to_vector(c.rh(i, j)).transpose();
        const Eigen::VectorXd phi_y = lstsq(a, b);
        const Eigen::VectorXd res = (m == 0 ? Eigen::VectorXd(-b) : Eigen::VectorXd(a * phi_y - b));
        r22 = std::max(r22, mat_max(res.head(n)) / scale);
        r21 = std::max(r21, mat_max(res.tail(pairs)) / scale);

        for (int i = 0; i < n; ++i) {
            const LorentzBlockElement f = cf.curvature.on_basis(slots::V(n), slots::X(i));
            rows.push_back(so_to_vector(cf.to_base(f).A));
            lhs.push_back(f.a);
        }
    }

    Eigen::MatrixXd design(static_cast<Eigen::Index>(rows.size()), m);
    Eigen::VectorXd target(static_cast<Eigen::Index>(rows.size()));
    for (size_t k = 0; k < rows.size(); ++k) {
        design.row(static_cast<Eigen::Index>(k)) = rows[k].transpose();
        target[static_cast<Eigen::Index>(k)] = lhs[k];
    }
    const Eigen::VectorXd phi_x = phi ? *phi : Eigen::VectorXd(lstsq(design, target));
    const Eigen::VectorXd r24 = m == 0 ? Eigen::VectorXd(target) : Eigen::VectorXd(design * phi_x - target);

    rep.set("cond1_star_Rt_UV", cond1);
    rep.set("cond2_1_phi_on_screen_pairs", r21);
    rep.set("cond2_2_phi_fit", r22);
    rep.set("cond2_3_witness", witness);
    rep.set("cond2_4_transport", mat_max(r24) / scale);
    rep.verdict = cond1 <= tol && r21 <= tol && r22 <= tol && witness > tol && mat_max(r24) / scale <= tol;
    if (witness <= tol) rep.notes.push_back("condition 2.3 fails: *R^t(V,X) vanishes at all sampled points");
    rep.notes.push_back(phi ? "phi taken from the classifier" : "phi fitted over all sampled curves");
    rep.notes.push_back(kSamplingNote);
    return rep;
}

CriterionReport check_prop2(const Geometry& geo, const Point& base, const SampleOptions& opts, double tol)
{
    return check_prop2(geo, base, curve_frames(geo, base, sample_curves(geo, base, opts), opts.threads), tol);
}

CriterionReport check_prop3(const Geometry& geo, const Point& base, const std::vector<CurveFrames>& frames,
                            const std::vector<HolonomySample>& samples, double tol)
{
    (void)base;
    const int n = geo.n();
    const int m = n * (n - 1) / 2;
    const double scale = global_scale(frames);
    CriterionReport rep;
    rep.name = "prop3";
    rep.tol = tol;

    // Precondition: type 2 or 4 at every sampled point.
    double pre = 0.0;
    for (const auto& cf : frames) pre = std::max({pre, std::abs(cf.comps.lambda), mat_max(cf.comps.l_row)});
    rep.set("precondition_boost", pre / scale);

    // Candidate S2: common kernel of the transported screen curvatures.
    Eigen::MatrixXd stacked(static_cast<Eigen::Index>(samples.size()) * n, n);
    for (size_t k = 0; k < samples.size(); ++k)
        stacked.middleRows(static_cast<Eigen::Index>(k) * n, n) = samples[k].element.A;
    const Eigen::MatrixXd q2 = null_space(stacked, tol * scale);
    const int n2 = static_cast<int>(q2.cols());
    const Eigen::MatrixXd q1 = null_space(q2.transpose(), 0.5);
    rep.set("dim_S2", n2);
    if (n2 == 0 || n2 == n) {
        rep.notes.push_back(n2 == 0 ? "no common kernel: S2 is trivial"
                                    : "screen curvature vanishes on all samples: S2 = S, no psi to fit");
        rep.verdict = false;
        rep.notes.push_back(kSamplingNote);
        return rep;
    }
    double invariance = 0.0, kernel = 0.0;
    for (const auto& s : samples) {
        invariance = std::max(invariance, mat_max(q2.transpose() * s.element.A * q1));
        kernel = std::max(kernel, mat_max(s.element.A * q2));
    }
    rep.set("cond1_S1_invariant", invariance / scale);
    rep.set("cond1_S2_flat", kernel / scale);

    // S1, S2 transported into each end frame. Components along xi are dropped:
    // the screen connection acts on xi-perp modulo xi.
    double parallel = 0.0, r21 = 0.0, r22_zero = 0.0, r22_fit = 0.0;
    std::vector<Eigen::VectorXd> rows;
    std::vector<Eigen::VectorXd> lhs;
    auto screen_part = [n](const Eigen::MatrixXd& framecoords) { return framecoords.middleRows(1, n); };
    for (const CurveFrames& cf : frames) {
        Eigen::MatrixXd lift1 = Eigen::MatrixXd::Zero(n + 2, q1.cols()), lift2 = Eigen::MatrixXd::Zero(n + 2, n2);
        lift1.middleRows(1, n) = q1;
        lift2.middleRows(1, n) = q2;
        const Eigen::MatrixXd t1 = cf.transfer * lift1, t2 = cf.transfer * lift2;
        parallel = std::max({parallel, mat_max(t2.row(n + 1)), mat_max(t1.row(n + 1))});
        const Eigen::MatrixXd s1 = screen_part(t1), s2 = screen_part(t2);
        const CurvatureComponents& c = cf.comps;

        // 2.2 at y: T vanishes on S2 x S2 and T(X, Y) = psi_y(P(X)) . Y for X in S1.
        r22_zero = std::max(r22_zero, mat_max(s2.transpose() * c.t_sym * s2));
        const int pairs = n * (n - 1) / 2;
        Eigen::MatrixXd a(s1.cols() + pairs, m);
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(s1.cols() + pairs, n2);
        for (int j = 0; j < s1.cols(); ++j) {
            Eigen::MatrixXd pj = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i) pj += s1(i, j) * c.p_map[i];
            a.row(j) = so_to_vector(pj).transpose();
            b.row(j) = (s1.col(j).transpose() * c.t_sym * s2);
        }
        int r = static_cast<int>(s1.cols());
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) a.row(r++) = so_to_vector(c.rh(i, j)).transpose();
        const Eigen::MatrixXd psi_y = lstsq(a, b);
        const Eigen::MatrixXd res = m == 0 ? Eigen::MatrixXd(-b) : Eigen::MatrixXd(a * psi_y - b);
        r22_fit = std::max(r22_fit, mat_max(res.topRows(s1.cols())));
        r21 = std::max(r21, mat_max(res.bottomRows(pairs)));

        // 2.3: g(psi_y(*R_y(V_y, X_y)), tau Y) against psi_x of the transported, S1-projected *R.
        for (int j = 0; j < s1.cols(); ++j) {
            const LorentzBlockElement f = cf.curvature(FrameVector::basis(n, n + 1), FrameVector::make(0.0, s1.col(j), 0.0));
            const Eigen::MatrixXd a_base = cf.to_base(f).A;
            rows.push_back(so_to_vector(q1 * q1.transpose() * a_base * q1 * q1.transpose()));
            lhs.push_back((f.x.transpose() * s2).transpose());
        }
    }
    Eigen::MatrixXd design(static_cast<Eigen::Index>(rows.size()), m);
    Eigen::MatrixXd target(static_cast<Eigen::Index>(rows.size()), n2);
    for (size_t k = 0; k < rows.size(); ++k) {
        design.row(static_cast<Eigen::Index>(k)) = rows[k].transpose();
        target.row(static_cast<Eigen::Index>(k)) = lhs[k].transpose();
    }
    const Eigen::MatrixXd psi_x = lstsq(design, target);
    const Eigen::MatrixXd r23 = m == 0 ? target : Eigen::MatrixXd(design * psi_x - target);

    rep.set("cond1_S2_parallel", parallel);
    rep.set("cond2_1_psi_on_screen_pairs", r21 / scale);
    rep.set("cond2_2_T_on_S2", r22_zero / scale);
    rep.set("cond2_2_psi_fit", r22_fit / scale);
    rep.set("cond2_3_transport", mat_max(r23) / scale);
    rep.verdict = true;
    for (const auto& [k, v] : rep.residuals)
        if (k != "dim_S2" && v > tol) rep.verdict = false;
    rep.notes.push_back(kSamplingNote);
    return rep;
}

CriterionReport check_prop3(const Geometry& geo, const Point& base, const SampleOptions& opts, double tol)
{
    const auto curves = sample_curves(geo, base, opts);
    return check_prop3(geo, base, curve_frames(geo, base, curves, opts.threads),
                       holonomy_elements(geo, base, curves, opts.threads), tol);
}

}  // namespace wh
