#include "wh/analysis.hpp"

#include "wh/errors.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace wh {

namespace {

double mat_max(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double frob(const std::vector<Eigen::MatrixXd>& ms)
{
    double s = 0.0;
    for (const auto& m : ms) s += m.squaredNorm();
    return std::sqrt(s);
}

Json vec_json(const Eigen::VectorXd& v)
{
    Json out = Json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

// Running maximum of one verify row; points that cannot be evaluated are
// counted separately by the caller.
struct Row {
    std::string name;
    double budget;
    double worst = 0.0;
    void take(double r) { worst = std::max(worst, r); }
};

}  // namespace

Point default_point(int n)
{
    Point p = Point::Ones(n + 2);
    p[0] = 0.0;
    p[n + 1] = 0.0;
    return p;
}

Point parse_point(const std::string& text, int n)
{
    std::vector<double> xs;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            throw DomainError("point: cannot read coordinate '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw DomainError("point: cannot read coordinate '" + item + "'");
        xs.push_back(x);
    }
    if (static_cast<int>(xs.size()) != n + 2)
        throw DomainError("point: expected " + std::to_string(n + 2) + " coordinates, got " + std::to_string(xs.size()));
    return Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

std::vector<Point> sample_points(const Point& center, int count, std::uint64_t seed, double half_width)
{
    std::vector<Point> out;
    if (count <= 0) return out;
    out.push_back(center);
    std::mt19937_64 rng(seed ^ 0xA5A5A5A5DEADBEEFULL);
    std::uniform_real_distribution<double> coord(-half_width, half_width);
    for (int k = 1; k < count; ++k) {
        Point p = center;
        for (int i = 0; i < p.size(); ++i) p[i] += coord(rng);
        out.push_back(p);
    }
    return out;
}

Analysis analyze(const Geometry& geo, const AnalyzeOptions& opts)
{
    if (opts.samples < 1) throw DomainError("samples must be at least 1");
    if (opts.curves < 0) throw DomainError("curves must be non-negative");
    if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
    Analysis a;
    a.options = opts;
    a.base = opts.point ? *opts.point : default_point(geo.n());
    validate_point(geo.spec(), a.base);
    a.points = sample_points(a.base, opts.samples, opts.seed);
    for (const Point& p : a.points) {
        const CurvatureComponents c = decompose_block(geo, p);
        a.route_residuals.push_back(route_residual(c, operator_route(geo, p)));
        a.components.push_back(c);
    }

    SampleOptions so;
    so.n_curves = opts.curves;
    so.seed = opts.seed;
    so.steps_per_unit = opts.steps_per_unit;
    so.threads = opts.threads;
    const auto curves = sample_curves(geo, a.base, so);
    const auto samples = holonomy_elements(geo, a.base, curves, opts.threads);
    const auto frames = curve_frames(geo, a.base, curves, opts.threads);
    std::vector<LorentzBlockElement> elements;
    for (const auto& s : samples) elements.push_back(s.element);
    a.holonomy = classify_elements(elements, geo.n(), opts.tol);

    a.prop1 = check_prop1(geo, a.points, opts.tol);
    a.prop2 = check_prop2(geo, a.base, frames, opts.tol, a.holonomy.phi);
    a.prop3 = check_prop3(geo, a.base, frames, samples, opts.tol);
    return a;
}

std::vector<VerifyRow> verify(const Geometry& geo, const VerifyOptions& opts)
{
    const int n = geo.n(), d = n + 2;
    const Point center = opts.center ? *opts.center : default_point(n);
    validate_point(geo.spec(), center);
    const auto points = sample_points(center, opts.points, opts.seed, opts.half_width);

    Row bianchi{"first_bianchi", 1e-9}, pair{"pair_symmetry", 1e-8}, recon{"reconstruct_block", 1e-8},
        route{"route_agreement", 1e-6}, duality{"duality_shape_second_form", 1e-7}, leaf_h{"leaf_second_form", 1e-8},
        leaf_a{"leaf_star_shape", 1e-8}, rs2{"star_Rt_screen_pairs", 1e-7}, rst{"star_Rt_cross_check", 1e-6};
    int degenerate = 0;
    std::string degenerate_detail;
    const Eigen::MatrixXd gram = adapted_gram(n);

    for (const Point& p : points) {
        try {
            const FrameCurvature fc(geo, p);
            const AdaptedFrame& fr = fc.frame();
            const double scale = std::max(1.0, fc.scale());
            const RiemannTensor r = riemann_at(geo, p);
            const double rscale = std::max(1.0, r.max_abs());
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k) {
                        const Eigen::VectorXd ei = Eigen::VectorXd::Unit(d, i), ej = Eigen::VectorXd::Unit(d, j),
                                              ek = Eigen::VectorXd::Unit(d, k);
                        const Eigen::VectorXd cyc =
                            r.endomorphism(ei, ej) * ek + r.endomorphism(ej, ek) * ei + r.endomorphism(ek, ei) * ej;
                        bianchi.take(mat_max(cyc) / rscale);
                    }

            std::vector<Eigen::MatrixXd> mats;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) mats.push_back(fc.on_basis(i, j).to_matrix());
            auto low = [&](int l, int k, int i, int j) { return gram.row(l).dot(mats[static_cast<size_t>(i * d + j)].col(k)); };
            for (int l = 0; l < d; ++l)
                for (int k = 0; k < d; ++k)
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j) pair.take(std::abs(low(l, k, i, j) - low(i, j, l, k)) / scale);

            const CurvatureComponents c = decompose_block(fc);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const LorentzBlockElement diff = reconstruct_basis(c, i, j) - fc.on_basis(i, j);
                    recon.take(mat_max(diff.to_vector()) / scale);
                    rst.take(std::abs(star_rt_at(geo, p, FrameVector::basis(n, i), FrameVector::basis(n, j)) -
                                      fc.on_basis(i, j).a) /
                             scale);
                }
            route.take(route_residual(c, operator_route(geo, p)));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    rs2.take(std::abs(star_rt_at(geo, p, FrameVector::basis(n, 1 + i), FrameVector::basis(n, 1 + j))) /
                             scale);

            // g(*h(W, Y), N) = g(A_N W, Y) for W in T, Y in S.
            const Eigen::VectorXd gn = fr.g * fr.nvec();
            for (int w = 0; w <= n; ++w) {
                const Eigen::VectorXd wv = fr.basis.col(w);
                const Eigen::VectorXd aw = shape_operator(geo, p, wv);
                for (int j = 0; j < n; ++j) {
                    const Eigen::VectorXd y = fr.basis.col(1 + j);
                    const double lhs = screen_second_form(geo, p, wv, y).dot(gn);
                    const double rhs = aw.dot(fr.g * y);
                    duality.take(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
                }
                // Leaves v = const: no transversal part of nabla_W on leaf frame fields,
                // and nabla_W xi stays in the null line.
                const Eigen::MatrixXd nab = frame_covariant_derivative(geo, p, wv);
                const double nscale = std::max(1.0, mat_max(nab));
                for (int b = 0; b <= n; ++b) leaf_h.take(mat_max(project(fr, nab.col(b), Part::Transversal)) / nscale);
                leaf_a.take(mat_max(project(fr, nab.col(0), Part::Screen)) / nscale);
                leaf_a.take(mat_max(project(fr, nab.col(0), Part::Transversal)) / nscale);
            }
        } catch (const DegenerateScreenError& e) {
            if (degenerate++ == 0) degenerate_detail = e.what();
        }
    }

    std::vector<VerifyRow> rows;
    VerifyRow screen{"screen_positive_definite", static_cast<double>(degenerate), 0.0, degenerate == 0, degenerate_detail};
    if (degenerate > 0)
        screen.detail = std::to_string(degenerate) + " of " + std::to_string(points.size()) +
                        " points degenerate: " + degenerate_detail;
    rows.push_back(screen);
    for (const Row* r : {&bianchi, &pair, &recon, &route, &duality, &leaf_h, &leaf_a, &rs2, &rst})
        rows.push_back({r->name, r->worst, r->budget, r->worst <= r->budget, ""});
    return rows;
}

Json to_json(const Eigen::MatrixXd& m)
{
    Json out = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

Json to_json(const CurvatureComponents& c)
{
    Json rh = Json::array();
    for (int i = 0; i < c.n; ++i) {
        Json row = Json::array();
        for (int j = 0; j < c.n; ++j) row.push_back(to_json(c.rh(i, j)));
        rh.push_back(std::move(row));
    }
    Json p = Json::array();
    for (const auto& m : c.p_map) p.push_back(to_json(m));
    Json out;
    out["r_h"] = std::move(rh);
    out["p_map"] = std::move(p);
    out["t_sym"] = to_json(c.t_sym);
    out["lambda"] = c.lambda;
    out["l_row"] = vec_json(c.l_row);
    return out;
}

Json to_json(const HolonomyReport& r)
{
    Json out;
    if (r.type == HolonomyType::Indeterminate)
        out["type"] = nullptr;
    else
        out["type"] = static_cast<int>(r.type);
    out["label"] = to_string(r.type);
    out["reason"] = r.reason;
    out["n"] = r.n;
    out["algebra_dim"] = r.algebra_dim;
    out["orthogonal_part_dim"] = r.h_basis.size();
    Json hb = Json::array();
    for (const auto& m : r.h_basis) hb.push_back(to_json(m));
    out["orthogonal_part_basis"] = std::move(hb);
    out["derived_dim"] = r.h_prime_dim;
    out["center_dim"] = r.center_dim;
    out["phi"] = r.phi ? vec_json(*r.phi) : Json(nullptr);
    out["n1"] = r.n1;
    out["n2"] = r.n2;
    out["psi"] = r.psi ? to_json(*r.psi) : Json(nullptr);
    out["split"] = r.split ? to_json(*r.split) : Json(nullptr);
    out["weakly_irreducible"] = r.weakly_irreducible;
    Json res = Json::object();
    for (const auto& [k, v] : r.residuals) res[k] = v;
    out["residuals"] = std::move(res);
    return out;
}

Json to_json(const CriterionReport& r)
{
    Json out;
    out["name"] = r.name;
    out["verdict"] = r.verdict;
    out["tol"] = r.tol;
    Json res = Json::object();
    for (const auto& [k, v] : r.residuals) res[k] = v;
    out["residuals"] = std::move(res);
    out["notes"] = r.notes;
    return out;
}

Json to_json(const std::vector<VerifyRow>& rows)
{
    Json out = Json::array();
    for (const auto& r : rows) {
        Json row;
        row["name"] = r.name;
        row["residual"] = r.residual;
        row["budget"] = r.budget;
        row["pass"] = r.pass;
        row["detail"] = r.detail;
        out.push_back(std::move(row));
    }
    return out;
}

Json report_json(const Geometry& geo, const Analysis& a, const std::vector<VerifyRow>& rows)
{
    const MetricSpec& spec = geo.spec();
    Json out;
    out["schema_version"] = kSchemaVersion;

    Json s;
    s["n"] = spec.n;
    s["f"] = to_string(spec.f);
    Json g = Json::array();
    for (int i = 0; i < spec.n; ++i) {
        Json row = Json::array();
        for (int j = 0; j < spec.n; ++j) row.push_back(to_string(spec.gij[i][j]));
        g.push_back(std::move(row));
    }
    s["g"] = std::move(g);
    s["document"] = to_document(spec);
    out["spec"] = std::move(s);

    Json pts = Json::array();
    for (const auto& p : a.points) pts.push_back(vec_json(p));
    out["points"] = std::move(pts);

    Json comps = Json::array();
    for (size_t k = 0; k < a.components.size(); ++k) {
        const CurvatureComponents& c = a.components[k];
        Json row;
        row["r_h"] = frob(c.r_h);
        row["p_map"] = frob(c.p_map);
        row["t_sym"] = c.t_sym.norm();
        row["lambda"] = std::abs(c.lambda);
        row["l_row"] = c.l_row.norm();
        row["route_residual"] = a.route_residuals[k];
        comps.push_back(std::move(row));
    }
    out["components"] = std::move(comps);
    out["holonomy"] = to_json(a.holonomy);

    Json props;
    props["prop1"] = to_json(a.prop1);
    props["prop2"] = to_json(a.prop2);
    props["prop3"] = to_json(a.prop3);
    out["propositions"] = std::move(props);
    out["verification"] = to_json(rows);

    Json prov;
    prov["version"] = WH_VERSION;
    prov["seed"] = a.options.seed;
    prov["tol"] = a.options.tol;
    prov["samples"] = a.options.samples;
    prov["curves"] = a.options.curves;
    prov["steps_per_unit"] = a.options.steps_per_unit;
    prov["base_point"] = vec_json(a.base);
    prov["holonomy_elements"] = (a.options.curves + 1) * (spec.n + 2) * (spec.n + 1) / 2;
    out["provenance"] = std::move(prov);
    return out;
}

Json decompose_json(const Geometry& geo, const Point& p)
{
    validate_point(geo.spec(), p);
    const CurvatureComponents c = decompose_block(geo, p);
    Json out = to_json(c);
    out["route_residual"] = route_residual(c, operator_route(geo, p));
    out["point"] = vec_json(p);
    return out;
}

std::string report_text(const Json& report)
{
    std::ostringstream out;
    out << std::setprecision(6);
    const Json& h = report["holonomy"];
    out << "spec: n = " << report["spec"]["n"].get<int>() << ", f = " << report["spec"]["f"].get<std::string>() << "\n";
    out << "holonomy type: " << h["label"].get<std::string>();
    if (!h["reason"].get<std::string>().empty()) out << " (" << h["reason"].get<std::string>() << ")";
    out << "\n";
    out << "  algebra dim " << h["algebra_dim"].get<int>() << ", orthogonal part dim "
        << h["orthogonal_part_dim"].get<int>() << ", weakly irreducible "
        << (h["weakly_irreducible"].get<bool>() ? "yes" : "no") << "\n";
    for (const char* key : {"prop1", "prop2", "prop3"}) {
        const Json& p = report["propositions"][key];
        out << key << ": " << (p["verdict"].get<bool>() ? "true" : "false") << "\n";
        for (const auto& [k, v] : p["residuals"].items()) out << "  " << k << " = " << v.get<double>() << "\n";
    }
    out << "verification:\n";
    for (const auto& row : report["verification"])
        out << "  " << (row["pass"].get<bool>() ? "pass" : "FAIL") << "  " << row["name"].get<std::string>() << " "
            << row["residual"].get<double>() << " (budget " << row["budget"].get<double>() << ")\n";
    return out.str();
}

std::string verify_text(const std::vector<VerifyRow>& rows)
{
    std::ostringstream out;
    out << std::left << std::setw(28) << "check" << std::setw(14) << "residual" << std::setw(10) << "budget"
        << "result\n";
    for (const auto& r : rows) {
        std::ostringstream res, bud;
        res << std::setprecision(3) << r.residual;
        bud << std::setprecision(1) << r.budget;
        out << std::setw(28) << r.name << std::setw(14) << res.str() << std::setw(10) << bud.str()
            << (r.pass ? "pass" : "FAIL");
        if (!r.detail.empty()) out << "  " << r.detail;
        out << "\n";
    }
    return out.str();
}

}  // namespace wh
