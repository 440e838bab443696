#include "wh/analysis.hpp"
#include "wh/errors.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string dump(const wh::Json& j) { return j.dump(); }

wh::Point point_or_default(const wh::Geometry& geo, const std::optional<Eigen::VectorXd>& p)
{
    const wh::Point out = p ? *p : wh::default_point(geo.n());
    wh::validate_point(geo.spec(), out);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Walker metric curvature decomposition and holonomy classification";

    auto base = py::register_exception<wh::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<wh::ParseError>(m, "ParseError", base.ptr());
    py::register_exception<wh::SpecError>(m, "SpecError", base.ptr());
    py::register_exception<wh::DomainError>(m, "DomainError", base.ptr());
    py::register_exception<wh::DegenerateScreenError>(m, "DegenerateScreenError", base.ptr());
    py::register_exception<wh::ConventionError>(m, "ConventionError", base.ptr());

    py::class_<wh::Geometry>(m, "Geometry")
        .def(py::init([](const std::string& doc) { return wh::Geometry(wh::parse_metric_spec(doc)); }),
             py::arg("document"))
        .def_static("load", [](const std::string& path) { return wh::Geometry(wh::load_metric_spec(path)); })
        .def_property_readonly("n", &wh::Geometry::n)
        .def_property_readonly("dim", &wh::Geometry::dim)
        .def_property_readonly("document", [](const wh::Geometry& g) { return wh::to_document(g.spec()); })
        .def("metric", [](const wh::Geometry& g, const Eigen::VectorXd& p) { return wh::metric_at(g, p); })
        .def("christoffel",
             [](const wh::Geometry& g, const Eigen::VectorXd& p) {
                 const wh::Christoffel c = wh::christoffel_at(g, p);
                 const int d = c.dim();
                 std::vector<Eigen::MatrixXd> out;  // out[k](i, j) = Gamma^k_ij
                 for (int k = 0; k < d; ++k) {
                     Eigen::MatrixXd m(d, d);
                     for (int i = 0; i < d; ++i)
                         for (int j = 0; j < d; ++j) m(i, j) = c(k, i, j);
                     out.push_back(m);
                 }
                 return out;
             })
        .def("transport",
             [](const wh::Geometry& g, const std::vector<Eigen::VectorXd>& points, int steps) {
                 return wh::transport_map(g, wh::Curve(points), steps);
             },
             py::arg("points"), py::arg("steps_per_unit") = wh::kDefaultStepsPerUnit);

    m.def("default_point", &wh::default_point, py::arg("n"));

    m.def(
        "_decompose",
        [](const wh::Geometry& g, const std::optional<Eigen::VectorXd>& p) {
            return dump(wh::decompose_json(g, point_or_default(g, p)));
        },
        py::arg("geometry"), py::arg("point") = py::none());

    m.def(
        "_analyze",
        [](const wh::Geometry& g, const std::optional<Eigen::VectorXd>& p, int samples, int curves,
           std::uint64_t seed, std::optional<double> tol, int threads) {
            wh::AnalyzeOptions o;
            o.point = point_or_default(g, p);
            o.samples = samples;
            o.curves = curves;
            o.seed = seed;
            o.tol = tol ? *tol : wh::default_tolerance(wh::kSampledTol);
            o.threads = threads;
            wh::Analysis a;
            {
                py::gil_scoped_release release;
                a = wh::analyze(g, o);
            }
            wh::VerifyOptions vo;
            vo.points = samples;
            vo.seed = seed;
            vo.center = a.base;
            return dump(wh::report_json(g, a, wh::verify(g, vo)));
        },
        py::arg("geometry"), py::arg("point") = py::none(), py::arg("samples") = 5, py::arg("curves") = 64,
        py::arg("seed") = 0, py::arg("tol") = py::none(), py::arg("threads") = 0);

    m.def(
        "_verify",
        [](const wh::Geometry& g, int points, std::uint64_t seed) {
            wh::VerifyOptions vo;
            vo.points = points;
            vo.seed = seed;
            return dump(wh::to_json(wh::verify(g, vo)));
        },
        py::arg("geometry"), py::arg("points") = 10, py::arg("seed") = 0);

    m.attr("__version__") = WH_VERSION;
    m.attr("SCHEMA_VERSION") = wh::kSchemaVersion;
}
