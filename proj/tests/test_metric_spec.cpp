#include "doctest.h"

#include "wh/errors.hpp"
#include "wh/metric_spec.hpp"

using namespace wh;

TEST_CASE("parse_metric_spec: identity screen by default")
{
    const MetricSpec spec = parse_metric_spec("n = 2\nf = \"x1^2 + x2^2\"\n# g defaults to identity\n");
    CHECK(spec.n == 2);
    CHECK(spec.dim() == 4);
    CHECK(spec.gij[0][0].is_one());
    CHECK(spec.gij[1][1].is_one());
    CHECK(spec.gij[0][1].is_zero());
    CHECK(spec.gij[1][0].is_zero());
    CHECK(spec.f_text == "x1^2 + x2^2");
}

TEST_CASE("parse_metric_spec: flat spec")
{
    const MetricSpec spec = parse_metric_spec("n = 2\nf = \"0\"\n");
    CHECK(spec.f.is_zero());
}

TEST_CASE("parse_metric_spec: screen entries complete symmetrically")
{
    const MetricSpec spec = parse_metric_spec(R"(
n = 3   # screen dimension
f = "x1*x4"
g_1_2 = "0.1*x4"
g_3_3 = "2 + x1^2"
)");
    CHECK(to_string(spec.gij[1][0]) == "0.1*x4");
    CHECK(spec.gij[0][1].same_as(spec.gij[1][0]));
    CHECK(to_string(spec.gij[2][2]) == "2 + x1^2");
}

TEST_CASE("parse_metric_spec: aliases")
{
    const MetricSpec spec = parse_metric_spec("n = 2\nf = \"u*v + w^2\"\naliases = w=x1\n");
    CHECK(to_string(spec.f) == "x0*x3 + x1^2");
    CHECK(spec.aliases.at("w") == 1);
    CHECK_THROWS_AS(parse_metric_spec("n = 2\nf = \"0\"\naliases = sin=x1\n"), SpecError);
    CHECK_THROWS_AS(parse_metric_spec("n = 2\nf = \"0\"\naliases = w=x9\n"), SpecError);
}

TEST_CASE("parse_metric_spec: invariant violations")
{
    CHECK_THROWS_AS(parse_metric_spec("n = 2\nf = \"0\"\ng_1_1 = \"x0\"\n"), SpecError);
    CHECK_THROWS_AS(parse_metric_spec("n = 2\nf = \"0\"\ng_1_1 = \"1 + u^2\"\n"), SpecError);
    CHECK_THROWS_AS(parse_metric_spec("n = 2\ng_1_1 = \"1\"\n"), SpecError);
    CHECK_THROWS_AS(parse_metric_spec("f = \"0\"\n"), SpecError);
    CHECK_THROWS_AS(parse_metric_spec("n = 0\nf = \"0\"\n"), SpecError);
    CHECK_THROWS_AS(parse_metric_spec("n = two\nf = \"0\"\n"), SpecError);
    CHECK_THROWS_AS(parse_metric_spec("n = 2\nf = \"0\"\ng_1_2 = \"x1\"\ng_2_1 = \"x2\"\n"), SpecError);
    CHECK_THROWS_AS(parse_metric_spec("n = 2\nf = \"0\"\ng_1_3 = \"1\"\n"), SpecError);
    CHECK_THROWS_AS(parse_metric_spec("n = 2\nf = \"0\"\nh = \"1\"\n"), SpecError);
    CHECK_THROWS_AS(parse_metric_spec("n = 2\nf = \"0\"\nf = \"1\"\n"), SpecError);
    CHECK_THROWS_AS(parse_metric_spec("n = 2\nf = \"x1 +\"\n"), ParseError);
    CHECK_THROWS_AS(parse_metric_spec("n = 2\nf = \"x5\"\n"), SymbolError);
}

TEST_CASE("parse_metric_spec: matching transpose entries are accepted")
{
    const MetricSpec spec = parse_metric_spec("n = 2\nf = \"0\"\ng_1_2 = \"x1\"\ng_2_1 = \"x1\"\n");
    CHECK(to_string(spec.gij[0][1]) == "x1");
}

TEST_CASE("to_document round trips")
{
    const MetricSpec spec = parse_metric_spec("n = 2\nf = \"x0*x1 - x2^2\"\ng_1_1 = \"2 + sin(x3)\"\n");
    const MetricSpec back = parse_metric_spec(to_document(spec));
    CHECK(back.f.same_as(spec.f));
    CHECK(back.gij[0][0].same_as(spec.gij[0][0]));
    CHECK(back.gij[1][1].is_one());
}

TEST_CASE("validate_point")
{
    const MetricSpec spec = parse_metric_spec("n = 2\nf = \"0\"\n");
    CHECK_NOTHROW(validate_point(spec, Point::Zero(4)));
    CHECK_THROWS_AS(validate_point(spec, Point::Zero(3)), DomainError);
    Point bad = Point::Zero(4);
    bad[2] = std::nan("");
    CHECK_THROWS_AS(validate_point(spec, bad), DomainError);
}
