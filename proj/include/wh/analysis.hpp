#pragma once

#include "wh/classify.hpp"
#include "wh/propositions.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wh {

inline constexpr int kSchemaVersion = 1;

/// (0, 1, ..., 1, 0): away from the symmetric origin.
Point default_point(int n);

/// Parses "c0,c1,...". Throws DomainError on a malformed list or wrong length.
Point parse_point(const std::string& text, int n);

/// `count` points: `center` first, then seeded uniform points in the box of
/// half-width `half_width` around it.
std::vector<Point> sample_points(const Point& center, int count, std::uint64_t seed, double half_width = 1.0);

struct AnalyzeOptions {
    std::optional<Point> point;
    int samples = 5;   // points for per-point components and Prop 1
    int curves = 64;   // random curves for holonomy and Props 2, 3
    std::uint64_t seed = 0;
    double tol = kSampledTol;
    int threads = 0;
    int steps_per_unit = kDefaultStepsPerUnit;
};

struct Analysis {
    Point base;
    std::vector<Point> points;
    std::vector<CurvatureComponents> components;
    std::vector<double> route_residuals;
    HolonomyReport holonomy;
    CriterionReport prop1, prop2, prop3;
    AnalyzeOptions options;
};

Analysis analyze(const Geometry& geo, const AnalyzeOptions& opts);

struct VerifyRow {
    std::string name;
    double residual = 0.0;
    double budget = 0.0;
    bool pass = false;
    std::string detail;  // error message for rows that could not be evaluated
};

struct VerifyOptions {
    int points = 10;
    std::uint64_t seed = 0;
    double half_width = 1.0;
    std::optional<Point> center;
};

/// Invariant suite: Bianchi, pair symmetry, reconstruction, route agreement,
/// duality, leaf identities, *R^t on screen pairs and the *R^t cross-check.
std::vector<VerifyRow> verify(const Geometry& geo, const VerifyOptions& opts);

using Json = nlohmann::ordered_json;

Json to_json(const Eigen::MatrixXd& m);
Json to_json(const CurvatureComponents& c);
Json to_json(const HolonomyReport& r);
Json to_json(const CriterionReport& r);
Json to_json(const std::vector<VerifyRow>& rows);

/// Full report; `verification` holds the given rows.
Json report_json(const Geometry& geo, const Analysis& a, const std::vector<VerifyRow>& rows);
Json decompose_json(const Geometry& geo, const Point& p);

std::string report_text(const Json& report);
std::string verify_text(const std::vector<VerifyRow>& rows);

}  // namespace wh
