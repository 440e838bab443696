#pragma once

#include "wh/expr.hpp"

#include <Eigen/Dense>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wh {

/// A point of the chart: coordinates x0..x{n+1}.
using Point = Eigen::VectorXd;

/// Walker metric 2 dx0 dx{n+1} + g_ij dx^i dx^j + f (dx{n+1})^2 in one chart.
///
/// `n` is the screen dimension; the manifold has dimension n+2. `gij` is the
/// full symmetric n x n array (entry (a,b) belongs to coordinates x{a+1}, x{b+1}).
struct MetricSpec {
    int n = 0;
    std::vector<std::vector<Expr>> gij;
    Expr f;
    std::string f_text;
    std::map<std::string, int> aliases;

    [[nodiscard]] int dim() const { return n + 2; }

    /// Builds and validates a spec from already parsed pieces. An empty `gij`
    /// means the identity screen metric.
    static MetricSpec make(int n, Expr f, std::vector<std::vector<Expr>> gij = {});
};

/// Parse the line-oriented `key = value` metric document:
///
///     n = 2
///     f = "x1^2 + x2^2"
///     g_1_1 = "1 + x2^2"      # optional, 1 <= i <= j <= n
///     aliases = u=x0, v=x3    # optional; u and v are always available
///
/// Throws ParseError/SymbolError for bad expressions and SpecError for
/// violated Walker-form invariants.
MetricSpec parse_metric_spec(std::string_view document);

/// Read and parse a spec file.
MetricSpec load_metric_spec(const std::string& path);

/// Throws DomainError unless `p` has n+2 finite entries.
void validate_point(const MetricSpec& spec, const Point& p);

/// Canonical text form that parse_metric_spec accepts.
std::string to_document(const MetricSpec& spec);

}  // namespace wh
