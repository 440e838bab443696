#pragma once

#include "wh/frame.hpp"
#include "wh/lorentz_block.hpp"
#include "wh/tensor.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace wh {

/// Piecewise-linear curve through the given coordinate points. Each segment
/// is parametrized over [0, 1].
class Curve {
public:
    explicit Curve(std::vector<Point> points);
    /// Single point; transport along it is the identity.
    static Curve constant(const Point& p);

    [[nodiscard]] const std::vector<Point>& points() const { return points_; }
    [[nodiscard]] const Point& start() const { return points_.front(); }
    [[nodiscard]] const Point& end() const { return points_.back(); }
    [[nodiscard]] bool is_constant() const { return points_.size() == 1; }
    [[nodiscard]] Curve reversed() const;
    /// This curve followed by `next`, which must start where this one ends.
    [[nodiscard]] Curve then(const Curve& next) const;

private:
    Curve() = default;
    std::vector<Point> points_;
};

inline constexpr int kDefaultStepsPerUnit = 200;

/// Parallel transport matrix T_start -> T_end in coordinates.
Eigen::MatrixXd transport_map(const Geometry& geo, const Curve& curve, int steps_per_unit = kDefaultStepsPerUnit);
Eigen::VectorXd transport_along(const Geometry& geo, const Curve& curve, const Eigen::VectorXd& v,
                                int steps_per_unit = kDefaultStepsPerUnit);

struct SampleOptions {
    int n_curves = 64;
    std::uint64_t seed = 0;
    double half_width = 1.0;
    int min_segments = 2;
    int max_segments = 5;
    int steps_per_unit = kDefaultStepsPerUnit;
    int threads = 0;  // 0 = hardware concurrency
};

/// Random curve number `index` (1-based; 0 is the constant curve) from base.
Curve random_curve(const Point& base, const SampleOptions& opts, int index);

struct CurveSample {
    int index = 0;
    Curve curve = Curve::constant(Point());
    Eigen::MatrixXd tau;  // transport from base to curve.end()
};

/// The constant curve and `n_curves` random curves with their transport maps.
std::vector<CurveSample> sample_curves(const Geometry& geo, const Point& base, const SampleOptions& opts);

/// Runs fn(0..count-1) over `threads` workers (0 = hardware concurrency),
/// rethrowing the first exception by index.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

struct HolonomySample {
    LorentzBlockElement element;  // R^gamma(e_alpha, e_beta) in the base frame
    int curve = 0;                // 0 = constant curve
    int alpha = 0;
    int beta = 0;
    double block_residual = 0.0;
};

/// tau^{-1} R_y(tau W1, tau W2) tau for all adapted-frame pairs at base, for
/// the constant curve and `n_curves` random curves.
std::vector<HolonomySample> sample_holonomy(const Geometry& geo, const Point& base, const SampleOptions& opts);
std::vector<HolonomySample> holonomy_elements(const Geometry& geo, const Point& base,
                                              const std::vector<CurveSample>& curves, int threads = 0);

struct AlgebraBasis {
    int n = 0;
    std::vector<LorentzBlockElement> elements;  // orthonormal in the coordinate inner product
    std::vector<std::string> log;
    int rounds = 0;
    bool converged = true;

    [[nodiscard]] int dim() const { return static_cast<int>(elements.size()); }
    /// Columns are the coordinate vectors of the elements.
    [[nodiscard]] Eigen::MatrixXd matrix() const;
};

/// Smallest bracket-closed subspace containing the inputs. Rank decisions keep
/// singular values above tol * (largest singular value).
AlgebraBasis lie_closure(const std::vector<LorentzBlockElement>& elements, double tol, int n = -1);

/// Largest sine of the principal angles between two spans (1 if dimensions differ).
double span_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Orthonormal basis of the column span at relative tolerance.
Eigen::MatrixXd orthonormal_span(const Eigen::MatrixXd& columns, double tol);

}  // namespace wh
