#pragma once

#include "wh/classify.hpp"
#include "wh/curvature.hpp"
#include "wh/transport.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wh {

/// Named residuals of one curvature criterion with its verdict at `tol`.
/// Residuals are relative to max(1, curvature size) unless noted.
struct CriterionReport {
    std::string name;
    bool verdict = false;
    double tol = 0.0;
    std::vector<std::pair<std::string, double>> residuals;
    std::vector<std::string> notes;

    void set(const std::string& key, double value);
    [[nodiscard]] double residual(const std::string& key) const;
};

/// Curvature data at the end of one sampled curve, with the frame transfer
/// M = E_y^{-1} tau E_x from base-frame to end-frame components.
struct CurveFrames {
    int index = 0;
    Point end;
    FrameCurvature curvature;
    CurvatureComponents comps;
    Eigen::MatrixXd transfer;
    Eigen::MatrixXd transfer_inv;

    /// tau^{-1} F tau in the base frame, for F given in the end frame.
    [[nodiscard]] LorentzBlockElement to_base(const LorentzBlockElement& f) const;
};

std::vector<CurveFrames> curve_frames(const Geometry& geo, const Point& base, const std::vector<CurveSample>& curves,
                                      int threads = 0);

/// Boost and translation-boost parts vanish: lambda, l_row, *R^t and the
/// R(U,V)V screen term at each point.
CriterionReport check_prop1(const Geometry& geo, const std::vector<Point>& points, double tol);

/// Type-3 criterion. `phi` (so(n) coordinates) is used for the transport
/// identity when given; otherwise it is fitted over all samples.
CriterionReport check_prop2(const Geometry& geo, const Point& base, const std::vector<CurveFrames>& frames,
                            double tol, const std::optional<Eigen::VectorXd>& phi = std::nullopt);
CriterionReport check_prop2(const Geometry& geo, const Point& base, const SampleOptions& opts, double tol);

/// Type-4 criterion. S2 is the common kernel of the sampled screen curvatures.
CriterionReport check_prop3(const Geometry& geo, const Point& base, const std::vector<CurveFrames>& frames,
                            const std::vector<HolonomySample>& samples, double tol);
CriterionReport check_prop3(const Geometry& geo, const Point& base, const SampleOptions& opts, double tol);

}  // namespace wh
