#pragma once
/**
 * @file world.hpp
 * @brief Obstacle boundary curves, the world they live in, and the geometric
 *        queries the simulator needs (ray casting, nearest distance, validation).
 *
 * A boundary curve f : [0,1] -> R^2 is defined by its relative curvature
 * profile w(s), |w| <= 1, through  |f'| = v0,  f'' = (v0 w / r0) S f'.
 * Curves are realised as dense polylines obtained by exact per-step rotation
 * of the heading; the chord deviation of every segment is bounded by
 * `resolution * r0`.
 */

#include "obnav/geometry.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace obnav {

using CurvatureProfile = std::function<double(double)>;

struct CurveSample {
    Vec2 point;
    Vec2 tangent;  ///< unit vector along f'(s)
    double s{0.0};
    double w{0.0};
};

struct CurveBuildOptions {
    double resolution{1e-3};  ///< max chord deviation in units of r0
    bool closed{false};
    /// Build even when |w| > 1 somewhere. Such curves fail validate_world.
    bool allowCurvatureViolation{false};
};

class ObstacleCurve {
public:
    [[nodiscard]] const std::vector<CurveSample>& samples() const { return samples_; }
    [[nodiscard]] std::size_t segmentCount() const {
        return closed_ ? samples_.size() : samples_.size() - 1;
    }
    [[nodiscard]] const CurveSample& segmentStart(std::size_t i) const { return samples_[i]; }
    [[nodiscard]] const CurveSample& segmentEnd(std::size_t i) const {
        return samples_[(i + 1) % samples_.size()];
    }

    [[nodiscard]] bool closed() const { return closed_; }
    [[nodiscard]] double v0() const { return v0_; }
    [[nodiscard]] double r0() const { return r0_; }
    [[nodiscard]] double length() const { return v0_; }
    [[nodiscard]] double maxAbsCurvature() const { return maxAbsW_; }
    /// +1 for a counter-clockwise closed curve, -1 clockwise, 0 when open.
    [[nodiscard]] int orientation() const { return orientation_; }
    [[nodiscard]] Vec2 boxMin() const { return boxMin_; }
    [[nodiscard]] Vec2 boxMax() const { return boxMax_; }

    /// Unit tangent interpolated along segment i at fraction t in [0,1].
    [[nodiscard]] Vec2 tangentOn(std::size_t i, double t) const;
    [[nodiscard]] double paramOn(std::size_t i, double t) const;

    friend ObstacleCurve build_curve(const CurvatureProfile&, double, double, Vec2, Vec2,
                                     const CurveBuildOptions&);

private:
    std::vector<CurveSample> samples_;
    bool closed_{false};
    double v0_{0.0};
    double r0_{1.0};
    double maxAbsW_{0.0};
    int orientation_{0};
    Vec2 boxMin_;
    Vec2 boxMax_;
};

/// Integrates the curve ODE from (start_point, start_tangent).
/// Throws Error{CurvatureBoundViolated} if |w| > 1 on the grid (unless allowed),
/// Error{SelfIntersection} if the polyline crosses itself, and
/// Error{InvalidArgument} for a closed curve whose end misses its start.
ObstacleCurve build_curve(const CurvatureProfile& profile, double v0, double r0, Vec2 start_point,
                          Vec2 start_tangent, const CurveBuildOptions& options = {});

/// Circle of radius `radius` (>= r0 to respect the curvature bound).
ObstacleCurve make_circle(Vec2 center, double radius, double r0, double resolution = 1e-3);

struct World {
    std::vector<ObstacleCurve> obstacles;
    double r0{1.0};
    double v0{1.0};
    Vec2 start{-5.0, 0.0};  ///< agent start x(0); the target is the origin

    [[nodiscard]] double sensorRange() const { return 0.8 * r0; }
};

struct AttractionLine {
    Vec2 anchor;
    Vec2 direction;  ///< unit, points at the origin

    static AttractionLine fromStart(Vec2 start);
    /// Positive when `p` lies to the left of the direction of travel.
    [[nodiscard]] double signedOffset(Vec2 p) const { return cross(direction, p - anchor); }
    [[nodiscard]] double along(Vec2 p) const { return dot(direction, p - anchor); }
};

struct RayHit {
    Vec2 impact;
    double depth{0.0};
    Vec2 tangent;  ///< unit f' at the impact point (curve orientation)
    std::size_t obstacle{0};
    double s{0.0};
};

/// Nearest hit strictly closer than `max_range`.
std::optional<RayHit> ray_intersect(const World& world, Vec2 origin, Vec2 direction,
                                    double max_range);

struct NearestBoundary {
    double distance{std::numeric_limits<double>::infinity()};
    std::optional<std::size_t> obstacle;
    Vec2 point;
};

NearestBoundary nearest_boundary_distance(const World& world, Vec2 point);
double distance_to_curve(const ObstacleCurve& curve, Vec2 point);

struct PairSeparation {
    std::size_t a{0};
    std::size_t b{0};
    double separation{0.0};
    double hausdorff{0.0};
    bool pass{false};
};

struct RollingBallResult {
    std::size_t obstacle{0};
    double worstClearance{0.0};  ///< min over samples of dist(centre, curve) - r0
    double atS{0.0};
    bool pass{false};
};

struct ValidationReport {
    std::vector<PairSeparation> pairs;
    std::vector<RollingBallResult> rollingBall;
    std::vector<double> maxCurvature;  ///< per obstacle, max |w|
    double targetClearance{0.0};       ///< nearest boundary distance from the origin
    double startClearance{0.0};
    bool curvatureOk{true};
    bool separationOk{true};
    bool rollingBallOk{true};
    bool targetClearOk{true};
    bool startClearOk{true};

    [[nodiscard]] bool valid() const {
        return curvatureOk && separationOk && rollingBallOk && targetClearOk && startClearOk;
    }
};

ValidationReport validate_world(const World& world);

}  // namespace obnav
