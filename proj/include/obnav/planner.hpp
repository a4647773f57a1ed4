#pragma once
/**
 * @file planner.hpp
 * @brief Nominal trajectories for locking (circle - common tangent - circle)
 *        and unlocking (two tangent circles), plus offset measurements of the
 *        agent against a single segment.
 */

#include "obnav/agent.hpp"
#include "obnav/geometry.hpp"
#include "obnav/world.hpp"

#include <optional>
#include <vector>

namespace obnav {

struct Segment {
    enum class Kind { Arc, Line };
    Kind kind{Kind::Line};
    Vec2 start;
    double heading{0.0};  ///< heading at the start of the segment
    double length{0.0};   ///< path length
    /// Arcs: +R for counter-clockwise, -R for clockwise. Zero for lines.
    double signedRadius{0.0};

    [[nodiscard]] int turn() const { return signOf(signedRadius); }
    [[nodiscard]] double radius() const { return std::abs(signedRadius); }
    [[nodiscard]] double span() const { return kind == Kind::Arc ? length / radius() : 0.0; }
    [[nodiscard]] Vec2 center() const { return start + unitFromAngle(heading).perp() * signedRadius; }
    [[nodiscard]] Vec2 pointAt(double s) const;
    [[nodiscard]] double headingAt(double s) const;
    [[nodiscard]] Vec2 end() const { return pointAt(length); }
    [[nodiscard]] double endHeading() const { return headingAt(length); }

    static Segment arc(Vec2 start, double heading, double signedRadius, double span);
    static Segment line(Vec2 start, double heading, double length);
};

/// Local frame attached to an obstacle point: x along the oriented tangent,
/// y along the outward normal.
struct LocalFrame {
    Vec2 origin;
    Vec2 xAxis;
    Vec2 yAxis;

    [[nodiscard]] Vec2 toLocal(Vec2 p) const { return {dot(p - origin, xAxis), dot(p - origin, yAxis)}; }
    [[nodiscard]] Vec2 toWorld(Vec2 p) const { return origin + xAxis * p.x + yAxis * p.y; }
};

struct NominalTrajectory {
    std::vector<Segment> segments;
    LocalFrame frame;
    double speed{1.0};

    [[nodiscard]] double totalLength() const;
    [[nodiscard]] double totalTime() const { return totalLength() / speed; }
    /// Index of the segment active at plan time t (the last one after the end).
    [[nodiscard]] std::size_t segmentAtTime(double t) const;
    [[nodiscard]] double segmentStartTime(std::size_t i) const;
    [[nodiscard]] Vec2 pointAtTime(double t) const;
    [[nodiscard]] double headingAtTime(double t) const;
    /// Largest endpoint gap between consecutive segments.
    [[nodiscard]] double maxPositionGap() const;
    [[nodiscard]] double maxHeadingGap() const;
    [[nodiscard]] double minArcRadius() const;
};

struct Pose {
    Vec2 position;
    double heading{0.0};
};

struct LockingRequest {
    Pose start;
    Vec2 impact;    ///< frozen impact point f_p
    Vec2 tangent;   ///< unit tangent at f_p, oriented along the direction of travel
    Vec2 outward;   ///< unit outward normal at f_p (toward the agent's side)
    double standoff{0.06};      ///< d0, length
    double turnRadius{0.2302};  ///< (1 + eps) r_a
    double speed{1.0};
};

/// Shortest circle-tangent-circle path to f_p + d0 n with heading along the
/// tangent, among those that never drop below d0/2 from the local tangent line
/// (or below the starting height, if that is lower).
/// Throws Error{NoTangentExists} when no candidate qualifies.
NominalTrajectory plan_locking(const LockingRequest& request);

/// Turn signs (+1 counter-clockwise) of the two arcs of a locking plan.
std::pair<int, int> locking_turns(const NominalTrajectory& plan);

struct UnlockingRequest {
    Pose start;
    AttractionLine line;
    int awayTurn{1};  ///< turn sign that steers away from the obstacle
    double turnRadius{0.2302};
    double speed{1.0};
};

/// Two externally tangent arcs ending on the line with heading along it; the
/// first arc turns away from the obstacle when that is possible.
NominalTrajectory plan_unlocking(const UnlockingRequest& request);

/// Closed-form unlocking centre of the second circle in the local frame where the
/// agent moves along +y, +x points away from the obstacle and the line direction
/// makes angle theta with +x.
Vec2 unlocking_second_center(double theta, double r);

struct Offsets {
    double Delta{0.0};  ///< nondimensional offset (units of r0)
    double delta{0.0};  ///< heading error, rad
};

/// Radial offset |x - c|/r0 - R/r0 and heading error against the local tangent.
Offsets offsets_vs_arc(const AgentState& agent, const Segment& arc, double r0);
/// Signed perpendicular offset (left positive) / r0 and heading error.
Offsets offsets_vs_line(const AgentState& agent, Vec2 linePoint, double lineHeading, double r0);

}  // namespace obnav
