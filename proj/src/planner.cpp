#include "obnav/planner.hpp"

#include "obnav/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace obnav {

namespace {

/// Angle swept turning from heading `from` to heading `to` in direction `turn`, in [0, 2pi).
double sweep(double from, double to, int turn) {
    double a = std::fmod(static_cast<double>(turn) * (to - from), kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a > kTwoPi - 1e-10) a = 0.0;
    return a;
}

double lowestHeight(const NominalTrajectory& plan, const LocalFrame& frame) {
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& seg : plan.segments) {
        const int n = seg.kind == Segment::Kind::Arc ? 64 : 2;
        for (int k = 0; k <= n; ++k) {
            const double s = seg.length * k / n;
            lowest = std::min(lowest, frame.toLocal(seg.pointAt(s)).y);
        }
    }
    return lowest;
}

}  // namespace

Segment Segment::arc(Vec2 start, double heading, double signedRadius, double span) {
    return {Kind::Arc, start, heading, std::abs(signedRadius) * span, signedRadius};
}

Segment Segment::line(Vec2 start, double heading, double length) {
    return {Kind::Line, start, heading, length, 0.0};
}

Vec2 Segment::pointAt(double s) const {
    if (kind == Kind::Line) return start + unitFromAngle(heading) * s;
    return center() - unitFromAngle(headingAt(s)).perp() * signedRadius;
}

double Segment::headingAt(double s) const {
    if (kind == Kind::Line) return heading;
    return heading + s / signedRadius;
}

double NominalTrajectory::totalLength() const {
    double total = 0.0;
    for (const auto& seg : segments) total += seg.length;
    return total;
}

std::size_t NominalTrajectory::segmentAtTime(double t) const {
    double s = t * speed;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (s < segments[i].length) return i;
        s -= segments[i].length;
    }
    return segments.empty() ? 0 : segments.size() - 1;
}

double NominalTrajectory::segmentStartTime(std::size_t i) const {
    double s = 0.0;
    for (std::size_t k = 0; k < i && k < segments.size(); ++k) s += segments[k].length;
    return s / speed;
}

Vec2 NominalTrajectory::pointAtTime(double t) const {
    const std::size_t i = segmentAtTime(t);
    return segments[i].pointAt(std::min(t - segmentStartTime(i), segments[i].length / speed) * speed);
}

double NominalTrajectory::headingAtTime(double t) const {
    const std::size_t i = segmentAtTime(t);
    return segments[i].headingAt(std::min(t - segmentStartTime(i), segments[i].length / speed) * speed);
}

double NominalTrajectory::maxPositionGap() const {
    double gap = 0.0;
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        gap = std::max(gap, (segments[i].end() - segments[i + 1].start).norm());
    }
    return gap;
}

double NominalTrajectory::maxHeadingGap() const {
    double gap = 0.0;
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        gap = std::max(gap, std::abs(wrapAngle(segments[i].endHeading() - segments[i + 1].heading)));
    }
    return gap;
}

double NominalTrajectory::minArcRadius() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& seg : segments) {
        if (seg.kind == Segment::Kind::Arc) r = std::min(r, seg.radius());
    }
    return r;
}

NominalTrajectory plan_locking(const LockingRequest& req) {
    const double r = req.turnRadius;
    const LocalFrame frame{req.impact, req.tangent, req.outward};
    const Vec2 goal = req.impact + req.outward * req.standoff;
    const double goalHeading = req.tangent.angle();
    const double h0 = req.start.heading;
    const double floor = std::min(frame.toLocal(req.start.position).y, req.standoff / 2.0) - 1e-9;

    std::optional<NominalTrajectory> best;
    double bestLength = std::numeric_limits<double>::infinity();
    for (int s1 : {1, -1}) {
        for (int s2 : {1, -1}) {
            const Vec2 c1 = req.start.position + unitFromAngle(h0).perp() * (s1 * r);
            const Vec2 c2 = goal + unitFromAngle(goalHeading).perp() * (s2 * r);
            const Vec2 D = c2 - c1;
            const double dist = D.norm();
            double lineHeading = h0;
            if (dist > 1e-12) {
                const double sinBeta = (s1 - s2) * r / dist;
                if (std::abs(sinBeta) > 1.0) continue;
                lineHeading = D.angle() + std::asin(sinBeta);
            } else if (s1 != s2) {
                continue;
            }
            const Vec2 u = unitFromAngle(lineHeading);
            const Vec2 p1 = c1 - u.perp() * (s1 * r);
            const Vec2 p2 = c2 - u.perp() * (s2 * r);
            const double straight = std::max(0.0, dot(p2 - p1, u));

            NominalTrajectory plan;
            plan.frame = frame;
            plan.speed = req.speed;
            plan.segments.push_back(Segment::arc(req.start.position, h0, s1 * r, sweep(h0, lineHeading, s1)));
            plan.segments.push_back(Segment::line(p1, lineHeading, straight));
            plan.segments.push_back(Segment::arc(p2, lineHeading, s2 * r, sweep(lineHeading, goalHeading, s2)));

            const double length = plan.totalLength();
            if (length >= bestLength) continue;
            if (lowestHeight(plan, frame) < floor) continue;
            bestLength = length;
            best = std::move(plan);
        }
    }
    if (!best) throw Error(ErrorKind::NoTangentExists, "no admissible circle-line-circle path");
    return *best;
}

std::pair<int, int> locking_turns(const NominalTrajectory& plan) {
    return {plan.segments.front().turn(), plan.segments.back().turn()};
}

NominalTrajectory plan_unlocking(const UnlockingRequest& req) {
    const double r = req.turnRadius;
    const Vec2 dir = req.line.direction;
    const double lineHeading = dir.angle();
    const double h0 = req.start.heading;

    struct Candidate {
        NominalTrajectory plan;
        double length;
        double progress;
    };
    std::optional<Candidate> best;

    for (int s1 : {req.awayTurn, -req.awayTurn}) {
        const int s2 = -s1;
        const Vec2 c1 = req.start.position + unitFromAngle(h0).perp() * (s1 * r);
        const double o1 = req.line.signedOffset(c1);
        const double a1 = req.line.along(c1);
        const double o2 = s2 * r;
        const double disc = 4.0 * r * r - (o2 - o1) * (o2 - o1);
        if (disc < 0.0) continue;
        for (double sgn : {1.0, -1.0}) {
            const double a2 = a1 + sgn * std::sqrt(disc);
            const Vec2 c2 = req.line.anchor + dir * a2 + dir.perp() * o2;
            const Vec2 touch = (c1 + c2) * 0.5;
            const double touchHeading = (touch - c1).angle() + s1 * kPi / 2.0;

            NominalTrajectory plan;
            plan.speed = req.speed;
            plan.frame = {req.start.position, unitFromAngle(h0 - s1 * kPi / 2.0), unitFromAngle(h0)};
            plan.segments.push_back(Segment::arc(req.start.position, h0, s1 * r, sweep(h0, touchHeading, s1)));
            plan.segments.push_back(
                Segment::arc(plan.segments.front().end(), touchHeading, s2 * r, sweep(touchHeading, lineHeading, s2)));
            const double length = plan.totalLength();
            const double progress = req.line.along(plan.segments.back().end());
            const bool better = !best || length < best->length - 1e-9 ||
                                (std::abs(length - best->length) <= 1e-9 && progress > best->progress);
            if (better) best = Candidate{std::move(plan), length, progress};
        }
        if (best) break;  // the away-first family had a solution
    }
    if (!best) throw Error(ErrorKind::NoTangentExists, "no pair of tangent circles reaches the line");
    return best->plan;
}

Vec2 unlocking_second_center(double theta, double r) {
    const double lambda = r * (std::cos(theta) + std::sqrt((1.0 - std::sin(theta)) * (3.0 + std::sin(theta))));
    return {lambda * std::cos(theta) - r * std::sin(theta), lambda * std::sin(theta) + r * std::cos(theta)};
}

Offsets offsets_vs_arc(const AgentState& agent, const Segment& arc, double r0) {
    const Vec2 rel = agent.x - arc.center();
    const double nominal = rel.angle() + arc.turn() * kPi / 2.0;
    return {(rel.norm() - arc.radius()) / r0, wrapAngle(agent.heading() - nominal)};
}

Offsets offsets_vs_line(const AgentState& agent, Vec2 linePoint, double lineHeading, double r0) {
    const Vec2 dir = unitFromAngle(lineHeading);
    return {cross(dir, agent.x - linePoint) / r0, wrapAngle(agent.heading() - lineHeading)};
}

}  // namespace obnav
