#include "obnav/world.hpp"

#include "obnav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace obnav {

namespace {

constexpr int kProfileProbe = 2048;
constexpr double kMaxStepOverR0 = 0.05;

double pointSegmentDistance(Vec2 p, Vec2 a, Vec2 b, Vec2* closest = nullptr) {
    const Vec2 e = b - a;
    const double len2 = e.squaredNorm();
    double t = len2 > 0.0 ? dot(p - a, e) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 q = a + e * t;
    if (closest != nullptr) *closest = q;
    return (p - q).norm();
}

bool segmentsCross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

double segmentSegmentDistance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    if (segmentsCross(a, b, c, d)) return 0.0;
    return std::min({pointSegmentDistance(a, c, d), pointSegmentDistance(b, c, d),
                     pointSegmentDistance(c, a, b), pointSegmentDistance(d, a, b)});
}

bool boxesOverlap(Vec2 amin, Vec2 amax, Vec2 bmin, Vec2 bmax, double pad) {
    return amin.x - pad <= bmax.x && bmin.x - pad <= amax.x && amin.y - pad <= bmax.y &&
           bmin.y - pad <= amax.y;
}

double boxDistance(Vec2 p, Vec2 bmin, Vec2 bmax) {
    const double dx = std::max({bmin.x - p.x, 0.0, p.x - bmax.x});
    const double dy = std::max({bmin.y - p.y, 0.0, p.y - bmax.y});
    return std::hypot(dx, dy);
}

void checkSelfIntersection(const ObstacleCurve& curve) {
    const std::size_t n = curve.segmentCount();
    const auto& smp = curve.samples();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = curve.segmentStart(i).point;
        const Vec2 b = curve.segmentEnd(i).point;
        const Vec2 lo{std::min(a.x, b.x), std::min(a.y, b.y)};
        const Vec2 hi{std::max(a.x, b.x), std::max(a.y, b.y)};
        for (std::size_t j = i + 2; j < n; ++j) {
            if (curve.closed() && i == 0 && j == n - 1) continue;
            const Vec2 c = curve.segmentStart(j).point;
            const Vec2 d = curve.segmentEnd(j).point;
            if (std::max(c.x, d.x) < lo.x || std::min(c.x, d.x) > hi.x ||
                std::max(c.y, d.y) < lo.y || std::min(c.y, d.y) > hi.y) {
                continue;
            }
            if (segmentsCross(a, b, c, d)) {
                std::ostringstream msg;
                msg << "segments " << i << " and " << j << " cross (s=" << smp[i].s << ", "
                    << smp[j].s << ")";
                throw Error(ErrorKind::SelfIntersection, msg.str());
            }
        }
    }
}

/// Outward unit normals to test for the rolling-ball condition.
std::vector<Vec2> outwardNormals(const ObstacleCurve& curve, const CurveSample& sample) {
    const Vec2 left = sample.tangent.perp();
    if (curve.orientation() > 0) return {-left};
    if (curve.orientation() < 0) return {left};
    return {left, -left};
}

}  // namespace

Vec2 ObstacleCurve::tangentOn(std::size_t i, double t) const {
    const Vec2 a = segmentStart(i).tangent;
    const Vec2 b = segmentEnd(i).tangent;
    return (a * (1.0 - t) + b * t).normalized();
}

double ObstacleCurve::paramOn(std::size_t i, double t) const {
    const double sa = segmentStart(i).s;
    double sb = segmentEnd(i).s;
    if (closed_ && i + 1 == samples_.size()) sb = 1.0;
    return sa + (sb - sa) * t;
}

ObstacleCurve build_curve(const CurvatureProfile& profile, double v0, double r0, Vec2 start_point,
                          Vec2 start_tangent, const CurveBuildOptions& options) {
    if (!(v0 > 0.0) || !(r0 > 0.0) || !(options.resolution > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "v0, r0 and resolution must be positive");
    }
    if (start_tangent.norm() == 0.0) {
        throw Error(ErrorKind::InvalidArgument, "start tangent must be non-zero");
    }

    double maxW = 0.0;
    for (int k = 0; k <= kProfileProbe; ++k) {
        const double s = static_cast<double>(k) / kProfileProbe;
        const double w = profile(s);
        if (!std::isfinite(w)) throw Error(ErrorKind::InvalidArgument, "non-finite curvature");
        maxW = std::max(maxW, std::abs(w));
    }
    if (maxW > 1.0 + 1e-12 && !options.allowCurvatureViolation) {
        std::ostringstream msg;
        msg << "max |w| = " << maxW << " exceeds 1";
        throw Error(ErrorKind::CurvatureBoundViolated, msg.str());
    }

    // Sagitta of a step of length h at curvature k is k h^2 / 8.
    const double kappa = maxW / r0;
    double h = kMaxStepOverR0 * r0;
    if (kappa > 0.0) h = std::min(h, std::sqrt(8.0 * options.resolution * r0 / kappa));
    const auto steps = static_cast<std::size_t>(std::max(8.0, std::ceil(v0 / h)));
    const double ds = 1.0 / static_cast<double>(steps);

    ObstacleCurve curve;
    curve.v0_ = v0;
    curve.r0_ = r0;
    curve.maxAbsW_ = maxW;
    curve.closed_ = options.closed;

    double heading = start_tangent.angle();
    Vec2 p = start_point;
    curve.samples_.reserve(steps + 1);
    curve.samples_.push_back({p, unitFromAngle(heading), 0.0, profile(0.0)});
    for (std::size_t k = 0; k < steps; ++k) {
        const double s = static_cast<double>(k) * ds;
        const double w = profile(s + 0.5 * ds);
        const double len = v0 * ds;
        const double turn = w * len / r0;
        // Exact arc of constant curvature over the step.
        const double chord = std::abs(turn) > 1e-12 ? 2.0 * std::sin(0.5 * turn) / turn * len : len;
        p += unitFromAngle(heading + 0.5 * turn) * chord;
        heading += turn;
        const double sNext = static_cast<double>(k + 1) * ds;
        curve.samples_.push_back({p, unitFromAngle(heading), sNext, profile(sNext)});
    }

    if (options.closed) {
        const double gap = (curve.samples_.back().point - start_point).norm();
        const double tol = std::max(1e-2 * r0, 10.0 * options.resolution * r0);
        if (gap > tol) {
            std::ostringstream msg;
            msg << "closed curve ends " << gap << " away from its start";
            throw Error(ErrorKind::InvalidArgument, msg.str());
        }
        curve.samples_.pop_back();
        double area = 0.0;
        const auto& smp = curve.samples_;
        for (std::size_t i = 0; i < smp.size(); ++i) {
            area += cross(smp[i].point, smp[(i + 1) % smp.size()].point);
        }
        curve.orientation_ = area >= 0.0 ? 1 : -1;
    }

    curve.boxMin_ = curve.boxMax_ = curve.samples_.front().point;
    for (const auto& smp : curve.samples_) {
        curve.boxMin_ = {std::min(curve.boxMin_.x, smp.point.x), std::min(curve.boxMin_.y, smp.point.y)};
        curve.boxMax_ = {std::max(curve.boxMax_.x, smp.point.x), std::max(curve.boxMax_.y, smp.point.y)};
    }

    checkSelfIntersection(curve);
    return curve;
}

ObstacleCurve make_circle(Vec2 center, double radius, double r0, double resolution) {
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
    const double w = r0 / radius;
    CurveBuildOptions opts;
    opts.resolution = resolution;
    opts.closed = true;
    opts.allowCurvatureViolation = radius < r0;
    return build_curve([w](double) { return w; }, kTwoPi * radius, r0, center + Vec2{radius, 0.0},
                       Vec2{0.0, 1.0}, opts);
}

AttractionLine AttractionLine::fromStart(Vec2 start) {
    const double n = start.norm();
    if (n == 0.0) throw Error(ErrorKind::InvalidArgument, "agent starts on the target");
    return {start, -start / n};
}

std::optional<RayHit> ray_intersect(const World& world, Vec2 origin, Vec2 direction,
                                    double max_range) {
    std::optional<RayHit> best;
    double bestT = max_range;
    const Vec2 tip = origin + direction * max_range;
    const Vec2 rayMin{std::min(origin.x, tip.x), std::min(origin.y, tip.y)};
    const Vec2 rayMax{std::max(origin.x, tip.x), std::max(origin.y, tip.y)};

    for (std::size_t id = 0; id < world.obstacles.size(); ++id) {
        const ObstacleCurve& curve = world.obstacles[id];
        if (!boxesOverlap(rayMin, rayMax, curve.boxMin(), curve.boxMax(), 1e-9)) continue;
        const std::size_t n = curve.segmentCount();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 a = curve.segmentStart(i).point;
            const Vec2 e = curve.segmentEnd(i).point - a;
            const double den = cross(direction, e);
            if (std::abs(den) < 1e-300) continue;
            const Vec2 ao = a - origin;
            const double t = cross(ao, e) / den;
            const double u = cross(ao, direction) / den;
            if (u < 0.0 || u > 1.0 || t <= 0.0 || t >= bestT) continue;
            bestT = t;
            RayHit hit;
            hit.impact = origin + direction * t;
            hit.depth = t;
            hit.tangent = curve.tangentOn(i, u);
            hit.obstacle = id;
            hit.s = curve.paramOn(i, u);
            best = hit;
        }
    }
    return best;
}

double distance_to_curve(const ObstacleCurve& curve, Vec2 point) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = curve.segmentCount();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, pointSegmentDistance(point, curve.segmentStart(i).point,
                                                   curve.segmentEnd(i).point));
    }
    return best;
}

NearestBoundary nearest_boundary_distance(const World& world, Vec2 point) {
    NearestBoundary out;
    for (std::size_t id = 0; id < world.obstacles.size(); ++id) {
        const ObstacleCurve& curve = world.obstacles[id];
        if (boxDistance(point, curve.boxMin(), curve.boxMax()) >= out.distance) continue;
        const std::size_t n = curve.segmentCount();
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 q;
            const double d = pointSegmentDistance(point, curve.segmentStart(i).point,
                                                  curve.segmentEnd(i).point, &q);
            if (d < out.distance) {
                out.distance = d;
                out.obstacle = id;
                out.point = q;
            }
        }
    }
    return out;
}

ValidationReport validate_world(const World& world) {
    ValidationReport report;
    const double r0 = world.r0;
    const double dm = world.sensorRange();
    const auto& obs = world.obstacles;

    for (const auto& curve : obs) {
        report.maxCurvature.push_back(curve.maxAbsCurvature());
        if (curve.maxAbsCurvature() > 1.0 + 1e-12) report.curvatureOk = false;
    }

    for (std::size_t a = 0; a < obs.size(); ++a) {
        for (std::size_t b = a + 1; b < obs.size(); ++b) {
            PairSeparation pair{a, b, std::numeric_limits<double>::infinity(), 0.0, false};
            for (std::size_t i = 0; i < obs[a].segmentCount(); ++i) {
                for (std::size_t j = 0; j < obs[b].segmentCount(); ++j) {
                    pair.separation = std::min(
                        pair.separation,
                        segmentSegmentDistance(obs[a].segmentStart(i).point, obs[a].segmentEnd(i).point,
                                               obs[b].segmentStart(j).point, obs[b].segmentEnd(j).point));
                }
            }
            double hab = 0.0;
            double hba = 0.0;
            for (const auto& smp : obs[a].samples()) hab = std::max(hab, distance_to_curve(obs[b], smp.point));
            for (const auto& smp : obs[b].samples()) hba = std::max(hba, distance_to_curve(obs[a], smp.point));
            pair.hausdorff = std::max(hab, hba);
            pair.pass = pair.separation >= 1.6 * r0;
            if (!pair.pass) report.separationOk = false;
            report.pairs.push_back(pair);
        }
    }

    for (std::size_t id = 0; id < obs.size(); ++id) {
        const ObstacleCurve& curve = obs[id];
        RollingBallResult rb{id, std::numeric_limits<double>::infinity(), 0.0, false};
        for (const auto& smp : curve.samples()) {
            for (const Vec2& n : outwardNormals(curve, smp)) {
                const double clearance = distance_to_curve(curve, smp.point + n * r0) - r0;
                if (clearance < rb.worstClearance) {
                    rb.worstClearance = clearance;
                    rb.atS = smp.s;
                }
            }
        }
        // Chords cut inside the ball by at most their sagitta.
        const double tol = 2e-3 * r0;
        rb.pass = rb.worstClearance >= -tol;
        if (!rb.pass) report.rollingBallOk = false;
        report.rollingBall.push_back(rb);
    }

    report.targetClearance = nearest_boundary_distance(world, Vec2{}).distance;
    report.startClearance = nearest_boundary_distance(world, world.start).distance;
    report.targetClearOk = report.targetClearance >= dm;
    report.startClearOk = report.startClearance >= dm;
    return report;
}

}  // namespace obnav
