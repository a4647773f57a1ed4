#include "obnav/errors.hpp"
#include "obnav/planner.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace obnav;

namespace {

constexpr double kR = 1.151 / 5.0;

LockingRequest wallRequest(Vec2 start, double heading) {
    LockingRequest req;
    req.start = {start, heading};
    req.impact = {0.0, 0.0};
    req.tangent = {1.0, 0.0};
    req.outward = {0.0, 1.0};
    req.standoff = 0.06;
    req.turnRadius = kR;
    return req;
}

}  // namespace

TEST(Locking, ReachesGoalPoseWithContinuity) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> x(-0.6, 0.0), y(0.2, 0.8), h(-1.2, 0.3);
    for (int k = 0; k < 200; ++k) {
        const LockingRequest req = wallRequest({x(rng), y(rng)}, h(rng));
        const NominalTrajectory plan = plan_locking(req);
        ASSERT_EQ(plan.segments.size(), 3u);
        const Segment& last = plan.segments.back();
        EXPECT_NEAR(last.end().x, 0.0, 1e-9);
        EXPECT_NEAR(last.end().y, 0.06, 1e-9);
        EXPECT_NEAR(std::abs(wrapAngle(last.endHeading())), 0.0, 1e-9);
        EXPECT_LE(plan.maxPositionGap(), 1e-9);
        EXPECT_LE(plan.maxHeadingGap(), 1e-9);
        EXPECT_NEAR(plan.minArcRadius(), kR, 1e-15);
        EXPECT_EQ(plan.segments[1].kind, Segment::Kind::Line);
    }
}

TEST(Locking, StraightAheadNeedsNoTurning) {
    // Start on the goal line already heading along the tangent.
    const LockingRequest req = wallRequest({-1.0, 0.06}, 0.0);
    const NominalTrajectory plan = plan_locking(req);
    EXPECT_NEAR(plan.totalLength(), 1.0, 1e-9);
    EXPECT_NEAR(plan.segments[0].length, 0.0, 1e-9);
}

TEST(Locking, StaysAboveHalfStandoff) {
    const LockingRequest req = wallRequest({-0.3, 0.5}, -0.9);
    const NominalTrajectory plan = plan_locking(req);
    for (double t = 0.0; t <= plan.totalTime(); t += 1e-3) EXPECT_GE(plan.pointAtTime(t).y, 0.03 - 1e-9);
}

TEST(Unlocking, EndsOnLineAlongDirection) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> off(-0.03, 0.03), h(-0.6, 0.6);
    const AttractionLine line{{-5.0, 0.0}, {1.0, 0.0}};
    for (int k = 0; k < 200; ++k) {
        UnlockingRequest req;
        req.start = {{0.0, off(rng)}, h(rng)};
        req.line = line;
        req.awayTurn = 1;  // obstacle on the right
        req.turnRadius = kR;
        const NominalTrajectory plan = plan_unlocking(req);
        ASSERT_EQ(plan.segments.size(), 2u);
        EXPECT_NEAR(line.signedOffset(plan.segments.back().end()), 0.0, 1e-9);
        EXPECT_NEAR(wrapAngle(plan.segments.back().endHeading()), 0.0, 1e-9);
        EXPECT_LE(plan.maxPositionGap(), 1e-9);
    }
}

TEST(Unlocking, TurnsAwayFirstFromOnTheLine) {
    const AttractionLine line{{-5.0, 0.0}, {1.0, 0.0}};
    for (double h : {-0.6, -0.2, 0.0, 0.3, 0.6}) {
        for (int away : {1, -1}) {
            UnlockingRequest req;
            req.start = {{0.0, 0.0}, h};
            req.line = line;
            req.awayTurn = away;
            req.turnRadius = kR;
            EXPECT_EQ(plan_unlocking(req).segments.front().turn(), away) << h;
        }
    }
}

TEST(Unlocking, SecondCenterMatchesClosedForm) {
    // Agent at the origin heading +y, obstacle on the -x side; the line passes
    // through the agent with direction at angle theta from +x.
    for (double theta : {-0.4, 0.0, 0.3, 0.7}) {
        UnlockingRequest req;
        req.start = {{0.0, 0.0}, kPi / 2.0};
        req.line = {{0.0, 0.0}, unitFromAngle(theta)};
        req.awayTurn = -1;  // turning toward +x is clockwise here
        req.turnRadius = kR;
        const NominalTrajectory plan = plan_unlocking(req);
        const Vec2 c2 = plan.segments.back().center();
        const Vec2 expected = unlocking_second_center(theta, kR);
        EXPECT_NEAR(c2.x, expected.x, 1e-9) << theta;
        EXPECT_NEAR(c2.y, expected.y, 1e-9) << theta;
    }
}

TEST(Offsets, ZeroOnNominal) {
    const Segment arc = Segment::arc({0.0, 0.0}, 0.0, 0.5, 1.0);
    for (double s : {0.0, 0.2, 0.45}) {
        const AgentState a{arc.pointAt(s), unitFromAngle(arc.headingAt(s)), 0.0};
        const Offsets o = offsets_vs_arc(a, arc, 1.0);
        EXPECT_NEAR(o.Delta, 0.0, 1e-12);
        EXPECT_NEAR(o.delta, 0.0, 1e-12);
    }
    const AgentState b{{2.0, 0.3}, unitFromAngle(0.1), 0.0};
    const Offsets lo = offsets_vs_line(b, {0.0, 0.0}, 0.0, 1.0);
    EXPECT_NEAR(lo.Delta, 0.3, 1e-15);
    EXPECT_NEAR(lo.delta, 0.1, 1e-15);
}
