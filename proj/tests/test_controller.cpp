#include "obnav/controller.hpp"
#include "obnav/errors.hpp"
#include "obnav/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace obnav;

namespace {

ControllerConfig defaultConfig() {
    ControllerConfig cfg;
    cfg.params.gammaOverRate = derived_gamma_over_rate(5.0, 0.151, 0.06);
    return cfg;
}

World straightWall() {
    World w;
    w.start = {-30.0, 0.0};
    w.obstacles.push_back(build_curve([](double) { return 0.0; }, 40.0, 1.0, {-20.0, 0.0}, {1.0, 0.0}));
    return w;
}

}  // namespace

TEST(Laws, BoundaryLayerSign) {
    EXPECT_EQ(sgn_bl(1.0, 1e-3), 1.0);
    EXPECT_EQ(sgn_bl(-1.0, 1e-3), -1.0);
    EXPECT_NEAR(sgn_bl(5e-4, 1e-3), 0.5, 1e-15);
    EXPECT_EQ(sgn_bl(-2.0, 0.0), -1.0);
}

TEST(Laws, LinearLaws) {
    const Gains g;
    EXPECT_NEAR(u_att(0.01, 0.02, g), -0.02 - 1.63, 1e-12);
    EXPECT_NEAR(obnav::u_int(0.0, -0.1, g), 0.1, 1e-15);
    EXPECT_NEAR(g.intQ2, (5.0 - 0.103) / 0.03, 1e-12);
}

TEST(Laws, CircularLawSaturatesAwayFromSurface) {
    const Gains g;
    // Outside a CCW arc (Delta > 0): turn harder counter-clockwise.
    EXPECT_EQ(u_cir(0.1, 0.0, 1, g), 5.0);
    EXPECT_EQ(u_cir(-0.1, 0.0, 1, g), -5.0);
    // Mirror for clockwise arcs.
    EXPECT_EQ(u_cir(0.1, 0.0, -1, g), -5.0);
}

TEST(Laws, TrackingLawSigns) {
    const Gains g;
    // Too far from the obstacle on the right: turn right.
    EXPECT_EQ(u_tr(g.d0 + 0.05, g.psiCenter, g), -5.0);
    EXPECT_EQ(u_tr(g.d0 - 0.05, g.psiCenter, g), 5.0);
    EXPECT_EQ(u_tr(g.d0, g.psiCenter, g), 0.0);
    Gains depthWeighted = g;
    depthWeighted.surface = TrackingSurface::DepthWeighted;
    // The alternative pairing weights the depth error with c_Delta instead.
    EXPECT_NEAR(u_tr(g.d0 + 1e-3, g.psiCenter, depthWeighted), -5.0 * 0.02, 1e-12);
    EXPECT_NEAR(u_tr(g.d0 + 1e-3, g.psiCenter, g), -5.0 * 0.12, 1e-12);
}

TEST(Controller, AttractFollowsLineAndLocksOnDetection) {
    const ControllerConfig cfg = defaultConfig();
    const AgentState a{{-5.0, 0.01}, {1.0, 0.0}, 0.0};
    ControllerState c = ControllerState::initial({{-5.0, 0.0}, {1.0, 0.0}, 0.0});
    Measurement none;
    none.d = 0.8;
    ControlOutput out = controller_step(c, a, {}, none, cfg);
    EXPECT_FALSE(out.transition);
    EXPECT_NEAR(out.u, -163.0 * 0.01, 1e-9);
    EXPECT_NEAR(out.next.timer, cfg.params.dt, 1e-15);

    Measurement hit;
    hit.d = 0.5;
    hit.psi = -kPi / 2.0 + 0.2;
    out = controller_step(c, a, {}, hit, cfg);
    ASSERT_TRUE(out.transition);
    EXPECT_EQ(out.next.mode, Mode::Lock);
    EXPECT_EQ(out.next.timer, 0.0);
    ASSERT_TRUE(out.next.plan);
    ASSERT_TRUE(out.next.frozen);
    EXPECT_NEAR(out.next.t1hat, out.next.plan->totalTime(), 1e-15);
    EXPECT_NEAR(out.next.frozen->point.x, -4.5, 1e-12);
}

TEST(Controller, StopsInsideTargetBall) {
    const ControllerConfig cfg = defaultConfig();
    const AgentState a{{-0.05, 0.0}, {1.0, 0.0}, 0.0};
    const ControllerState c = ControllerState::initial({{-5.0, 0.0}, {1.0, 0.0}, 0.0});
    const ControlOutput out = controller_step(c, a, {}, {}, cfg);
    EXPECT_TRUE(out.stop);
    EXPECT_EQ(out.next.mode, Mode::Stopped);
}

TEST(Controller, TrackWithoutReturnIsLost) {
    const ControllerConfig cfg = defaultConfig();
    ControllerState c = ControllerState::initial({{-5.0, 0.0}, {1.0, 0.0}, 0.0});
    c.mode = Mode::Track;
    Measurement none;
    none.d = 0.8;
    const ControlOutput out = controller_step(c, {{0.0, 1.0}, {1.0, 0.0}, 0.0}, {}, none, cfg);
    EXPECT_TRUE(out.trackingLost);
}

TEST(Controller, LockWithoutPlanThrows) {
    ControllerState c = ControllerState::initial({{-5.0, 0.0}, {1.0, 0.0}, 0.0});
    c.mode = Mode::Lock;
    try {
        controller_step(c, {{0.0, 1.0}, {1.0, 0.0}, 0.0}, {}, {}, defaultConfig());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PlanMissing);
    }
}

TEST(Controller, UnlockWaitsForSensorRealignment) {
    const ControllerConfig cfg = defaultConfig();
    ControllerState c = ControllerState::initial({{-5.0, 0.0}, {1.0, 0.0}, 0.0});
    c.mode = Mode::Unlock;
    c.frozen = FrozenImpact{{0.0, -0.5}, {1.0, 0.0}, {0.0, 1.0}};
    c.plan = NominalTrajectory{};
    c.plan->segments.push_back(Segment::line({-1.0, 0.0}, 0.0, 0.0));
    c.t3hat = 0.0;
    const AgentState a{{-1.0, 0.0}, {1.0, 0.0}, 0.0};
    SensorState s{-0.3, {}};
    const ControlOutput out = controller_step(c, a, s, {}, cfg);
    EXPECT_FALSE(out.transition);
    EXPECT_EQ(out.next.submode, Submode::SensorRealign);
    EXPECT_NEAR(out.u_s, cfg.params.gamma(), 1e-12);
    s.phi = 0.0;
    EXPECT_EQ(controller_step(c, a, s, {}, cfg).next.mode, Mode::Attract);
}

TEST(Tracking, SideNormalisation) {
    const ControllerConfig cfg = defaultConfig();
    ControllerState c;
    Measurement m;
    m.d = 0.07;
    m.psi = 1.8;
    c.side = 1;
    c.orient = 1;
    EXPECT_NEAR(tracking_offsets(c, m, cfg)->delta, 1.8 - kPi / 2.0, 1e-15);
    c.side = -1;
    EXPECT_NEAR(tracking_offsets(c, m, cfg)->delta, -1.8 - kPi / 2.0, 1e-15);
    c.side = 1;
    c.orient = -1;
    EXPECT_NEAR(tracking_offsets(c, m, cfg)->delta, wrapAngle(1.8 + kPi) - kPi / 2.0, 1e-15);
    EXPECT_NEAR(tracking_offsets(c, m, cfg)->Delta, 0.01, 1e-15);
}

// Straight wall below the agent, tracking started from perturbed states with the
// sensor at the locked angle -pi/2 - phi_m. Transients that pass through the
// certified band must not raise V there, and the state must stay in the tube.
TEST(Tracking, TransientsDecreaseVInCertifiedBand) {
    const World w = straightWall();
    const ControllerConfig cfg = defaultConfig();
    const TrackingParams tp = audit_params(cfg.gains, cfg.params.M);
    std::size_t audited = 0;
    for (double h : {0.045, 0.06, 0.075}) {
        for (double th : {-0.08, -0.03, 0.0, 0.03, 0.08}) {
            AgentState a{{0.0, h}, unitFromAngle(th), 0.0};
            SensorState s{-kPi / 2.0 - cfg.gains.lockTilt, {}};
            ControllerState c = ControllerState::initial(a);
            c.mode = Mode::Track;
            c.t2hat = 1e9;
            c.line = {{-30.0, 0.0}, {1.0, 0.0}};
            Rng rng(1);
            std::vector<LyapunovSample> window;
            for (int k = 0; k < 3000; ++k) {
                const Measurement m = sense(a, s, w, {}, rng);
                const ControlOutput out = controller_step(c, a, s, m, cfg);
                ASSERT_FALSE(out.stop);
                const auto off = tracking_offsets(c, m, cfg);
                window.push_back({off->Delta, off->delta});
                EXPECT_GE(m.d, cfg.gains.d0 / 2.0);
                EXPECT_LE(m.d, 1.5 * cfg.gains.d0);
                a = agent_step(a, out.u, cfg.params.dt, cfg.params).state;
                s = sensor_step(s, out.u_s, cfg.params.dt, cfg.params);
                c = out.next;
            }
            const LyapunovAudit audit = lyapunov_decreasing(window, tp, 1e-12);
            EXPECT_EQ(audit.violations, 0u) << "h=" << h << " th=" << th;
            audited += audit.audited;
        }
    }
    EXPECT_GT(audited, 100u);
}
