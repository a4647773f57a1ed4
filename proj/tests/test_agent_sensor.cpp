#include "obnav/agent.hpp"
#include "obnav/errors.hpp"
#include "obnav/sensor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace obnav;

TEST(Agent, ConstantTurnFollowsClosedFormCircle) {
    SimParams p;
    p.dt = 1e-3;
    AgentState a{{0.0, 0.0}, {1.0, 0.0}, 0.0};
    const double u = 2.0;  // radius r0/2, counter-clockwise
    const int n = 2000;
    for (int k = 0; k < n; ++k) a = agent_step(a, u, p.dt, p).state;
    const double t = n * p.dt;
    const double R = 0.5;
    EXPECT_NEAR(a.x.x, R * std::sin(t / R), 1e-12);
    EXPECT_NEAR(a.x.y, R * (1.0 - std::cos(t / R)), 1e-12);
    EXPECT_NEAR(a.heading(), wrapAngle(t / R), 1e-12);
}

TEST(Agent, SpeedIsExactUnderRandomControls) {
    SimParams p;
    AgentState a{{0.0, 0.0}, {0.0, 1.0}, 0.0};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    double worst = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const AgentStepResult r = agent_step(a, u(rng), p.dt, p);
        EXPECT_LE(std::abs(r.applied), p.M);
        a = r.state;
        worst = std::max(worst, std::abs(a.v.norm() - p.v0));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Agent, ClampsAndRejectsBadDt) {
    SimParams p;
    const AgentState a{{0.0, 0.0}, {1.0, 0.0}, 0.0};
    const AgentStepResult r = agent_step(a, 9.0, p.dt, p);
    EXPECT_TRUE(r.clamped);
    EXPECT_DOUBLE_EQ(r.applied, 5.0);
    EXPECT_THROW(agent_step(a, 0.0, 0.0, p), Error);
    EXPECT_THROW(agent_step(a, 0.0, -1e-3, p), Error);
}

TEST(Agent, TimeToLineOnUnitCircle) {
    SimParams p;
    const AttractionLine line{{-5.0, 0.0}, {1.0, 0.0}};
    // Start 0.5 above the line heading along it: turning right on a unit circle
    // centred at (0, -0.5) reaches y = 0 after an angle of pi/3.
    const AgentState a{{0.0, 0.5}, {1.0, 0.0}, 0.0};
    EXPECT_NEAR(time_to_line_uniform_circular(a, line, p), kPi / 3.0, 1e-12);
    const AgentState far{{0.0, 3.0}, {1.0, 0.0}, 0.0};
    EXPECT_TRUE(std::isinf(time_to_line_uniform_circular(far, line, p)));
    const AgentState on{{1.0, 0.0}, {0.0, 1.0}, 0.0};
    EXPECT_EQ(time_to_line_uniform_circular(on, line, p), 0.0);
}

TEST(Agent, DerivedSlewRate) { EXPECT_NEAR(derived_gamma_over_rate(5.0, 0.151, 0.06), 5.0 / 1.151 + 2.0 / 0.06, 1e-12); }

namespace {

World wallWorld() {
    // Counter-clockwise circle of radius 2 centred at (3, 0): leftmost point (1, 0).
    World w;
    w.obstacles.push_back(make_circle({3.0, 0.0}, 2.0, 1.0));
    return w;
}

}  // namespace

TEST(Sensor, HeadOnHitGivesDepthAndRightAngle) {
    const World w = wallWorld();
    const AgentState a{{0.5, 0.0}, {1.0, 0.0}, 0.0};
    Rng rng(0);
    const Measurement m = sense(a, {}, w, {}, rng);
    ASSERT_TRUE(m.detected());
    EXPECT_NEAR(m.d, 0.5, 1e-3);
    // Tangent at the leftmost point of a CCW circle is (0, -1).
    EXPECT_NEAR(*m.psi, -kPi / 2.0, 1e-3);
}

TEST(Sensor, OutOfRangeReportsMaxDepth) {
    const World w = wallWorld();
    const AgentState a{{-1.0, 0.0}, {1.0, 0.0}, 0.0};
    Rng rng(0);
    const Measurement m = sense(a, {}, w, {}, rng);
    EXPECT_FALSE(m.detected());
    EXPECT_DOUBLE_EQ(m.d, w.sensorRange());
}

TEST(Sensor, NoiseStaysInsideBoundsAndIsSeeded) {
    const World w = wallWorld();
    const AgentState a{{0.6, 0.0}, {1.0, 0.0}, 0.0};
    Rng clean(0);
    const Measurement truth = sense(a, {}, w, {}, clean);
    const NoiseModel noise = NoiseModel::referenceDefault(0.06, 5);
    EXPECT_NEAR(noise.depthBound, 0.0075, 1e-15);
    EXPECT_NEAR(noise.angleBound, 1.5 * kPi / 180.0, 1e-15);
    Rng r1(noise.seed), r2(noise.seed);
    for (int k = 0; k < 2000; ++k) {
        const Measurement m1 = sense(a, {}, w, noise, r1);
        const Measurement m2 = sense(a, {}, w, noise, r2);
        EXPECT_EQ(m1.d, m2.d);
        EXPECT_LE(std::abs(m1.d - truth.d), noise.depthBound + 1e-15);
        EXPECT_LE(std::abs(wrapAngle(*m1.psi - *truth.psi)), noise.angleBound + 1e-15);
    }
}

TEST(Sensor, SlewIsClamped) {
    SimParams p;
    p.gammaOverRate = 2.0;
    const SensorState s = sensor_step({0.0, {}}, 100.0, 0.01, p);
    EXPECT_NEAR(s.phi, 0.02, 1e-15);
    EXPECT_THROW(sensor_step({}, 0.0, 0.0, p), Error);
}

TEST(Sensor, AimKeepsRayOnFixedPoint) {
    SimParams p;
    p.gammaOverRate = derived_gamma_over_rate(5.0, 0.151, 0.06);
    const Vec2 target{1.0, -0.4};
    AgentState a{{0.0, 0.0}, {1.0, 0.0}, 0.0};
    SensorState s{signedAngle(a.v, target - a.x), target};
    double worst = 0.0;
    for (int k = 0; k < 600; ++k) {
        const double u = 1.5 * std::sin(0.01 * k);
        s = sensor_step(s, aim_command(a, s, u, p), p.dt, p);
        a = agent_step(a, u, p.dt, p).state;
        worst = std::max(worst, std::abs(wrapAngle(signedAngle(a.v, target - a.x) - s.phi)));
    }
    EXPECT_LT(worst, 1e-3);
}

TEST(Sensor, AimErrors) {
    SimParams p;
    const AgentState a{{0.0, 0.0}, {1.0, 0.0}, 0.0};
    EXPECT_THROW(aim_command(a, {}, 0.0, p), Error);
    try {
        aim_command(a, {0.0, Vec2{0.0, 0.0}}, 0.0, p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TargetCoincident);
    }
}
