#include "obnav/sensor.hpp"

#include "obnav/errors.hpp"

#include <algorithm>
#include <cmath>

namespace obnav {

NoiseModel NoiseModel::referenceDefault(double d0, std::uint64_t seed) {
    return {d0 / 8.0, 1.5 * kPi / 180.0, seed};
}

Measurement sense(const AgentState& agent, const SensorState& sensor, const World& world,
                  const NoiseModel& noise, Rng& rng) {
    const double dm = world.sensorRange();
    // Always draw both samples so the stream does not depend on what was hit.
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double depthNoise = noise.depthBound * unit(rng);
    const double angleNoise = noise.angleBound * unit(rng);

    Measurement m;
    m.d = dm;
    const Vec2 dir = ray_direction(agent, sensor);
    const auto hit = ray_intersect(world, agent.x, dir, dm);
    if (!hit) return m;

    const double upper = std::nextafter(dm, 0.0);
    const double lower = 1e-9 * world.r0;
    m.d = std::clamp(hit->depth + depthNoise, lower, upper);
    m.psi = wrapAngle(signedAngle(dir, hit->tangent) + angleNoise);
    m.trueImpact = hit->impact;
    m.obstacle = hit->obstacle;
    return m;
}

SensorState sensor_step(const SensorState& sensor, double u_s, double dt, const SimParams& params) {
    if (!(dt > 0.0)) throw Error(ErrorKind::NonpositiveDt, "sensor step needs dt > 0");
    const double g = params.gamma();
    SensorState out = sensor;
    out.phi = wrapAngle(sensor.phi + std::clamp(u_s, -g, g) * dt);
    return out;
}

double aim_command(const AgentState& agent, const SensorState& sensor, double agent_u,
                   const SimParams& params) {
    if (!sensor.lockedTarget) throw Error(ErrorKind::InvalidArgument, "no locked target");
    const Vec2 los = *sensor.lockedTarget - agent.x;
    const double d = los.norm();
    if (d < 1e-6 * params.r0) throw Error(ErrorKind::TargetCoincident, "target at agent position");

    const double bearing = signedAngle(agent.v, los);
    const double error = wrapAngle(bearing - sensor.phi);
    const double feedForward =
        params.v0 * std::sin(bearing) / d - params.rate() * std::clamp(agent_u, -params.M, params.M);
    const double timeConstant = 5.0 * params.dt;
    const double g = params.gamma();
    return std::clamp(feedForward + error / timeConstant, -g, g);
}

}  // namespace obnav
