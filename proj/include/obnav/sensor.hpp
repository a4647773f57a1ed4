#pragma once
/**
 * @file sensor.hpp
 * @brief Single rotating depth sensor: ray cast at offset angle phi from the
 *        velocity, slew-limited rotation, and bounded measurement noise.
 */

#include "obnav/agent.hpp"
#include "obnav/geometry.hpp"
#include "obnav/world.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace obnav {

struct SensorState {
    double phi{0.0};                 ///< ray angle relative to v, (-pi, pi]
    std::optional<Vec2> lockedTarget;
};

/// psi is the angle from the ray to f' at the impact point, counter-clockwise
/// positive, using the curve's own orientation.
struct Measurement {
    double d{0.0};
    std::optional<double> psi;
    // Ground truth, for logging only. Controllers must not read these.
    std::optional<Vec2> trueImpact;
    std::optional<std::size_t> obstacle;

    [[nodiscard]] bool detected() const { return psi.has_value(); }
};

struct NoiseModel {
    double depthBound{0.0};  ///< length
    double angleBound{0.0};  ///< rad
    std::uint64_t seed{0};

    /// Reference bounds: d0/8 on depth, 1.5 degrees on angle.
    static NoiseModel referenceDefault(double d0, std::uint64_t seed);
};

using Rng = std::mt19937_64;

[[nodiscard]] inline Vec2 ray_direction(const AgentState& agent, const SensorState& sensor) {
    return rotate(agent.v.normalized(), sensor.phi);
}

Measurement sense(const AgentState& agent, const SensorState& sensor, const World& world,
                  const NoiseModel& noise, Rng& rng);

SensorState sensor_step(const SensorState& sensor, double u_s, double dt, const SimParams& params);

/// Slew command keeping the ray on `sensor.lockedTarget`: bearing feedback plus
/// the feed-forward  v0 sin(phi)/d - (a0/v0) u  of a fixed point. Saturated at gamma.
double aim_command(const AgentState& agent, const SensorState& sensor, double agent_u,
                   const SimParams& params);

}  // namespace obnav
