#pragma once
/**
 * @file agent.hpp
 * @brief Constant-speed agent with bounded turning, integrated exactly.
 *
 *   x' = v,   v' = (a0 u / v0) S v,   |u| <= M
 *
 * With u held over a step the velocity is a rigid rotation, so the step is an
 * exact circular arc (or a straight line for u = 0) and |v| never drifts.
 */

#include "obnav/geometry.hpp"
#include "obnav/world.hpp"

namespace obnav {

struct SimParams {
    double v0{1.0};
    double r0{1.0};
    double M{5.0};
    double dt{1e-3};
    double epsStop{0.4};          ///< target-ball radius, must not exceed d_m
    double gammaOverRate{0.1};    ///< sensor slew limit in units of a0/v0

    [[nodiscard]] double a0() const { return v0 * v0 / r0; }
    [[nodiscard]] double rate() const { return a0() / v0; }  ///< a0/v0, the turning rate at u=1
    [[nodiscard]] double dm() const { return 0.8 * r0; }
    [[nodiscard]] double gamma() const { return gammaOverRate * rate(); }
    [[nodiscard]] double minTurnRadius() const { return r0 / M; }
};

/// Sensor slew limit in units of a0/v0 needed to keep the ray on a fixed point
/// while locking: M/(1+eps) + 2 r0/d0.
double derived_gamma_over_rate(double M, double eps, double d0OverR0);

struct AgentState {
    Vec2 x;
    Vec2 v;
    double t{0.0};

    [[nodiscard]] double heading() const { return v.angle(); }
};

/// Result of one step; `applied` is u after clamping to [-M, M].
struct AgentStepResult {
    AgentState state;
    double applied{0.0};
    bool clamped{false};
};

AgentStepResult agent_step(const AgentState& state, double u, double dt, const SimParams& params);

/// Time for a particle moving on a circle of radius r0 (turning toward `line`)
/// from the agent's pose to first reach the line. Returns +inf if it never does.
double time_to_line_uniform_circular(const AgentState& state, const AttractionLine& line,
                                     const SimParams& params);

}  // namespace obnav
