#include "obnav/agent.hpp"

#include "obnav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace obnav {

double derived_gamma_over_rate(double M, double eps, double d0OverR0) {
    return M / (1.0 + eps) + 2.0 / d0OverR0;
}

AgentStepResult agent_step(const AgentState& state, double u, double dt, const SimParams& params) {
    if (!(dt > 0.0)) throw Error(ErrorKind::NonpositiveDt, "agent step needs dt > 0");
    const double applied = std::clamp(u, -params.M, params.M);
    const double omega = params.rate() * applied;
    const double turn = omega * dt;
    const double heading = state.v.angle();
    const double v0 = params.v0;

    // Chord of the arc travelled: length v0 dt sinc(turn/2), direction heading + turn/2.
    const double half = 0.5 * turn;
    const double sinc = std::abs(half) > 1e-8 ? std::sin(half) / half : 1.0 - half * half / 6.0;
    const double chord = v0 * dt * sinc;

    AgentStepResult out;
    out.state.x = state.x + unitFromAngle(heading + half) * chord;
    out.state.v = unitFromAngle(heading + turn) * v0;
    out.state.t = state.t + dt;
    out.applied = applied;
    out.clamped = applied != u;
    return out;
}

double time_to_line_uniform_circular(const AgentState& state, const AttractionLine& line,
                                     const SimParams& params) {
    const double offset = line.signedOffset(state.x);
    const double radius = params.r0;  // v0^2 / a0
    if (std::abs(offset) <= 1e-12 * radius) return 0.0;

    const Vec2 heading = state.v.normalized();
    // Turn toward the line: right when left of it, left otherwise.
    const int turn = offset > 0.0 ? -1 : 1;
    const Vec2 toCenter = heading.perp() * static_cast<double>(turn);
    const Vec2 center = state.x + toCenter * radius;
    const double centerOffset = line.signedOffset(center);
    if (std::abs(centerOffset) >= radius * (1.0 - 1e-12)) {
        return std::numeric_limits<double>::infinity();
    }

    // Position on the circle: center + radius * rotate(direction, beta).
    const double beta0 = signedAngle(line.direction, -toCenter);
    const double root = std::asin(-centerOffset / radius);
    double best = std::numeric_limits<double>::infinity();
    for (double target : {root, kPi - root}) {
        double sweep = turn > 0 ? target - beta0 : beta0 - target;
        sweep = std::fmod(sweep, kTwoPi);
        if (sweep < 0.0) sweep += kTwoPi;
        if (sweep <= 1e-12) sweep += kTwoPi;
        best = std::min(best, sweep);
    }
    return best * radius / params.v0;
}

}  // namespace obnav
