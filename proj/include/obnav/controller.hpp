#pragma once
/**
 * @file controller.hpp
 * @brief Four-mode hybrid controller: attraction-line following, locking onto a
 *        newly detected obstacle, tracking its boundary, and unlocking back onto
 *        the attraction line.
 *
 * Sign conventions: u > 0 turns the velocity counter-clockwise. During tracking
 * the controller works in a side-normalised frame in which the obstacle lies on
 * the agent's right, the sensor points at phi ~ -pi/2 and psi ~ +pi/2; a left-
 * side obstacle is handled by mirroring (psi -> -psi, u -> -u).
 */

#include "obnav/agent.hpp"
#include "obnav/planner.hpp"
#include "obnav/sensor.hpp"
#include "obnav/world.hpp"

#include <optional>
#include <string>

namespace obnav {

/// Which pairing of the tracking coefficients forms the sliding surface.
enum class TrackingSurface {
    /// s = c_psi (d - d0) - c_Delta (psi - psi_c): the gradient direction of the
    /// tracking Lyapunov function.
    LyapunovGradient,
    /// s = c_Delta (d - d0) - c_psi (psi - psi_c), the depth error carrying the small coefficient.
    DepthWeighted,
};

struct Gains {
    double M{5.0};
    double attHeading{1.0};     ///< k_delta
    double attOffset{163.0};    ///< k_Delta
    double cirSlope{3.4};
    double intHeading{1.0};
    double intQ2{(5.0 - 0.103) / 0.03};
    double cDelta{0.02};  ///< p^2
    double cPsi{0.12};    ///< -q
    double psiCenter{1.71};
    double d0{0.06};  ///< units of r0
    TrackingSurface surface{TrackingSurface::LyapunovGradient};

    double DeltaM{0.03};
    double deltaM{0.103};
    double psiM{0.58};
    double eps{0.151};
    double sigma{1e-3};  ///< boundary-layer width of the sign function
    /// Forward tilt of the locking goal so that the ray to f_p ends at
    /// pi/2 + tilt from the velocity (zero puts the goal at j d0).
    double lockTilt{0.1115};
    /// Extra time after t1 allowed for the locking exit test before aborting.
    double lockGrace{0.25};

    [[nodiscard]] double turnRadius(double r0) const { return (1.0 + eps) * r0 / M; }
};

/// Boundary-layer sign: clamp(s / sigma, -1, 1).
double sgn_bl(double s, double sigma);

double u_att(double Delta, double delta, const Gains& g = {});
/// `turn` is the sign of the nominal arc (+1 counter-clockwise).
double u_cir(double Delta, double delta, int turn, const Gains& g = {});
double u_int(double Delta, double delta, const Gains& g = {});
/// d in units of r0, psi in the side-normalised frame.
double u_tr(double d, double psi, const Gains& g = {});

enum class Mode { Attract, Lock, Track, Unlock, Stopped };
enum class Submode { None, Circ1, Line, Circ2, SensorRealign };

const char* toString(Mode m);
const char* toString(Submode s);

struct FrozenImpact {
    Vec2 point;
    Vec2 tangent;  ///< oriented along the direction of travel
    Vec2 outward;
};

struct ControllerState {
    Mode mode{Mode::Attract};
    Submode submode{Submode::None};
    double timer{0.0};
    std::optional<FrozenImpact> frozen;
    std::optional<NominalTrajectory> plan;
    double t1hat{0.0};
    double t2hat{0.0};
    double t3hat{0.0};
    AttractionLine line;
    int side{1};    ///< +1 obstacle on the right, -1 on the left
    int orient{1};  ///< +1 if travel follows the curve's own orientation
    int switches{0};

    static ControllerState initial(const AgentState& agent);
};

struct ModeTransition {
    Mode from{Mode::Attract};
    Mode to{Mode::Attract};
    double timerAtSwitch{0.0};
    std::string reason;
};

struct ControllerConfig {
    SimParams params;
    Gains gains;
};

/// Evaluates the mode-exit conditions for the current state. Does not mutate.
std::optional<ModeTransition> switch_predicates(const ControllerState& ctrl, const AgentState& agent,
                                                const SensorState& sensor, const Measurement& m,
                                                const ControllerConfig& cfg);

struct ControlOutput {
    double u{0.0};    ///< before saturation
    double u_s{0.0};  ///< before saturation
    ControllerState next;
    std::optional<ModeTransition> transition;
    bool stop{false};
    bool trackingLost{false};
};

/// Throws Error{PlanMissing} when in Lock/Unlock without a plan.
ControlOutput controller_step(const ControllerState& ctrl, const AgentState& agent,
                              const SensorState& sensor, const Measurement& m,
                              const ControllerConfig& cfg);

/// Tracking offsets (Delta = (d - d0)/r0, delta = psi - pi/2) from a measurement,
/// in the side-normalised frame. Empty when the obstacle is not detected.
std::optional<Offsets> tracking_offsets(const ControllerState& ctrl, const Measurement& m,
                                        const ControllerConfig& cfg);

}  // namespace obnav
