#pragma once
/**
 * @file sim.hpp
 * @brief Closed-loop simulation: scenarios, the fixed-step run loop, traces,
 *        verdicts, the built-in presets and the noise sweep.
 */

#include "obnav/agent.hpp"
#include "obnav/controller.hpp"
#include "obnav/sensor.hpp"
#include "obnav/synthesis.hpp"
#include "obnav/world.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace obnav {

struct Scenario {
    std::string name;
    World world;
    SimParams params;
    Gains gains;
    NoiseModel noise;
    double maxSimTime{200.0};     ///< units of r0/v0
    int traceDecimation{1};       ///< steps per trace row
    double collisionMargin{1e-3};  ///< units of r0
    /// Agent heading at t = 0; empty means along the attraction line.
    std::optional<double> startHeading;
    /// JSON text of the world description, echoed into verdict sidecars.
    std::string worldSpec;
};

enum class Outcome { Converged, Collided, Timeout, TrackingLost };
const char* toString(Outcome o);
/// CLI exit code for an outcome: 0, 2, 3, 3.
int exit_code(Outcome o);

struct TraceRow {
    double t{0.0};
    double x{0.0};
    double y{0.0};
    double vx{0.0};
    double vy{0.0};
    double phi{0.0};
    double d{0.0};
    std::optional<double> psi;
    Mode mode{Mode::Attract};
    Submode submode{Submode::None};
    double u_applied{0.0};
    double u_s_applied{0.0};
    std::optional<double> V_tracking;
    double min_obstacle_distance{0.0};
};

/// Header line and row formatting for the trace CSV.
std::string trace_csv_header();
std::string trace_csv_row(const TraceRow& row);

struct LoggedTransition {
    double t{0.0};
    ModeTransition transition;
};

/// Tracking-mode offsets at one step, side-normalised; V is the tracking
/// Lyapunov value for the controller's own coefficients.
struct TrackingSample {
    double t{0.0};
    double Delta{0.0};
    double delta{0.0};
    double V{0.0};
    double d{0.0};    ///< measured depth / r0
    double psi{0.0};  ///< side-normalised measured angle
};

struct RunVerdict {
    Outcome outcome{Outcome::Timeout};
    double time{0.0};
    std::optional<std::size_t> obstacle;  ///< set for Collided
    int modeSwitchCount{0};
    double minClearance{0.0};
    AgentState finalState;
    Mode finalMode{Mode::Attract};

    // Step-wise invariant monitors.
    double maxSpeedError{0.0};  ///< max | |v| - v0 |
    double maxAbsU{0.0};
    double maxAbsUs{0.0};
    double maxPlanGap{0.0};  ///< largest joint gap of any nominal plan
    std::size_t steps{0};
};

struct RunResult {
    RunVerdict verdict;
    std::vector<TraceRow> trace;
    std::vector<LoggedTransition> transitions;
    std::vector<TrackingSample> tracking;
};

struct RunOptions {
    bool keepTrace{true};
    bool keepTracking{true};
};

/// Tracking Lyapunov parameters matching the controller gains (d0, p^2, q, psi0).
TrackingParams audit_params(const Gains& gains, double M);

/// Fixed-step loop sense -> control -> switch -> step until an outcome.
RunResult run(const Scenario& scenario, const RunOptions& options = {});

/// Throws Error{UnknownPreset}.
Scenario preset(const std::string& name);
std::vector<std::string> preset_names();

World world_from_json(const std::string& text);
World load_world(const std::string& path);
/// Relative world files are resolved against `baseDir`.
Scenario scenario_from_json(const std::string& text, const std::string& baseDir = ".");
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& scenario);
std::string verdict_to_json(const RunVerdict& verdict, const Scenario& scenario);

struct SweepCell {
    double depthBoundOverD0{0.0};
    double angleBoundDeg{0.0};
    int trials{0};
    int converged{0};
    int collided{0};
    [[nodiscard]] double successRate() const { return trials > 0 ? static_cast<double>(converged) / trials : 0.0; }
};

/// Converged fraction per (depth bound, angle bound); trial k uses seed base + k.
/// Cells run concurrently, each with its own RNG streams.
std::vector<SweepCell> sweep_noise(const Scenario& scenario, const std::vector<double>& depthBoundsOverD0,
                                   const std::vector<double>& angleBoundsDeg, int trials,
                                   std::uint64_t baseSeed = 1);

}  // namespace obnav
