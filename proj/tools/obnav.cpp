// Command-line front end: run, synth, validate, sweep, preset.

#include "obnav/errors.hpp"
#include "obnav/sim.hpp"
#include "obnav/synthesis.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace obnav;
using nlohmann::json;

namespace {

Scenario loadScenarioOrPreset(const std::string& arg) {
    if (arg.rfind("preset:", 0) == 0) return preset(arg.substr(7));
    return load_scenario(arg);
}

std::vector<double> parseList(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

int cmdRun(const std::string& path, const std::string& tracePath, std::optional<std::uint64_t> seed,
           std::optional<double> dt) {
    Scenario sc = loadScenarioOrPreset(path);
    if (seed) sc.noise.seed = *seed;
    if (dt) sc.params.dt = *dt;
    const RunResult res = run(sc, {!tracePath.empty(), false});
    const RunVerdict& v = res.verdict;
    if (!tracePath.empty()) {
        std::ofstream csv(tracePath);
        if (!csv) throw Error(ErrorKind::InvalidArgument, "cannot write " + tracePath);
        csv << trace_csv_header() << '\n';
        for (const auto& row : res.trace) csv << trace_csv_row(row) << '\n';
        std::ofstream side(tracePath + ".json");
        side << verdict_to_json(v, sc) << '\n';
    }
    std::printf("%s t=%.4f switches=%d min_clearance=%.6f final=(%.6f, %.6f)\n", toString(v.outcome), v.time,
                v.modeSwitchCount, v.minClearance, v.finalState.x.x, v.finalState.x.y);
    for (const auto& tr : res.transitions) {
        std::printf("  t=%.4f %s -> %s (%s)\n", tr.t, toString(tr.transition.from), toString(tr.transition.to),
                    tr.transition.reason.c_str());
    }
    return exit_code(v.outcome);
}

int cmdSynth(double M, double eps, bool asJson) {
    const TrackingParams tp = derive_tracking_params(M, eps);
    const ConstraintReport report = check_constraints(tp);
    const RoaRegions roa = roa_regions(tp);
    const FreeSpace fs = free_space_requirements(M, eps, tp.d0, derived_gamma_over_rate(M, eps, tp.d0));
    if (asJson) {
        json checks = json::array();
        for (const auto& c : report.checks) {
            checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass()}});
        }
        json j = {{"M", M},
                  {"eps", eps},
                  {"phi_m", tp.phiM},
                  {"psi_m", tp.psiM},
                  {"d0", tp.d0},
                  {"psi0", tp.psi0},
                  {"psi_center", tp.psiCenter()},
                  {"q", tp.q},
                  {"p2", tp.p2},
                  {"alpha0", tp.alpha0},
                  {"alpha1", tp.alpha1},
                  {"beta1", tp.beta1},
                  {"p_lock", tp.pLock},
                  {"delta_m", tp.deltaM},
                  {"Delta_m_bound", tp.DeltaMBound},
                  {"Delta_m_used", tp.DeltaMUsed},
                  {"attraction_gain", tp.attGain()},
                  {"spurious_level", roa.spurious.level},
                  {"max_roa_level", roa.maxRoa.level},
                  {"locking_tube", fs.lockingTube},
                  {"unlocking_depth", fs.unlockingDepth},
                  {"constraints", checks}};
        std::cout << j.dump(2) << '\n';
        return report.allPass() ? 0 : 1;
    }
    std::printf("M = %g, eps = %g\n", M, eps);
    std::printf("  phi_m      = %.6f rad\n", tp.phiM);
    std::printf("  psi_m      = %.6f rad\n", tp.psiM);
    std::printf("  d0         = %.6f r0\n", tp.d0);
    std::printf("  q          = %.6f   (-q = %.6f)\n", tp.q, -tp.q);
    std::printf("  p^2        = %.6f\n", tp.p2);
    std::printf("  psi_center = %.6f rad\n", tp.psiCenter());
    std::printf("  p (lock)   = %.6f\n", tp.pLock);
    std::printf("  delta_m    = %.6f rad\n", tp.deltaM);
    std::printf("  Delta_m    = %.6f (bound), %.3f (used)\n", tp.DeltaMBound, tp.DeltaMUsed);
    std::printf("  k_Delta    = %.3f\n", tp.attGain());
    std::printf("  V levels   = %.3e (spurious), %.3e (certified)\n", roa.spurious.level, roa.maxRoa.level);
    for (const auto& c : report.checks) {
        std::printf("  [%s] %s  (%.6g vs %.6g)\n", c.pass() ? "ok" : "FAIL", c.name.c_str(), c.lhs, c.rhs);
    }
    return report.allPass() ? 0 : 1;
}

int cmdValidate(const std::string& path) {
    World w;
    if (path.rfind("preset:", 0) == 0) {
        w = preset(path.substr(7)).world;
    } else {
        // Accept either a bare world file or a scenario that embeds one.
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::WorldParse, "cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        const json j = json::parse(ss.str(), nullptr, false);
        if (!j.is_discarded() && (j.contains("world") || j.contains("world_file"))) {
            w = load_scenario(path).world;
        } else {
            w = world_from_json(ss.str());
        }
    }
    const ValidationReport r = validate_world(w);
    for (std::size_t i = 0; i < r.maxCurvature.size(); ++i) {
        std::printf("obstacle %zu: max|w| = %.4f %s\n", i, r.maxCurvature[i], r.maxCurvature[i] <= 1.0 ? "ok" : "FAIL");
    }
    for (const auto& p : r.pairs) {
        std::printf("pair (%zu, %zu): separation %.4f r0 %s\n", p.a, p.b, p.separation, p.pass ? "ok" : "FAIL");
    }
    for (const auto& rb : r.rollingBall) {
        std::printf("obstacle %zu: rolling ball clearance %.4f %s\n", rb.obstacle, rb.worstClearance,
                    rb.pass ? "ok" : "FAIL");
    }
    std::printf("target clearance %.4f %s\n", r.targetClearance, r.targetClearOk ? "ok" : "FAIL");
    std::printf("start clearance %.4f %s\n", r.startClearance, r.startClearOk ? "ok" : "FAIL");
    std::printf("%s\n", r.valid() ? "valid" : "invalid");
    return r.valid() ? 0 : 2;
}

int cmdSweep(const std::string& path, const std::string& grid, int trials, std::uint64_t seed) {
    const Scenario sc = loadScenarioOrPreset(path);
    const auto sep = grid.find(':');
    if (sep == std::string::npos) throw Error(ErrorKind::InvalidArgument, "grid must look like 0,0.125:0,1.5");
    const auto depths = parseList(grid.substr(0, sep));
    const auto angles = parseList(grid.substr(sep + 1));
    const auto cells = sweep_noise(sc, depths, angles, trials, seed);
    std::printf("depth/d0  angle_deg  trials  converged  collided  rate\n");
    for (const auto& c : cells) {
        std::printf("%8.4f  %9.3f  %6d  %9d  %8d  %.3f\n", c.depthBoundOverD0, c.angleBoundDeg, c.trials, c.converged,
                    c.collided, c.successRate());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sensor-based obstacle avoidance simulator"};
    app.require_subcommand(1);

    std::string scenarioPath, tracePath;
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    auto* runCmd = app.add_subcommand("run", "simulate a scenario (file or preset:NAME)");
    runCmd->add_option("scenario", scenarioPath)->required();
    runCmd->add_option("--trace", tracePath, "CSV trace; a .json verdict sidecar is written next to it");
    runCmd->add_option("--seed", seed);
    runCmd->add_option("--dt", dt);

    double M = 5.0, eps = 0.151;
    bool asJson = false;
    auto* synthCmd = app.add_subcommand("synth", "derive controller parameters");
    synthCmd->add_option("--M", M);
    synthCmd->add_option("--eps", eps);
    synthCmd->add_flag("--json", asJson);

    std::string worldPath;
    auto* validateCmd = app.add_subcommand("validate", "check a world against the obstacle regularity conditions");
    validateCmd->add_option("world", worldPath)->required();

    std::string grid = "0,0.125,0.5,1:0,1.5,5,30";
    int trials = 20;
    std::uint64_t sweepSeed = 1;
    auto* sweepCmd = app.add_subcommand("sweep", "Monte-Carlo noise sweep");
    sweepCmd->add_option("scenario", scenarioPath)->required();
    sweepCmd->add_option("--grid", grid, "depth bounds (units of d0) : angle bounds (deg)");
    sweepCmd->add_option("--trials", trials);
    sweepCmd->add_option("--seed", sweepSeed);

    std::string presetName, presetOut;
    auto* presetCmd = app.add_subcommand("preset", "write a preset scenario as JSON");
    presetCmd->add_option("name", presetName)->required();
    presetCmd->add_option("-o,--out", presetOut);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*runCmd) return cmdRun(scenarioPath, tracePath, seed, dt);
        if (*synthCmd) {
            cmdSynth(M, eps, false);
            std::cout << '\n';
            return cmdSynth(M, eps, true);
        }
        if (*validateCmd) return cmdValidate(worldPath);
        if (*sweepCmd) return cmdSweep(scenarioPath, grid, trials, sweepSeed);
        if (*presetCmd) {
            const std::string text = scenario_to_json(preset(presetName));
            if (presetOut.empty()) {
                std::cout << text << '\n';
            } else {
                std::ofstream(presetOut) << text << '\n';
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
