// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include "obnav/sim.hpp"
#include "obnav/synthesis.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace obnav;

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool near(double v, double target, double tol) { return std::abs(v - target) <= tol; }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++failures;
}

std::string format(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void synthesis() {
    const auto t0 = Clock::now();
    const TrackingParams tp = derive_tracking_params(5.0);
    const ConstraintReport rep = check_constraints(tp);
    const double elapsed = secondsSince(t0);
    const bool pass = near(tp.p2, 0.02, 0.005) && near(-tp.q, 0.12, 0.005) && near(tp.psiCenter(), 1.71, 0.02) &&
                      near(tp.d0, 0.06, 0.01) && near(tp.deltaM, 0.103, 0.001) && near(tp.pLock, 6.818, 0.001) &&
                      near(tp.attGain(), 163.0, 1.0) && rep.allPass() && elapsed < 1.0;
    report(1, pass,
           format("p2=%.4f -q=%.4f psi_c=%.4f d0=%.4f delta_m=%.5f p=%.4f k=%.2f constraints=%s t=%.3fs", tp.p2, -tp.q,
                  tp.psiCenter(), tp.d0, tp.deltaM, tp.pLock, tp.attGain(), rep.allPass() ? "ok" : "fail", elapsed));
}

void noisyConvergence() {
    const auto t0 = Clock::now();
    Scenario sc = preset("fig1a");
    sc.noise = NoiseModel::referenceDefault(sc.gains.d0 * sc.params.r0, 0);
    int converged = 0, collided = 0;
    double worst = INFINITY;
    for (int seed = 1; seed <= 20; ++seed) {
        sc.noise.seed = static_cast<std::uint64_t>(seed);
        const RunVerdict v = run(sc, {false, false}).verdict;
        if (v.outcome == Outcome::Converged) {
            ++converged;
            worst = std::min(worst, v.minClearance);
        }
        if (v.outcome == Outcome::Collided) ++collided;
    }
    const double elapsed = secondsSince(t0);
    const double floor = sc.gains.d0 / 4.0;
    const bool pass = converged >= 19 && collided == 0 && worst >= floor && elapsed < 30.0;
    report(2, pass,
           format("converged %d/20 collided %d min clearance %.4f (>= %.4f) t=%.2fs", converged, collided, worst, floor,
                  elapsed));
}

void zeroNoiseTracking() {
    Scenario sc = preset("fig1a");
    sc.noise = {};
    const RunResult res = run(sc, {false, true});
    const Gains& g = sc.gains;
    // Post-transient: samples after the first 0.1 r0/v0 of each tracking episode.
    std::vector<double> episodeStart;
    for (const auto& tr : res.transitions) {
        if (tr.transition.to == Mode::Track) episodeStart.push_back(tr.t);
    }
    std::size_t checked = 0, inside = 0;
    for (const auto& s : res.tracking) {
        double start = 0.0;
        for (double e : episodeStart) {
            if (e <= s.t) start = e;
        }
        if (s.t - start < 0.1 * sc.params.r0 / sc.params.v0) continue;
        ++checked;
        if (s.d >= g.d0 / 2.0 && s.d <= 1.5 * g.d0 && std::abs(s.psi - kPi / 2.0) <= g.psiM) ++inside;
    }
    const bool pass = res.verdict.outcome == Outcome::Converged && checked > 0 && inside == checked;
    report(3, pass,
           format("%s, tracking samples in band %zu/%zu", toString(res.verdict.outcome), inside, checked));
}

void lyapunovAudit() {
    Scenario sc = preset("fig1c");
    sc.params.dt = 1e-3;
    sc.gains.sigma = 1e-3;
    const RunResult res = run(sc, {false, true});
    const TrackingParams tp = audit_params(sc.gains, sc.params.M);
    std::vector<LyapunovSample> window;
    LyapunovAudit total;
    auto flush = [&] {
        const LyapunovAudit a = lyapunov_decreasing(window, tp, 1e-12);
        total.samples += a.samples;
        total.audited += a.audited;
        total.violations += a.violations;
        total.worstIncrease = std::max(total.worstIncrease, a.worstIncrease);
        window.clear();
    };
    double last = -1.0;
    for (const auto& s : res.tracking) {
        if (!window.empty() && s.t - last > 1.5 * sc.params.dt) flush();
        window.push_back({s.Delta, s.delta});
        last = s.t;
    }
    flush();
    const bool pass = total.samples > 0 && total.violations == 0;
    report(4, pass,
           format("tracking samples %zu, audited in certified band %zu, violations %zu (worst %.3g)", total.samples,
                  total.audited, total.violations, total.worstIncrease));
}

void negativeControls() {
    const RunVerdict b = run(preset("fig1b"), {false, false}).verdict;
    const RunVerdict d = run(preset("fig1d"), {false, false}).verdict;
    const bool pass = b.outcome == Outcome::Collided &&
                      (d.outcome == Outcome::TrackingLost || d.outcome == Outcome::Collided);
    report(5, pass, format("fig1b %s, fig1d %s", toString(b.outcome), toString(d.outcome)));
}

void freeSpace() {
    const double M = 5.0, eps = 0.151, d0 = 0.06;
    const FreeSpace derived = free_space_requirements(M, eps, d0, derived_gamma_over_rate(M, eps, d0));
    const FreeSpace slow = free_space_requirements(M, eps, d0, SimParams{}.gammaOverRate);
    const bool pass = near(derived.lockingTube, 0.7806, 1e-4) && derived.lockingTubeInsideR0 &&
                      near(derived.unlockingDepth, 0.629, 1e-3) && derived.unlockingContained &&
                      !slow.unlockingContained;
    report(6, pass,
           format("tube %.4f r0, unlock depth %.4f r0, contained (derived gamma) %s, flagged (slow sensor) %s",
                  derived.lockingTube, derived.unlockingDepth, derived.unlockingContained ? "yes" : "no",
                  slow.unlockingContained ? "no" : "yes"));
}

void stepInvariants() {
    double speed = 0.0, gap = 0.0;
    bool bounds = true;
    for (const auto& name : preset_names()) {
        const Scenario sc = preset(name);
        const RunVerdict v = run(sc, {false, false}).verdict;
        speed = std::max(speed, v.maxSpeedError / sc.params.v0);
        gap = std::max(gap, v.maxPlanGap / sc.params.r0);
        bounds = bounds && v.maxAbsU <= sc.params.M && v.maxAbsUs <= sc.params.gamma();
    }
    Scenario sc = preset("fig1a");
    sc.noise.seed = 7;
    const RunResult a = run(sc);
    const RunResult b = run(sc);
    bool identical = a.trace.size() == b.trace.size();
    for (std::size_t i = 0; identical && i < a.trace.size(); ++i) {
        identical = trace_csv_row(a.trace[i]) == trace_csv_row(b.trace[i]);
    }
    const bool pass = speed < 1e-12 && bounds && gap <= 1e-9 && identical;
    report(7, pass,
           format("speed drift %.2e v0, control bounds %s, plan gap %.2e r0, repeat run identical %s", speed,
                  bounds ? "ok" : "violated", gap, identical ? "yes" : "no"));
}

}  // namespace

int main() {
    synthesis();
    noisyConvergence();
    zeroNoiseTracking();
    lyapunovAudit();
    negativeControls();
    freeSpace();
    stepInvariants();
    return failures == 0 ? 0 : 1;
}
