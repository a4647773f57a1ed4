#include "obnav/sim.hpp"

#include "obnav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>

namespace obnav {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const char* toString(Outcome o) {
    switch (o) {
        case Outcome::Converged: return "Converged";
        case Outcome::Collided: return "Collided";
        case Outcome::Timeout: return "Timeout";
        case Outcome::TrackingLost: return "TrackingLost";
    }
    return "?";
}

int exit_code(Outcome o) {
    switch (o) {
        case Outcome::Converged: return 0;
        case Outcome::Collided: return 2;
        case Outcome::Timeout:
        case Outcome::TrackingLost: return 3;
    }
    return 1;
}

std::string trace_csv_header() {
    return "t,x,y,vx,vy,phi,d,psi,mode,submode,u_applied,u_s_applied,V_tracking,min_obstacle_distance";
}

std::string trace_csv_row(const TraceRow& r) {
    std::string out;
    out.reserve(256);
    for (double v : {r.t, r.x, r.y, r.vx, r.vy, r.phi, r.d}) {
        out += fmt(v);
        out += ',';
    }
    if (r.psi) out += fmt(*r.psi);
    out += ',';
    out += toString(r.mode);
    out += ',';
    out += toString(r.submode);
    out += ',';
    out += fmt(r.u_applied);
    out += ',';
    out += fmt(r.u_s_applied);
    out += ',';
    if (r.V_tracking) out += fmt(*r.V_tracking);
    out += ',';
    out += fmt(r.min_obstacle_distance);
    return out;
}

TrackingParams audit_params(const Gains& gains, double M) {
    TrackingParams tp;
    tp.M = M;
    tp.d0 = gains.d0;
    tp.p2 = gains.cDelta;
    tp.q = -gains.cPsi;
    tp.psi0 = gains.psiCenter - kPi / 2.0;
    tp.psiM = gains.psiM;
    tp.eps = gains.eps;
    tp.phiM = max_phi_m(M);
    return tp;
}

RunResult run(const Scenario& sc, const RunOptions& options) {
    const SimParams& p = sc.params;
    if (!(p.dt > 0.0)) throw Error(ErrorKind::NonpositiveDt, "scenario dt must be positive");
    const ControllerConfig cfg{p, sc.gains};
    const TrackingParams tp = audit_params(sc.gains, p.M);
    const double margin = sc.collisionMargin * p.r0;
    const double tMax = sc.maxSimTime * p.r0 / p.v0;
    const int decimation = std::max(1, sc.traceDecimation);

    AgentState agent;
    agent.x = sc.world.start;
    const AttractionLine line = AttractionLine::fromStart(agent.x);
    agent.v = (sc.startHeading ? unitFromAngle(*sc.startHeading) : line.direction) * p.v0;
    SensorState sensor;
    ControllerState ctrl = ControllerState::initial(agent);
    Rng rng(sc.noise.seed);

    RunResult result;
    RunVerdict& v = result.verdict;
    const NearestBoundary first = nearest_boundary_distance(sc.world, agent.x);
    v.minClearance = first.distance;
    double clearance = first.distance;

    for (std::size_t step = 0;; ++step) {
        const Measurement m = sense(agent, sensor, sc.world, sc.noise, rng);
        const ControlOutput out = controller_step(ctrl, agent, sensor, m, cfg);

        std::optional<double> V;
        if (ctrl.mode == Mode::Track) {
            if (const auto off = tracking_offsets(ctrl, m, cfg)) {
                V = lyapunov_value(off->Delta, off->delta, tp);
                if (options.keepTracking) {
                    result.tracking.push_back({agent.t, off->Delta, off->delta, *V, m.d / p.r0, off->delta + kPi / 2.0});
                }
            }
        }

        const double uApplied = std::clamp(out.u, -p.M, p.M);
        const double usApplied = std::clamp(out.u_s, -p.gamma(), p.gamma());
        if (options.keepTrace && (step % decimation == 0 || out.stop)) {
            TraceRow row;
            row.t = agent.t;
            row.x = agent.x.x;
            row.y = agent.x.y;
            row.vx = agent.v.x;
            row.vy = agent.v.y;
            row.phi = sensor.phi;
            row.d = m.d;
            row.psi = m.psi;
            row.mode = ctrl.mode;
            row.submode = out.next.mode == ctrl.mode ? out.next.submode : ctrl.submode;
            row.u_applied = out.stop ? 0.0 : uApplied;
            row.u_s_applied = out.stop ? 0.0 : usApplied;
            row.V_tracking = V;
            row.min_obstacle_distance = clearance;
            result.trace.push_back(row);
        }

        if (out.transition) {
            result.transitions.push_back({agent.t, *out.transition});
            ++v.modeSwitchCount;
            if (out.next.plan) {
                v.maxPlanGap = std::max(v.maxPlanGap, out.next.plan->maxPositionGap());
            }
        }
        if (out.trackingLost) {
            v.outcome = Outcome::TrackingLost;
            break;
        }
        if (out.stop) {
            v.outcome = Outcome::Converged;
            ctrl = out.next;
            break;
        }

        v.maxAbsU = std::max(v.maxAbsU, std::abs(uApplied));
        v.maxAbsUs = std::max(v.maxAbsUs, std::abs(usApplied));
        agent = agent_step(agent, out.u, p.dt, p).state;
        agent.t = static_cast<double>(step + 1) * p.dt;
        sensor = sensor_step(sensor, out.u_s, p.dt, p);
        ctrl = out.next;
        ++v.steps;
        v.maxSpeedError = std::max(v.maxSpeedError, std::abs(agent.v.norm() - p.v0));

        const NearestBoundary nb = nearest_boundary_distance(sc.world, agent.x);
        clearance = nb.distance;
        v.minClearance = std::min(v.minClearance, clearance);
        if (clearance < margin) {
            v.outcome = Outcome::Collided;
            v.obstacle = nb.obstacle;
            break;
        }
        if (agent.t >= tMax) {
            v.outcome = Outcome::Timeout;
            break;
        }
    }
    v.time = agent.t;
    v.finalState = agent;
    v.finalMode = ctrl.mode;
    return result;
}

std::vector<SweepCell> sweep_noise(const Scenario& scenario, const std::vector<double>& depthBoundsOverD0,
                                   const std::vector<double>& angleBoundsDeg, int trials, std::uint64_t baseSeed) {
    if (trials < 1) throw Error(ErrorKind::InvalidArgument, "sweep needs at least one trial per cell");
    std::vector<std::future<SweepCell>> jobs;
    for (double depth : depthBoundsOverD0) {
        for (double angle : angleBoundsDeg) {
            jobs.push_back(std::async(std::launch::async, [=, &scenario] {
                SweepCell cell{depth, angle, trials, 0, 0};
                for (int k = 0; k < trials; ++k) {
                    Scenario sc = scenario;
                    sc.noise.depthBound = depth * sc.gains.d0 * sc.params.r0;
                    sc.noise.angleBound = angle * kPi / 180.0;
                    sc.noise.seed = baseSeed + static_cast<std::uint64_t>(k);
                    const RunVerdict v = run(sc, {false, false}).verdict;
                    if (v.outcome == Outcome::Converged) ++cell.converged;
                    if (v.outcome == Outcome::Collided) ++cell.collided;
                }
                return cell;
            }));
        }
    }
    std::vector<SweepCell> cells;
    cells.reserve(jobs.size());
    for (auto& j : jobs) cells.push_back(j.get());
    return cells;
}

}  // namespace obnav
