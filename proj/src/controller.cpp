#include "obnav/controller.hpp"

#include "obnav/errors.hpp"

#include <algorithm>
#include <cmath>

namespace obnav {

namespace {

double realignCommand(const SensorState& sensor, const SimParams& params) {
    const double g = params.gamma();
    return std::clamp(-sensor.phi / params.dt, -g, g);
}

Submode lockSubmode(std::size_t segment) {
    switch (segment) {
        case 0: return Submode::Circ1;
        case 1: return Submode::Line;
        default: return Submode::Circ2;
    }
}

struct PlanCommand {
    double u{0.0};
    Submode submode{Submode::None};
};

/// Follow the plan segment active at plan time `t`; after the end keep the
/// final heading on a straight line through the plan's last point.
PlanCommand followPlan(const NominalTrajectory& plan, const AgentState& agent, double t, bool locking,
                       const ControllerConfig& cfg) {
    const double r0 = cfg.params.r0;
    PlanCommand out;
    if (t >= plan.totalTime()) {
        const Segment& last = plan.segments.back();
        const Offsets off = offsets_vs_line(agent, last.end(), last.endHeading(), r0);
        out.u = u_int(off.Delta, off.delta, cfg.gains);
        out.submode = locking ? Submode::Circ2 : Submode::SensorRealign;
        return out;
    }
    const std::size_t idx = plan.segmentAtTime(t);
    const Segment& seg = plan.segments[idx];
    if (seg.kind == Segment::Kind::Arc) {
        const Offsets off = offsets_vs_arc(agent, seg, r0);
        out.u = u_cir(off.Delta, off.delta, seg.turn(), cfg.gains);
    } else {
        const Offsets off = offsets_vs_line(agent, seg.start, seg.heading, r0);
        out.u = u_int(off.Delta, off.delta, cfg.gains);
    }
    out.submode = locking ? lockSubmode(idx) : (idx == 0 ? Submode::Circ1 : Submode::Circ2);
    return out;
}

Offsets attractionOffsets(const ControllerState& ctrl, const AgentState& agent, double r0) {
    return offsets_vs_line(agent, ctrl.line.anchor, ctrl.line.direction.angle(), r0);
}

void enterLock(ControllerState& s, const AgentState& agent, const SensorState& sensor, const Measurement& m,
               const ControllerConfig& cfg) {
    const SimParams& p = cfg.params;
    const Gains& g = cfg.gains;
    const Vec2 ray = ray_direction(agent, sensor);
    const Vec2 impact = agent.x + ray * m.d;
    const Vec2 fdot = rotate(ray, *m.psi);
    s.orient = dot(fdot, agent.v) >= 0.0 ? 1 : -1;
    const Vec2 tangent = fdot * static_cast<double>(s.orient);
    const bool agentOnLeft = cross(tangent, agent.x - impact) > 0.0;
    const Vec2 outward = agentOnLeft ? tangent.perp() : -tangent.perp();
    s.side = agentOnLeft ? 1 : -1;
    s.frozen = FrozenImpact{impact, tangent, outward};

    const double d0 = g.d0 * p.r0;
    LockingRequest req;
    req.start = {agent.x, agent.heading()};
    req.impact = impact + tangent * (d0 * std::sin(g.lockTilt));
    req.tangent = tangent;
    req.outward = outward;
    req.standoff = d0 * std::cos(g.lockTilt);
    req.turnRadius = g.turnRadius(p.r0);
    req.speed = p.v0;
    s.plan = plan_locking(req);
    s.t1hat = s.plan->totalTime();
}

void enterUnlock(ControllerState& s, const AgentState& agent, const SensorState& sensor, const Measurement& m,
                 const ControllerConfig& cfg) {
    const SimParams& p = cfg.params;
    const Vec2 ray = ray_direction(agent, sensor);
    const Vec2 impact = agent.x + ray * m.d;
    s.frozen = FrozenImpact{impact, s.frozen ? s.frozen->tangent : Vec2{}, s.frozen ? s.frozen->outward : Vec2{}};

    UnlockingRequest req;
    req.start = {agent.x, agent.heading()};
    req.line = s.line;
    req.awayTurn = s.side;
    req.turnRadius = cfg.gains.turnRadius(p.r0);
    req.speed = p.v0;
    s.plan = plan_unlocking(req);
    const Segment& last = s.plan->segments.back();
    const double phiEnd = signedAngle(unitFromAngle(last.endHeading()), impact - last.end());
    s.t3hat = s.plan->totalTime() + std::abs(phiEnd) / p.gamma();
}

}  // namespace

double sgn_bl(double s, double sigma) {
    if (sigma <= 0.0) return static_cast<double>(signOf(s));
    return std::clamp(s / sigma, -1.0, 1.0);
}

double u_att(double Delta, double delta, const Gains& g) { return -g.attHeading * delta - g.attOffset * Delta; }

double u_cir(double Delta, double delta, int turn, const Gains& g) {
    const double t = static_cast<double>(turn);
    return -g.M * t * sgn_bl(t * delta - g.cirSlope * Delta, g.sigma);
}

double u_int(double Delta, double delta, const Gains& g) { return -g.intHeading * delta - g.intQ2 * Delta; }

double u_tr(double d, double psi, const Gains& g) {
    const double depthErr = d - g.d0;
    const double angleErr = psi - g.psiCenter;
    const double s = g.surface == TrackingSurface::LyapunovGradient ? g.cPsi * depthErr - g.cDelta * angleErr
                                                                    : g.cDelta * depthErr - g.cPsi * angleErr;
    return -g.M * sgn_bl(s, g.sigma);
}

const char* toString(Mode m) {
    switch (m) {
        case Mode::Attract: return "attract";
        case Mode::Lock: return "lock";
        case Mode::Track: return "track";
        case Mode::Unlock: return "unlock";
        case Mode::Stopped: return "stopped";
    }
    return "?";
}

const char* toString(Submode s) {
    switch (s) {
        case Submode::None: return "";
        case Submode::Circ1: return "circ1";
        case Submode::Line: return "line";
        case Submode::Circ2: return "circ2";
        case Submode::SensorRealign: return "realign";
    }
    return "?";
}

ControllerState ControllerState::initial(const AgentState& agent) {
    ControllerState s;
    s.line = AttractionLine::fromStart(agent.x);
    return s;
}

std::optional<Offsets> tracking_offsets(const ControllerState& ctrl, const Measurement& m,
                                        const ControllerConfig& cfg) {
    if (!m.psi) return std::nullopt;
    double psi = *m.psi;
    if (ctrl.orient < 0) psi = wrapAngle(psi + kPi);
    if (ctrl.side < 0) psi = -psi;
    return Offsets{m.d / cfg.params.r0 - cfg.gains.d0, psi - kPi / 2.0};
}

std::optional<ModeTransition> switch_predicates(const ControllerState& ctrl, const AgentState& agent,
                                                const SensorState& sensor, const Measurement& m,
                                                const ControllerConfig& cfg) {
    const SimParams& p = cfg.params;
    const Gains& g = cfg.gains;
    auto make = [&](Mode to, const char* why) { return ModeTransition{ctrl.mode, to, ctrl.timer, why}; };

    switch (ctrl.mode) {
        case Mode::Attract:
            if (agent.x.norm() < p.epsStop) return make(Mode::Stopped, "target reached");
            if (m.detected()) return make(Mode::Lock, "obstacle detected");
            return std::nullopt;
        case Mode::Lock: {
            if (ctrl.timer < ctrl.t1hat) return std::nullopt;
            const double dist = (agent.x - ctrl.frozen->point).norm() / p.r0;
            const double angle = std::abs(signedAngle(agent.v, ctrl.frozen->tangent));
            if (dist >= g.d0 / 2.0 && dist <= 1.5 * g.d0 && angle <= g.psiM) {
                return make(Mode::Track, "locked");
            }
            if (ctrl.timer >= ctrl.t1hat + g.lockGrace * p.r0 / p.v0) return make(Mode::Attract, "lock aborted");
            return std::nullopt;
        }
        case Mode::Track: {
            if (ctrl.timer < ctrl.t2hat) return std::nullopt;
            if (std::abs(ctrl.line.signedOffset(agent.x)) <= g.DeltaM * p.r0) {
                return make(Mode::Unlock, "attraction line reached");
            }
            return std::nullopt;
        }
        case Mode::Unlock: {
            if (ctrl.timer < ctrl.t3hat) return std::nullopt;
            const Offsets off = attractionOffsets(ctrl, agent, p.r0);
            if (std::abs(off.delta) <= g.deltaM && std::abs(off.Delta) <= g.DeltaM && std::abs(sensor.phi) <= 1e-12) {
                return make(Mode::Attract, "unlocked");
            }
            return std::nullopt;
        }
        case Mode::Stopped:
            return std::nullopt;
    }
    return std::nullopt;
}

ControlOutput controller_step(const ControllerState& ctrl, const AgentState& agent, const SensorState& sensor,
                              const Measurement& m, const ControllerConfig& cfg) {
    const SimParams& p = cfg.params;
    ControlOutput out;
    out.next = ctrl;
    ControllerState& next = out.next;

    switch (ctrl.mode) {
        case Mode::Attract: {
            const Offsets off = attractionOffsets(ctrl, agent, p.r0);
            out.u = u_att(off.Delta, off.delta, cfg.gains);
            out.u_s = realignCommand(sensor, p);
            next.submode = Submode::None;
            break;
        }
        case Mode::Lock:
        case Mode::Unlock: {
            if (!ctrl.plan || !ctrl.frozen) throw Error(ErrorKind::PlanMissing, toString(ctrl.mode));
            const bool locking = ctrl.mode == Mode::Lock;
            const bool realign = !locking && ctrl.timer >= ctrl.plan->totalTime();
            if (realign) {
                const Offsets off = attractionOffsets(ctrl, agent, p.r0);
                out.u = u_att(off.Delta, off.delta, cfg.gains);
                out.u_s = realignCommand(sensor, p);
                next.submode = Submode::SensorRealign;
            } else {
                const PlanCommand cmd = followPlan(*ctrl.plan, agent, ctrl.timer, locking, cfg);
                out.u = cmd.u;
                next.submode = cmd.submode;
                SensorState aim = sensor;
                aim.lockedTarget = ctrl.frozen->point;
                out.u_s = aim_command(agent, aim, out.u, p);
            }
            break;
        }
        case Mode::Track: {
            next.submode = Submode::None;
            const auto off = tracking_offsets(ctrl, m, cfg);
            if (!off) {
                out.trackingLost = true;
                out.stop = true;
                return out;
            }
            const double psi = off->delta + kPi / 2.0;
            out.u = static_cast<double>(ctrl.side) * u_tr(m.d / p.r0, psi, cfg.gains);
            out.u_s = 0.0;
            break;
        }
        case Mode::Stopped:
            out.stop = true;
            return out;
    }

    out.transition = switch_predicates(ctrl, agent, sensor, m, cfg);
    if (!out.transition) {
        next.timer = ctrl.timer + p.dt;
        return out;
    }

    next.timer = 0.0;
    next.switches = ctrl.switches + 1;
    switch (out.transition->to) {
        case Mode::Stopped:
            out.stop = true;
            break;
        case Mode::Lock:
            enterLock(next, agent, sensor, m, cfg);
            next.submode = Submode::Circ1;
            break;
        case Mode::Track:
            next.plan.reset();
            next.frozen.reset();
            next.t2hat = time_to_line_uniform_circular(agent, ctrl.line, p);
            next.submode = Submode::None;
            break;
        case Mode::Unlock:
            enterUnlock(next, agent, sensor, m, cfg);
            next.submode = Submode::Circ1;
            break;
        case Mode::Attract:
            next.plan.reset();
            next.frozen.reset();
            next.submode = Submode::None;
            break;
    }
    next.mode = out.transition->to;
    return out;
}

}  // namespace obnav
