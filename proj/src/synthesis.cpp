#include "obnav/synthesis.hpp"

#include "obnav/errors.hpp"
#include "obnav/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace obnav {

double TrackingParams::psiCenter() const { return kPi / 2.0 + psi0; }

double p_squared(double q, double phiM, double M, bool signedVariant) {
    double s = std::sin(phiM);
    if (signedVariant) s *= signOf(phiM);
    const double disc = q * q + 4.0 * q / M * s;
    if (disc < 0.0) throw Error(ErrorKind::DegenerateForm, "no real p for this (q, phi_m)");
    return q * q - q * std::sqrt(disc);
}

double max_phi_m(double M) {
    const double root = std::sqrt(2.0 * std::acos(2.0 / M));
    const double eighthRoot = std::pow(8.0, 0.25);
    const double num = (1.0 / (3.0 * M * root) - 1.0 / (eighthRoot * M)) * (1.293 * M * root);
    return num / (1.0 - 5.013 * root);
}

LockingClf locking_clf_params(double eps, double M) {
    if (!(eps > 0.0) || eps > 0.151) {
        std::ostringstream msg;
        msg << "eps = " << eps << " outside (0, 0.151]";
        throw Error(ErrorKind::EpsilonOutOfRange, msg.str());
    }
    LockingClf out;
    out.eps = eps;
    out.p = 2.0 * M / std::sqrt(2.0 + eps);
    out.DeltaBound = eps / (2.0 * M);
    out.deltaBound = eps / std::sqrt(2.0 + eps);
    return out;
}

TrackingParams derive_tracking_params(double M, double eps) {
    if (!(M >= 3.0)) {
        std::ostringstream msg;
        msg << "M = " << M << " < 3";
        throw Error(ErrorKind::InfeasibleM, msg.str());
    }
    TrackingParams tp;
    tp.M = M;
    tp.eps = eps;
    tp.q = -1.0 / (std::pow(8.0, 0.25) * M);
    tp.phiM = max_phi_m(M);
    const double c = std::cos(tp.phiM);
    tp.d0 = c / (3.0 * M);
    tp.psiM = std::acos(2.0 * c / M);
    tp.alpha0 = c / 2.0;
    tp.alpha1 = 3.0 * c / 2.0;
    tp.beta1 = 3.0 * M / 4.0;
    tp.psi0 = 4.0 * std::tan(tp.phiM) / 3.0;
    tp.p2 = p_squared(tp.q, tp.phiM, M);

    const LockingClf lock = locking_clf_params(eps, M);
    tp.pLock = lock.p;
    tp.deltaM = lock.deltaBound;
    tp.DeltaMBound = lock.DeltaBound;

    const ConstraintReport report = check_constraints(tp);
    if (!report.allPass()) {
        std::ostringstream msg;
        msg << "constraint violated for M = " << M << ":";
        for (const auto& ck : report.checks) {
            if (!ck.pass()) msg << ' ' << ck.name << " (slack " << ck.slack() << ')';
        }
        throw Error(ErrorKind::InfeasibleM, msg.str());
    }
    return tp;
}

bool ConstraintReport::allPass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass(); });
}

ConstraintReport check_constraints(const TrackingParams& tp) {
    const double M = tp.M;
    const double c = std::cos(tp.phiM);
    const double s = std::sin(tp.phiM);
    const double alpha0 = (2.0 * c - 3.0 * tp.d0 * M) / 2.0;
    const double alpha1 = (2.0 * c + 3.0 * tp.d0 * M) / 2.0;
    const double beta1 = (2.0 * c + 3.0 * tp.d0 * M) / (2.0 * std::cos(tp.psiM));
    const double psi0 = s / 2.0 * (1.0 / alpha0 + 1.0 / alpha1);

    ConstraintReport report;
    report.checks.push_back({"psi_m > sin(phi_m)/alpha0", tp.psiM, s / alpha0});
    report.checks.push_back({"phi_m > sin(phi_m)/alpha1", tp.phiM, s / alpha1});
    report.checks.push_back({"2cos(phi_m) - 3 d0 M > 0", 2.0 * c - 3.0 * tp.d0 * M, 0.0});
    report.checks.push_back(
        {"2M cos(psi_m) > 2cos(phi_m) - 3 d0 M", 2.0 * M * std::cos(tp.psiM), 2.0 * c - 3.0 * tp.d0 * M});
    report.checks.push_back({"sin(phi_m)/alpha1 - p^2 (M - beta1)/(alpha1 q) > psi0",
                             s / alpha1 - tp.p2 / (alpha1 * tp.q) * (M - beta1), psi0});
    for (auto& ck : report.checks) {
        if (!std::isfinite(ck.lhs) || !std::isfinite(ck.rhs)) ck.lhs = -INFINITY;
    }
    return report;
}

double EllipseRegion::extentDelta() const {
    const double det = a * b - c * c;
    return std::sqrt(level * b / det);
}

double EllipseRegion::extentY() const {
    const double det = a * b - c * c;
    return std::sqrt(level * a / det);
}

RoaRegions roa_regions(const TrackingParams& tp) {
    const double p2 = tp.p2;
    const double q2 = tp.q * tp.q;
    if (!(p2 > q2)) throw Error(ErrorKind::DegenerateForm, "p^2 <= q^2, form is not definite");
    const double t = std::tan(tp.phiM);

    RoaRegions out;
    out.spurious = {EllipseRegion::Role::Spurious, 1.0, p2, tp.q,
                    4.0 * p2 / (9.0 * q2) * (p2 - q2) * t * t};
    const double inner = 2.0 / 3.0 * t + tp.M * p2 / (6.0 * tp.q * std::cos(tp.phiM));
    out.maxRoa = {EllipseRegion::Role::MaxRoa, 1.0, p2, tp.q, p2 * inner * inner};
    out.spuriousInsideMax = out.spurious.level < out.maxRoa.level;
    out.fitsPhysicalBox = out.maxRoa.extentDelta() <= tp.d0 / 2.0 &&
                          out.maxRoa.extentY() <= tp.psiM - tp.psi0;
    return out;
}

double lyapunov_value(double Delta, double delta, const TrackingParams& tp) {
    const double y = delta - tp.psi0;
    return Delta * Delta + tp.p2 * y * y + 2.0 * tp.q * Delta * y;
}

LyapunovAudit lyapunov_decreasing(const std::vector<LyapunovSample>& window,
                                  const TrackingParams& tp, double tolerance) {
    LyapunovAudit audit;
    audit.samples = window.size();
    if (window.size() < 2) return audit;
    const RoaRegions regions = roa_regions(tp);
    for (std::size_t k = 0; k + 1 < window.size(); ++k) {
        const auto& a = window[k];
        const double y = a.delta - tp.psi0;
        if (!regions.maxRoa.contains(a.Delta, y) || regions.spurious.contains(a.Delta, y)) continue;
        ++audit.audited;
        const double increase =
            lyapunov_value(window[k + 1].Delta, window[k + 1].delta, tp) - lyapunov_value(a.Delta, a.delta, tp);
        if (increase > tolerance) {
            ++audit.violations;
            audit.worstIncrease = std::max(audit.worstIncrease, increase);
        }
    }
    return audit;
}

FreeSpace free_space_requirements(double M, double eps, double d0, double gammaOverRate) {
    FreeSpace fs;
    fs.lockingTube = 3.0 * (1.0 + eps) / M + 1.5 * d0;
    fs.unlockingDepth = (std::sqrt(3.0) + 1.0) * (1.0 + eps) / M;
    // pi v0 / gamma with gamma = g a0/v0 gives pi r0 / g.
    fs.sensorArc = kPi / gammaOverRate;
    fs.lockingTubeInsideR0 = fs.lockingTube < 1.0;
    fs.unlockingContained = std::max(fs.unlockingDepth, fs.sensorArc) <= fs.lockingTube;
    return fs;
}

std::array<double, 3> circular_surface_slopes(double pLock) {
    return {3.4, pLock / std::sqrt(2.0), pLock / 2.0};
}

TangencyCheck tangency_check(const TrackingParams& tp) {
    const double M = tp.M;
    const double s = std::sin(tp.phiM);
    const double p2 = tp.p2;
    const double q = tp.q;
    const double mHat = q / (p2 - q * q) * (q * s - (M - tp.beta1) * p2 - tp.alpha1 * q * tp.psi0) / (M - tp.beta1);
    const double cHat = -s / tp.alpha1 + (M - tp.beta1) * p2 / (tp.alpha1 * q);
    const double yStar = -tp.psi0 - cHat;
    const RoaRegions regions = roa_regions(tp);

    TangencyCheck out;
    // Gradient of V at (0, y*) is (2 q y*, 2 p^2 y*); the level curve has dDelta/dy = -p^2/q.
    out.ellipseSlope = -p2 / q;
    out.boundarySlope = mHat;
    out.pointOnEllipse = regions.maxRoa.value(0.0, yStar) - regions.maxRoa.level;
    return out;
}

}  // namespace obnav
