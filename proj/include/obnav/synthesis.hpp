#pragma once
/**
 * @file synthesis.hpp
 * @brief Closed-form gain synthesis for the tracking, locking and unlocking
 *        controllers, plus the certification geometry that goes with it.
 *
 * Everything here is nondimensional: lengths in r0, time in v0/a0.
 *
 * Tracking works on the offsets  Delta = d - d0  and  delta = psi - pi/2  with
 * the sensor held at phi = pi/2 + phi_m, and the control Lyapunov function
 *
 *     V = Delta^2 + p^2 (delta - psi0)^2 + 2 q Delta (delta - psi0).
 *
 * Imposing 3 d0 M = cos(phi_m) and cos(psi_m) = 2 cos(phi_m) / M reduces the
 * constraint system to a choice of q and phi_m; q = -1/(8^(1/4) M) and the
 * largest admissible phi_m are taken, then p^2 follows from the tangency of
 * the Lyapunov ellipse with the inner-approximation boundary lines.
 */

#include <array>
#include <string>
#include <vector>

namespace obnav {

struct LockingClf {
    double eps{0.151};
    double p{0.0};           ///< 2M / sqrt(2 + eps)
    double DeltaBound{0.0};  ///< eps / (2M)
    double deltaBound{0.0};  ///< eps / sqrt(2 + eps)
};

struct TrackingParams {
    double M{5.0};
    double phiM{0.0};
    double psiM{0.0};
    double d0{0.0};
    double psi0{0.0};
    double p2{0.0};  ///< p^2
    double q{0.0};
    double alpha0{0.0};
    double alpha1{0.0};
    double beta1{0.0};  ///< equals beta0
    double eps{0.151};
    double pLock{0.0};
    double deltaM{0.0};        ///< heading tube for locking / attraction, eps/sqrt(2+eps)
    double DeltaMBound{0.0};   ///< offset tube from the locking bound, eps/(2M)
    double DeltaMUsed{0.030};

    // Sliding-surface and linear-law gains.
    [[nodiscard]] double cDelta() const { return p2; }
    [[nodiscard]] double cPsi() const { return -q; }
    [[nodiscard]] double psiCenter() const;
    /// (M - delta_m) / Delta_m with the offset tube used in practice (0.030).
    [[nodiscard]] double attGain() const { return (M - deltaM) / DeltaMUsed; }
    /// Same law using the bound eps/(2M) instead.
    [[nodiscard]] double attGainFromBound() const { return (M - deltaM) / DeltaMBound; }
};

/// Closed-form upper bound on phi_m for the chosen q.
double max_phi_m(double M);

/// Throws Error{InfeasibleM} for M < 3 or when a constraint fails.
TrackingParams derive_tracking_params(double M, double eps = 0.151);

LockingClf locking_clf_params(double eps, double M = 5.0);

struct ConstraintCheck {
    std::string name;
    double lhs{0.0};
    double rhs{0.0};
    [[nodiscard]] double slack() const { return lhs - rhs; }
    [[nodiscard]] bool pass() const { return slack() > 1e-12; }
};

struct ConstraintReport {
    std::vector<ConstraintCheck> checks;
    [[nodiscard]] bool allPass() const;
};

/// Re-evaluates the five tracking constraints from (M, phi_m, psi_m, d0, p, q)
/// using the general definitions of alpha, beta and psi0.
ConstraintReport check_constraints(const TrackingParams& params);

struct EllipseRegion {
    enum class Role { Spurious, MaxRoa };
    Role role{Role::Spurious};
    // Quadratic form a*Delta^2 + b*y^2 + 2c*Delta*y with y = delta - psi0.
    double a{1.0};
    double b{0.0};
    double c{0.0};
    double level{0.0};

    [[nodiscard]] double value(double Delta, double y) const {
        return a * Delta * Delta + b * y * y + 2.0 * c * Delta * y;
    }
    [[nodiscard]] bool contains(double Delta, double y) const { return value(Delta, y) <= level; }
    /// Half-widths of the ellipse along Delta and along y.
    [[nodiscard]] double extentDelta() const;
    [[nodiscard]] double extentY() const;
};

struct RoaRegions {
    EllipseRegion spurious;
    EllipseRegion maxRoa;
    bool spuriousInsideMax{false};
    bool fitsPhysicalBox{false};  ///< |Delta| <= d0/2 and |y| <= psi_m - psi0
};

/// Throws Error{DegenerateForm} when p^2 <= q^2.
RoaRegions roa_regions(const TrackingParams& params);

/// V in (Delta, delta) coordinates, nondimensional.
double lyapunov_value(double Delta, double delta, const TrackingParams& params);

struct LyapunovSample {
    double Delta{0.0};
    double delta{0.0};
};

struct LyapunovAudit {
    std::size_t samples{0};
    std::size_t audited{0};  ///< consecutive pairs with the earlier state in the certified band
    std::size_t violations{0};
    double worstIncrease{0.0};
};

/// Flags every step where V increases by more than `tolerance` while the
/// earlier state is inside the max region and outside the spurious one.
LyapunovAudit lyapunov_decreasing(const std::vector<LyapunovSample>& window,
                                  const TrackingParams& params, double tolerance = 0.0);

struct FreeSpace {
    double lockingTube{0.0};      ///< r0 (3(1+eps)/M + 3 d0/2)
    double unlockingDepth{0.0};   ///< r0 (sqrt3 + 1)(1+eps)/M
    double sensorArc{0.0};        ///< pi v0 / gamma, worst-case sensor realignment
    bool lockingTubeInsideR0{false};
    bool unlockingContained{false};
};

/// Lengths in units of r0; gammaOverRate is gamma in units of a0/v0.
FreeSpace free_space_requirements(double M, double eps, double d0, double gammaOverRate);

/// Slopes of the circular-arc sliding surface: 3.4, p/sqrt2, p/2.
std::array<double, 3> circular_surface_slopes(double pLock);

/// Tangency residual: slope of the max-region ellipse at (Delta = 0, y = y*)
/// minus the boundary-line slope m_hat.
struct TangencyCheck {
    double ellipseSlope{0.0};
    double boundarySlope{0.0};
    double pointOnEllipse{0.0};  ///< V(0, y*) - level
};
TangencyCheck tangency_check(const TrackingParams& params);

/// p^2 from the tangency condition; `signedVariant` uses sin(phi_m) sgn(phi_m).
double p_squared(double q, double phiM, double M, bool signedVariant = false);

}  // namespace obnav
