#pragma once
/**
 * @file geometry.hpp
 * @brief Minimal 2D vector type and angle helpers shared by every module.
 */

#include <cmath>
#include <numbers>

namespace obnav {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double X, double Y) : x(X), y(Y) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }
    constexpr bool operator==(const Vec2&) const = default;

    [[nodiscard]] double norm() const { return std::hypot(x, y); }
    [[nodiscard]] constexpr double squaredNorm() const { return x * x + y * y; }
    [[nodiscard]] Vec2 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{};
    }
    /// Rotation by +pi/2 (the matrix S).
    [[nodiscard]] constexpr Vec2 perp() const { return {-y, x}; }
    [[nodiscard]] double angle() const { return std::atan2(y, x); }
};

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }
constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of a x b.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

inline Vec2 unitFromAngle(double a) { return {std::cos(a), std::sin(a)}; }

inline Vec2 rotate(const Vec2& v, double a) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Wrap to (-pi, pi].
inline double wrapAngle(double a) {
    double r = std::remainder(a, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

/// Signed angle that rotates `from` onto `to`, in (-pi, pi].
inline double signedAngle(const Vec2& from, const Vec2& to) {
    return wrapAngle(std::atan2(cross(from, to), dot(from, to)));
}

inline int signOf(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace obnav
