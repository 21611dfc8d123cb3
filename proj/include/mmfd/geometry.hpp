#pragma once

#include <cmath>
#include <numbers>

namespace mmfd {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Planar node position in meters.
struct Position {
    double x = 0;
    double y = 0;

    bool operator==(const Position&) const = default;
};

inline double distance(Position a, Position b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

/// Absolute bearing of `to` as seen from `from`, normalized to [0, 2*pi).
inline double bearing(Position from, Position to) {
    double a = std::atan2(to.y - from.y, to.x - from.x);
    if (a < 0) a += kTwoPi;
    return a;
}

/// Signed smallest angular difference a - b, normalized to (-pi, pi].
inline double angle_diff(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d > std::numbers::pi) d -= kTwoPi;
    if (d <= -std::numbers::pi) d += kTwoPi;
    return d;
}

} // namespace mmfd
