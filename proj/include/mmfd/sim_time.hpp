#pragma once

#include <compare>
#include <cstdint>

namespace mmfd {

/// Virtual time in integer nanoseconds. All MAC timing parameters (SIFS,
/// DIFS, slot) and frame airtimes are exactly representable; frame airtimes
/// are rounded up to the next nanosecond when they are not integral.
struct SimTime {
    std::int64_t ns = 0;

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime operator+(std::int64_t d) const { return SimTime{ns + d}; }
    constexpr SimTime operator-(std::int64_t d) const { return SimTime{ns - d}; }
    constexpr std::int64_t operator-(SimTime other) const { return ns - other.ns; }
    constexpr SimTime& operator+=(std::int64_t d) { ns += d; return *this; }
};

constexpr std::int64_t nanoseconds(std::int64_t v) { return v; }
constexpr std::int64_t microseconds(std::int64_t v) { return v * 1000; }
constexpr std::int64_t milliseconds(std::int64_t v) { return v * 1000 * 1000; }
constexpr std::int64_t seconds_ns(double s) { return static_cast<std::int64_t>(s * 1e9 + 0.5); }

inline double ns_to_seconds(std::int64_t ns) { return static_cast<double>(ns) * 1e-9; }

} // namespace mmfd
