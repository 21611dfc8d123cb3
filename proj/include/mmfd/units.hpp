#pragma once

#include <cmath>

namespace mmfd {

/// Power-ratio dB conversions. All internal arithmetic is linear watts.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

inline double dbm_to_watts(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watts_to_dbm(double watts) { return linear_to_db(watts / 1e-3); }

inline double milliwatts(double mw) { return mw * 1e-3; }

} // namespace mmfd
