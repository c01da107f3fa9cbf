#pragma once

#include <cmath>
#include <limits>

namespace rnsscompat {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kEarthRadius = 6371000.0;
inline constexpr double kEarthMu = 3.986004418e14;
inline constexpr double kEarthRotationRate = 7.2921159e-5;

// dB quantity meaning "no power": converts to exactly zero linear power.
inline constexpr double kAbsentDb = -std::numeric_limits<double>::infinity();

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Zero maps to kAbsentDb.
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

inline bool is_absent(double db) { return std::isinf(db) && db < 0.0; }

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace rnsscompat
