#pragma once

#include <numbers>

// Internal computation is SI. These helpers are the only place interface
// units (mm, mm/s, grams-force, um, degrees) are converted.
namespace lmprint::units {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

constexpr double mm_to_m(double mm) { return mm * 1e-3; }
constexpr double m_to_mm(double m) { return m * 1e3; }
constexpr double m_to_um(double m) { return m * 1e6; }
constexpr double mm3_to_m3(double mm3) { return mm3 * 1e-9; }
constexpr double m3_to_mm3(double m3) { return m3 * 1e9; }
constexpr double m2_to_mm2(double m2) { return m2 * 1e6; }
constexpr double grams_to_newtons(double g) { return g * 1e-3 * kStandardGravity; }
constexpr double newtons_to_grams(double n) { return n / kStandardGravity * 1e3; }
constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace lmprint::units
