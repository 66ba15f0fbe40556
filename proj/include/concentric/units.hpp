#pragma once

#include <numbers>

// Internal convention: SI lengths, angular frequencies in rad/s, times in s.
// Everything user-facing is ordinary frequency in MHz, so a reported "X MHz"
// means an angular frequency of 2*pi*X*1e6 rad/s.
namespace concentric::units {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double mhz_to_angular(double mhz) { return kTwoPi * 1e6 * mhz; }
constexpr double angular_to_mhz(double omega) { return omega / (kTwoPi * 1e6); }

constexpr double mm(double v) { return v * 1e-3; }
constexpr double um(double v) { return v * 1e-6; }
constexpr double nm(double v) { return v * 1e-9; }
constexpr double ms(double v) { return v * 1e-3; }

}  // namespace concentric::units
