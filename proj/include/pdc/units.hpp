#pragma once

// Working units: lengths in um, times in ps, angular frequencies in rad/ps.
// Conversions to nm / THz happen only at the I/O boundary.

#include <cmath>
#include <numbers>

namespace pdc::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Speed of light in nm/ps.
inline constexpr double c_nm_per_ps = 299792.458;

inline constexpr double thz_to_rad_per_ps(double f_thz) { return two_pi * f_thz; }
inline constexpr double rad_per_ps_to_thz(double w) { return w / two_pi; }

/// Vacuum wavelength (nm) of an absolute angular frequency (rad/ps).
inline double wavelength_nm(double omega) { return two_pi * c_nm_per_ps / omega; }

/// Absolute angular frequency (rad/ps) of a vacuum wavelength (nm).
inline double omega_from_wavelength(double lambda_nm) {
  return two_pi * c_nm_per_ps / lambda_nm;
}

/// Small-interval conversion at a center wavelength: dOmega = 2 pi c dLambda / lambda^2.
inline double nm_width_to_rad_per_ps(double width_nm, double center_nm) {
  return two_pi * c_nm_per_ps * width_nm / (center_nm * center_nm);
}

inline double rad_per_ps_width_to_nm(double width, double center_nm) {
  return width * center_nm * center_nm / (two_pi * c_nm_per_ps);
}

inline double deg(double rad) { return rad * 180.0 / pi; }
inline double rad(double degrees) { return degrees * pi / 180.0; }

}  // namespace pdc::units
