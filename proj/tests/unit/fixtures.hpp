#pragma once

#include <cmath>

#include <doctest.h>

#include "pdc/dispersion.hpp"
#include "pdc/error.hpp"
#include "pdc/jsa.hpp"

namespace fixtures {

inline constexpr double kTwoPi = 6.283185307179586;
inline constexpr double kLightNmPerPs = 299792.458;

// Bragg-reflection waveguide with degenerate 193.3 THz twins.
inline pdc::DeviceSpec reference_device(double length_um = 1750.0) {
  pdc::DeviceSpec d;
  d.length_um = length_um;
  d.gamma = 0.193;
  d.pump_center = kTwoPi * 386.6;
  d.signal_center = kTwoPi * 193.3;
  d.idler_center = kTwoPi * 193.3;
  d.signal.kappa = -2.40e-3;
  d.idler.kappa = -2.44e-3;
  d.pump.lambda_coeff = 5.74e-6;
  d.signal.lambda_coeff = -2.16e-6;
  d.idler.lambda_coeff = -2.17e-6;
  return d;
}

// 0.25 nm intensity FWHM at 772 nm: dw = 2 pi c dl / l^2, sigma = dw / sqrt(2 ln 2).
inline pdc::PumpSpec reference_pump() {
  const double dw = kTwoPi * kLightNmPerPs * 0.25 / (772.0 * 772.0);
  return pdc::PumpSpec{dw / std::sqrt(2.0 * std::log(2.0))};
}

// Symmetric device: identical signal/idler dispersion.
inline pdc::DeviceSpec symmetric_device() {
  pdc::DeviceSpec d = reference_device(1000.0);
  d.idler = d.signal;
  return d;
}

// Kind of the pdc::Error thrown by f; fails the test if none is thrown.
template <class F>
pdc::ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const pdc::Error& e) {
    return e.kind();
  }
  FAIL("expected pdc::Error");
  return pdc::ErrorKind::usage;
}

}  // namespace fixtures
