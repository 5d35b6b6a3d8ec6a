#pragma once

#include <optional>

namespace pdc {

/// Dispersion data for one of the three interacting modes.
///
/// `kappa` is the inverse group-velocity mismatch to the pump (ps/um) and is
/// meaningful for signal and idler only. `lambda_coeff` is the second-order
/// coefficient (ps^2/um): the pump entry multiplies the cross term, the
/// signal/idler entries the diagonal terms.
struct DispersionTriple {
  std::optional<double> group_velocity;  // um/ps
  double kappa = 0.0;                    // ps/um
  double lambda_coeff = 0.0;             // ps^2/um
};

/// Waveguide description around the phasematched expansion point.
/// All frequencies are angular (rad/ps).
struct DeviceSpec {
  double length_um = 0.0;
  double gamma = 0.193;
  double pump_center = 0.0;
  double signal_center = 0.0;
  double idler_center = 0.0;
  DispersionTriple pump;
  DispersionTriple signal;
  DispersionTriple idler;

  /// Throws pdc::Error(contract) when an invariant is violated.
  void validate() const;
};

/// Tolerance for the kappa = 1/v_g(mu) - 1/v_g(p) consistency check.
inline constexpr double kKappaConsistencyTolerance = 1e-9;

/// Second-order phase mismatch (rad/um) at detunings nu_s, nu_i (rad/ps).
double delta_k(const DeviceSpec& spec, double nu_s, double nu_i);

/// |45 deg - atan(kappa_s / kappa_i)| in degrees.
double pm_tilt_deviation(const DeviceSpec& spec);

/// Relative group delay of signal and idler accumulated over the device, ps.
inline double group_delay_mismatch(const DeviceSpec& spec) {
  return spec.length_um * (spec.signal.kappa - spec.idler.kappa);
}

}  // namespace pdc
