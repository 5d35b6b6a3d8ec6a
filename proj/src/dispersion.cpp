#include "pdc/dispersion.hpp"

#include <cmath>
#include <sstream>

#include "pdc/error.hpp"
#include "pdc/units.hpp"

namespace pdc {

namespace {

void check_kappa(const DispersionTriple& pump, const DispersionTriple& mode,
                 const char* name) {
  if (!pump.group_velocity || !mode.group_velocity) return;
  const double derived = 1.0 / *mode.group_velocity - 1.0 / *pump.group_velocity;
  if (std::abs(derived - mode.kappa) > kKappaConsistencyTolerance) {
    std::ostringstream os;
    os << "kappa_" << name << " = " << mode.kappa
       << " ps/um disagrees with 1/vg_" << name << " - 1/vg_p = " << derived;
    throw Error(ErrorKind::contract, os.str());
  }
}

}  // namespace

void DeviceSpec::validate() const {
  if (!(length_um > 0.0)) throw Error(ErrorKind::contract, "device length must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorKind::contract, "gamma must lie in (0, 1)");
  if (!(signal_center > 0.0 && idler_center > 0.0)) {
    throw Error(ErrorKind::contract, "signal and idler centers must be positive");
  }
  const double mismatch = pump_center - signal_center - idler_center;
  if (std::abs(mismatch) > 1e-9 * pump_center) {
    throw Error(ErrorKind::contract,
                "pump center must equal signal center + idler center");
  }
  for (const auto* m : {&pump, &signal, &idler}) {
    if (m->group_velocity && !(*m->group_velocity > 0.0)) {
      throw Error(ErrorKind::contract, "group velocities must be positive");
    }
  }
  check_kappa(pump, signal, "s");
  check_kappa(pump, idler, "i");
}

double delta_k(const DeviceSpec& spec, double nu_s, double nu_i) {
  return spec.signal.kappa * nu_s + spec.idler.kappa * nu_i +
         spec.signal.lambda_coeff * nu_s * nu_s +
         spec.idler.lambda_coeff * nu_i * nu_i -
         spec.pump.lambda_coeff * nu_s * nu_i;
}

double pm_tilt_deviation(const DeviceSpec& spec) {
  if (spec.idler.kappa == 0.0) {
    throw Error(ErrorKind::degenerate, "kappa_i = 0: phasematching tilt undefined");
  }
  const double theta = std::atan(spec.signal.kappa / spec.idler.kappa);
  return std::abs(45.0 - units::deg(theta));
}

}  // namespace pdc
