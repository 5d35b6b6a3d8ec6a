#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pdc/dispersion.hpp"
#include "pdc/jsa.hpp"

namespace pdc {

/// Default discarded Schmidt weight (sum of dropped lambda_k^2).
inline constexpr double kDefaultDiscardedWeight = 1e-6;

/// Truncated Schmidt decomposition f(s, i) = sum_k lambda_k phi_k(s) psi_k(i).
/// Mode functions are columns, normalized so that sum |phi|^2 dnu = 1.
struct SchmidtData {
  FrequencyGrid grid;
  std::vector<double> coefficients;  // lambda_k, descending
  Eigen::MatrixXcd signal_modes;     // n_s x rank
  Eigen::MatrixXcd idler_modes;      // n_i x rank
  double effective_modes = 1.0;      // K = 1 / sum lambda^4
  double truncation_residual = 0.0;  // discarded sum lambda^2

  std::size_t rank() const { return coefficients.size(); }
};

/// SVD of the grid amplitude. Keeps the leading modes until the discarded
/// weight is at most `discarded_weight`.
SchmidtData decompose(const JointAmplitude& jsa, double discarded_weight = kDefaultDiscardedWeight);

/// K from an arbitrary coefficient list (normalized internally).
double effective_mode_number(const std::vector<double>& coefficients);

/// Squeezing parameters r_k = B lambda_k of a multimode twin beam.
struct GainSpec {
  double gain = 0.0;  // B

  std::vector<double> squeezing(const std::vector<double>& coefficients) const;
  /// sum_k sinh^2(B lambda_k).
  double mean_photon_number(const std::vector<double>& coefficients) const;
};

/// Overlap O = sum f(s, i) conj(f(i, s)) dnu_s dnu_i. Requires a square grid.
std::complex<double> spectral_overlap(const JointAmplitude& jsa);

/// Same quantity from the Schmidt basis:
/// sum_{n,k} lambda_n lambda_k <phi_n|psi_k> <psi_n|phi_k>, using at most
/// `max_terms` leading modes (0 = all retained).
std::complex<double> spectral_overlap_schmidt(const SchmidtData& data, std::size_t max_terms = 0);

struct DelayCompensation {
  double tau = 0.0;  // ps, applied as exp(i nu_s tau) on the signal axis
  double overlap = 0.0;
  std::complex<double> overlap_complex;
};

/// Scan range used when none is given: +-3 L |kappa_s - kappa_i|, at least +-0.1 ps.
std::pair<double, double> default_delay_range(const DeviceSpec& spec);

/// Maximizes |O(tau)| over [tau_lo, tau_hi] to 1e-4 ps.
DelayCompensation delay_compensated_overlap(const JointAmplitude& jsa, double tau_lo, double tau_hi);

/// Complex overlap after applying exp(i nu_s tau) to the signal axis.
std::complex<double> delayed_overlap(const JointAmplitude& jsa, double tau);

/// A = sum g_s(w, w') g_i(w', w) dw dw' from the spectral density matrices.
double density_overlap(const JointAmplitude& jsa);

/// A = sum_{n,k} lambda_n^2 lambda_k^2 |<phi_n|psi_k>|^2.
double density_overlap_schmidt(const SchmidtData& data);

}  // namespace pdc
