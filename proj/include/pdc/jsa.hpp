#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pdc/dispersion.hpp"

namespace pdc {

using cplx = std::complex<double>;

/// Gaussian pump field envelope exp(-(nu_s + nu_i)^2 / sigma^2).
struct PumpSpec {
  double sigma = 0.0;  // rad/ps

  /// Pump whose intensity spectrum has the given FWHM (nm) at `center_nm`.
  static PumpSpec from_fwhm_nm(double fwhm_nm, double center_nm);

  /// Intensity FWHM of the envelope in the sum frequency nu_s + nu_i.
  double intensity_fwhm() const;
};

/// Uniform grid of detunings centered on the expansion point.
/// Node j on an axis sits at -span + j * 2 span / (n - 1).
struct FrequencyGrid {
  std::size_t n_s = 0;
  std::size_t n_i = 0;
  double span_s = 0.0;  // half-width, rad/ps
  double span_i = 0.0;

  static FrequencyGrid square(std::size_t n, double span) { return {n, n, span, span}; }

  double step_s() const { return 2.0 * span_s / static_cast<double>(n_s - 1); }
  double step_i() const { return 2.0 * span_i / static_cast<double>(n_i - 1); }
  double nu_s(std::size_t j) const { return -span_s + static_cast<double>(j) * step_s(); }
  double nu_i(std::size_t j) const { return -span_i + static_cast<double>(j) * step_i(); }
  double cell_area() const { return step_s() * step_i(); }
  bool is_square() const { return n_s == n_i && span_s == span_i; }

  std::vector<double> axis_s() const;
  std::vector<double> axis_i() const;

  void validate() const;
};

enum class PmApproximation { sinc, gaussian };

/// Complex joint spectral amplitude sampled on a grid.
/// Rows index the signal axis, columns the idler axis.
class JointAmplitude {
 public:
  JointAmplitude(FrequencyGrid grid, Eigen::MatrixXcd values, bool normalized);

  const FrequencyGrid& grid() const { return grid_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  bool normalized() const { return normalized_; }

  /// Discrete integral of |f|^2 over the grid.
  double norm_squared() const;

  /// Copy rescaled to unit discrete norm. Throws on a zero amplitude.
  JointAmplitude renormalized() const;

 private:
  FrequencyGrid grid_;
  Eigen::MatrixXcd values_;
  bool normalized_;
};

/// Points required across the narrowest spectral feature of the JSA.
inline constexpr double kMinPointsPerWidth = 8.0;

double pump_envelope(const PumpSpec& pump, double nu_s, double nu_i);

cplx pm_function(const DeviceSpec& spec, double nu_s, double nu_i, PmApproximation approx);

/// Normalized JSA pump(nu_s + nu_i) * pm(nu_s, nu_i) on `grid`.
/// Throws pdc::Error(resolution) when the grid samples the pump or the
/// phasematching width with fewer than kMinPointsPerWidth points.
JointAmplitude build_jsa(const DeviceSpec& spec, const PumpSpec& pump,
                         const FrequencyGrid& grid, PmApproximation approx);

enum class FilterShape { gaussian, supergaussian, rectangular };
enum class FilterAxes { signal, idler, both };

/// Band-pass filter. `bandwidth` is the intensity FWHM and `center` a
/// detuning, both in rad/ps. The intensity profile is
/// exp(-ln2 |2 (nu - center) / bandwidth|^(2 order)); order 1 is Gaussian.
struct FilterSpec {
  FilterShape shape = FilterShape::gaussian;
  double center = 0.0;
  double bandwidth = 0.0;
  int order = 4;
  FilterAxes applies_to = FilterAxes::both;

  void validate() const;
};

/// Intensity transmission of the filter at detuning nu.
double filter_transmission(const FilterSpec& filter, double nu);

/// Fractions below this are flagged: the renormalized result is dominated by tails.
inline constexpr double kNegligibleTransmission = 1e-6;

struct FilteredJsa {
  JointAmplitude jsa;
  double transmitted_fraction;  // pair fraction passing the filter
  bool renormalization_flagged;
};

FilteredJsa apply_filter(const JointAmplitude& jsa, const FilterSpec& filter);

struct Marginals {
  std::vector<double> signal;  // probability per grid bin, sums to 1
  std::vector<double> idler;
};

Marginals marginals(const JointAmplitude& jsa);

/// `antidiagonal` is the width of the anti-correlated ridge, measured along
/// the line nu_s = nu_i. `diagonal` is the extent of the ridge, measured
/// along nu_s = -nu_i. Both are returned as path length in rad/ps.
enum class CutAxis { antidiagonal, diagonal };

double jsi_linewidth(const JointAmplitude& jsa, CutAxis axis);

/// Full width at half maximum of a sampled peak, crossings linearly
/// interpolated. Throws pdc::Error(range) if a crossing is missing.
double fwhm(const std::vector<double>& x, const std::vector<double>& y);

/// Intensity-weighted mean of the axis.
double centroid(const std::vector<double>& x, const std::vector<double>& weights);

}  // namespace pdc
