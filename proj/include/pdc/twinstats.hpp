#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "pdc/schmidt.hpp"

namespace pdc {

/// End-to-end detection model of the two arms.
struct DetectionSpec {
  double eta1 = 1.0;
  double eta2 = 1.0;
  double gate_rate = 1.0;  // Hz
  double dark_prob = 0.0;  // per gate, per detector

  void validate() const;

  /// Per-gate dark probability for a dark count rate (1/s) at this gate rate.
  static double dark_prob_from_rate(double dark_rate, double gate_rate) { return dark_rate / gate_rate; }
};

/// Accumulated counts over a run of detector gates.
struct CountRecord {
  std::uint64_t gates = 0;
  std::uint64_t singles_s = 0;
  std::uint64_t singles_i = 0;
  std::uint64_t coincidences = 0;
  double gate_rate = 0.0;  // Hz

  void validate() const;

  /// Expected accidental coincidences S_s S_i / gates.
  double accidentals() const;
  double duration_s() const { return static_cast<double>(gates) / gate_rate; }

  CountRecord& operator+=(const CountRecord& other);
  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

struct VisibilityPoint {
  double mean_n = 0.0;
  double visibility = 0.0;
  double sigma = 0.0;
};

struct Estimate {
  double value = 0.0;
  double sigma = 0.0;
};

enum class GlauberOrder { g10, g01, g20, g02, g11 };

/// Normally ordered moments of the multimode twin beam at low gain.
double glauber(double effective_modes, double mean_n, GlauberOrder order);
double glauber(const SchmidtData& schmidt, const GainSpec& gain, GlauberOrder order);

/// Unnormalized coincidence rates per gate for bunching (50:50 splitting)
/// and deterministic separation of signal and idler.
struct CoincidenceRates {
  double r_min = 0.0;
  double r_max = 0.0;
};

inline constexpr double kInfiniteModes = std::numeric_limits<double>::infinity();

/// Rates for overlap O, density overlap A, mean photon number n and K modes.
CoincidenceRates coincidence_rates(double overlap, double density_overlap, double mean_n,
                                   double eta1, double eta2, double effective_modes);
CoincidenceRates coincidence_rates(const SchmidtData& schmidt, const GainSpec& gain,
                                   const DetectionSpec& det, double overlap, double density_overlap);

/// (R_max - R_min) / (R_max + R_min).
double visibility_from_rates(const CoincidenceRates& rates);

/// Multimode visibility including detection imbalance eta1 != eta2.
double visibility_full(double overlap, double mean_n, double eta1, double eta2);

/// Balanced-detection form (1 + O) / (3 - O + 4 n).
double visibility_approx(double overlap, double mean_n);

/// Klyshko heralding efficiencies (C / S_i, C / S_s) with binomial errors.
struct KlyshkoEstimate {
  Estimate eta_s;
  Estimate eta_i;
};

KlyshkoEstimate klyshko(const CountRecord& rec);

/// Normalized cross-correlation C / A with first-order Poisson error.
Estimate cross_correlation(const CountRecord& rec);

/// 1 / (C/A - 1). Underestimates n for finite K since C/A = 1 + 1/K + 1/n.
Estimate mean_n_from_cross(const CountRecord& rec);

/// Coincidence-vs-HWP-angle model. The bunching weight is sin^2(4 (theta -
/// theta0)): theta0 separates signal and idler deterministically (R_max),
/// theta0 + 22.5 deg is the balanced splitter (R_min).
struct FringeModel {
  double overlap = 1.0;
  double density_overlap = 0.0;
  double mean_n = 0.0;
  double eta1 = 1.0;
  double eta2 = 1.0;
  double effective_modes = kInfiniteModes;
  double splitting_angle_deg = 0.0;  // theta0
};

std::vector<double> fringe_curve(const FringeModel& model, const std::vector<double>& hwp_angles_deg);

}  // namespace pdc
