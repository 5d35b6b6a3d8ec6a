#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdc/twinstats.hpp"

namespace pdc {

/// How the pair number per gate is drawn.
///  - per_mode: independent thermal draws for every Schmidt mode (exact).
///  - thermal_mixture: one negative-binomial draw with the same mean and
///    second factorial moment as the multimode sum.
///  - automatic: per_mode when few modes carry the weight.
enum class SamplingMode { automatic, per_mode, thermal_mixture };

/// Modes kept for per-mode sampling cover this fraction of the weight.
inline constexpr double kPerModeWeight = 1.0 - 1e-4;
/// automatic picks per-mode sampling up to this many retained modes.
inline constexpr std::size_t kPerModeLimit = 16;
/// Above this mean occupation per mode the click detectors saturate.
inline constexpr double kSaturationOccupation = 0.9;

struct SimConfig {
  std::vector<double> schmidt_coefficients;  // lambda_k
  double gain = 0.0;                         // B
  DetectionSpec detection;
  std::uint64_t gates = 0;
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;  // independent substream id, e.g. per sweep point
  double laser_rep_rate = 76.2e6;  // Hz
  unsigned gate_divisor = 64;
  SamplingMode sampling = SamplingMode::automatic;

  double gate_rate() const { return laser_rep_rate / gate_divisor; }
  void validate() const;
};

struct SimResult {
  CountRecord record;
  SamplingMode sampling = SamplingMode::automatic;  // resolved mode
  double mean_n = 0.0;           // sum sinh^2(B lambda_k)
  double effective_modes = 1.0;  // K of the spectrum
  std::vector<std::string> warnings;
};

/// Gated click-detector simulation of the multimode twin beam.
/// Bit-exact for a given config regardless of the thread count.
SimResult simulate(const SimConfig& cfg);

/// Uniform Schmidt spectrum of `modes` equal coefficients.
std::vector<double> flat_spectrum(std::size_t modes);

/// Gain B giving mean photon number n for the spectrum.
double gain_for_mean_n(const std::vector<double>& coefficients, double mean_n);

struct SweepRow {
  double power = 0.0;
  double mean_n_true = 0.0;
  CountRecord record;
  Estimate ratio_s;  // C / S_s
  Estimate ratio_i;  // C / S_i
  Estimate mean_n;   // from C / A
};

/// Simulates one record per pump power with B^2 = gain_sq_per_power * power.
/// Point j uses substream cfg.stream + j + 1.
std::vector<SweepRow> efficiency_sweep(const SimConfig& cfg, const std::vector<double>& powers,
                                       double gain_sq_per_power);

/// Zero-power intercepts of C/S_i (eta_s) and C/S_s (eta_i), weighted fits.
KlyshkoEstimate extrapolate_klyshko(const std::vector<SweepRow>& rows);

}  // namespace pdc
