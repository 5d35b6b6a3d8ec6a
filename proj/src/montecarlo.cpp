#include "pdc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "pdc/error.hpp"
#include "pdc/fit.hpp"
#include "pdc/philox.hpp"

namespace pdc {

namespace {

struct PairSource {
  SamplingMode mode = SamplingMode::per_mode;
  std::vector<double> log_ratio;  // per mode: log(tanh^2 r_k)
  double mean = 0.0;              // thermal mixture
  double shape = 1.0;
};

PairSource make_source(const SimConfig& cfg, SimResult& result) {
  const auto& lambda = cfg.schmidt_coefficients;
  std::vector<double> occupation(lambda.size());
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    const double sh = std::sinh(cfg.gain * lambda[k]);
    occupation[k] = sh * sh;
  }
  result.mean_n = std::accumulate(occupation.begin(), occupation.end(), 0.0);
  result.effective_modes = effective_mode_number(lambda);

  const double peak = *std::max_element(occupation.begin(), occupation.end());
  if (peak > kSaturationOccupation) {
    std::ostringstream os;
    os << "mean occupation " << peak << " of the leading mode exceeds " << kSaturationOccupation
       << ": click-detector saturation invalidates low-gain estimator checks";
    result.warnings.push_back(os.str());
  }

  // Modes sorted by weight, retained up to kPerModeWeight of sum lambda^2.
  std::vector<double> sorted = lambda;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double total = std::inner_product(sorted.begin(), sorted.end(), sorted.begin(), 0.0);
  std::size_t retained = 0;
  double weight = 0.0;
  while (retained < sorted.size() && weight < kPerModeWeight * total) {
    weight += sorted[retained] * sorted[retained];
    ++retained;
  }

  PairSource src;
  src.mode = cfg.sampling;
  if (src.mode == SamplingMode::automatic) {
    src.mode = retained <= kPerModeLimit ? SamplingMode::per_mode : SamplingMode::thermal_mixture;
  }
  if (src.mode == SamplingMode::per_mode) {
    for (std::size_t k = 0; k < retained; ++k) {
      const double t = std::tanh(cfg.gain * sorted[k]);
      if (t > 0.0) src.log_ratio.push_back(std::log(t * t));
    }
  } else {
    double second = 0.0;
    for (double m : occupation) second += m * m;
    src.mean = result.mean_n;
    src.shape = second > 0.0 ? result.mean_n * result.mean_n / second : 1.0;
  }
  result.sampling = src.mode;
  return src;
}

// Pair number of one gate; identical in both arms.
std::uint64_t draw_pairs(const PairSource& src, GateStream& rng) {
  if (src.mode == SamplingMode::per_mode) {
    std::uint64_t n = 0;
    for (double lr : src.log_ratio) {
      n += static_cast<std::uint64_t>(std::floor(std::log(rng.uniform_pos()) / lr));
    }
    return n;
  }
  if (src.mean <= 0.0) return 0;
  std::gamma_distribution<double> gamma(src.shape, src.mean / src.shape);
  const double rate = gamma(rng);
  if (rate <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> poisson(rate);
  return poisson(rng);
}

bool clicks(std::uint64_t photons, double eta, double dark, GateStream& rng) {
  // At least one of `photons` survives binomial thinning with probability 1 - (1 - eta)^N.
  const bool signal = photons > 0 && rng.uniform_pos() > std::pow(1.0 - eta, static_cast<double>(photons));
  const bool dark_event = dark > 0.0 && rng.uniform_pos() <= dark;
  return signal || dark_event;
}

}  // namespace

void SimConfig::validate() const {
  if (gates == 0) throw Error(ErrorKind::contract, "simulation needs at least one gate");
  if (gate_divisor < 1) throw Error(ErrorKind::contract, "gate divisor must be >= 1");
  if (!(laser_rep_rate > 0.0)) throw Error(ErrorKind::contract, "laser repetition rate must be positive");
  if (schmidt_coefficients.empty()) throw Error(ErrorKind::contract, "empty Schmidt spectrum");
  if (!(gain >= 0.0)) throw Error(ErrorKind::contract, "gain must be non-negative");
  for (double l : schmidt_coefficients) {
    if (!(l >= 0.0)) throw Error(ErrorKind::contract, "Schmidt coefficients must be non-negative");
  }
  detection.validate();
}

SimResult simulate(const SimConfig& cfg) {
  cfg.validate();
  SimResult result;
  const PairSource src = make_source(cfg, result);
  const double eta1 = cfg.detection.eta1;
  const double eta2 = cfg.detection.eta2;
  const double dark = cfg.detection.dark_prob;

  std::uint64_t singles_s = 0;
  std::uint64_t singles_i = 0;
  std::uint64_t coincidences = 0;
  const auto gates = static_cast<std::int64_t>(cfg.gates);
#pragma omp parallel for schedule(static) reduction(+ : singles_s, singles_i, coincidences)
  for (std::int64_t g = 0; g < gates; ++g) {
    GateStream rng(cfg.seed, cfg.stream, static_cast<std::uint64_t>(g));
    const std::uint64_t pairs = draw_pairs(src, rng);
    const bool s = clicks(pairs, eta1, dark, rng);
    const bool i = clicks(pairs, eta2, dark, rng);
    singles_s += s;
    singles_i += i;
    coincidences += s && i;
  }
  result.record = CountRecord{cfg.gates, singles_s, singles_i, coincidences, cfg.gate_rate()};
  return result;
}

std::vector<double> flat_spectrum(std::size_t modes) {
  if (modes == 0) throw Error(ErrorKind::contract, "flat spectrum needs at least one mode");
  return std::vector<double>(modes, 1.0 / std::sqrt(static_cast<double>(modes)));
}

double gain_for_mean_n(const std::vector<double>& coefficients, double mean_n) {
  if (!(mean_n >= 0.0)) throw Error(ErrorKind::contract, "mean photon number must be non-negative");
  if (mean_n == 0.0) return 0.0;
  const auto excess = [&](double b) { return GainSpec{b}.mean_photon_number(coefficients) - mean_n; };
  double hi = 1.0;
  while (excess(hi) < 0.0) hi *= 2.0;
  std::uintmax_t iters = 200;
  const auto [lo_b, hi_b] = boost::math::tools::toms748_solve(
      excess, 0.0, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (lo_b + hi_b);
}

std::vector<SweepRow> efficiency_sweep(const SimConfig& cfg, const std::vector<double>& powers,
                                       double gain_sq_per_power) {
  if (!(gain_sq_per_power > 0.0)) throw Error(ErrorKind::contract, "power-to-gain constant must be positive");
  std::vector<SweepRow> rows;
  rows.reserve(powers.size());
  for (std::size_t j = 0; j < powers.size(); ++j) {
    if (!(powers[j] > 0.0)) throw Error(ErrorKind::contract, "pump powers must be positive");
    SimConfig point = cfg;
    point.gain = std::sqrt(gain_sq_per_power * powers[j]);
    point.stream = cfg.stream + static_cast<std::uint32_t>(j) + 1;
    const SimResult sim = simulate(point);
    const CountRecord& rec = sim.record;
    const KlyshkoEstimate k = klyshko(rec);
    SweepRow row;
    row.power = powers[j];
    row.mean_n_true = sim.mean_n;
    row.record = rec;
    row.ratio_s = k.eta_i;  // C / S_s
    row.ratio_i = k.eta_s;  // C / S_i
    row.mean_n = mean_n_from_cross(rec);
    rows.push_back(row);
  }
  return rows;
}

KlyshkoEstimate extrapolate_klyshko(const std::vector<SweepRow>& rows) {
  std::vector<double> x;
  std::vector<double> ys;
  std::vector<double> ss;
  std::vector<double> yi;
  std::vector<double> si;
  for (const SweepRow& r : rows) {
    x.push_back(r.power);
    ys.push_back(r.ratio_i.value);
    ss.push_back(r.ratio_i.sigma);
    yi.push_back(r.ratio_s.value);
    si.push_back(r.ratio_s.sigma);
  }
  const LinearFit fs = linear_fit(x, ys, ss);
  const LinearFit fi = linear_fit(x, yi, si);
  return {{fs.intercept, fs.sigma_intercept}, {fi.intercept, fi.sigma_intercept}};
}

}  // namespace pdc
