#include "pdc/twinstats.hpp"

#include <cmath>

#include "pdc/error.hpp"
#include "pdc/units.hpp"

namespace pdc {

namespace {

double inverse_modes(double k) { return std::isinf(k) ? 0.0 : 1.0 / k; }

void check_overlap_inputs(double overlap, double mean_n) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw Error(ErrorKind::contract, "overlap must lie in [0, 1]");
  if (!(mean_n >= 0.0)) throw Error(ErrorKind::contract, "mean photon number must be non-negative");
}

// Half the sum of the two efficiency ratios.
double imbalance(double eta1, double eta2) {
  if (!(eta1 > 0.0 && eta2 > 0.0)) {
    throw Error(ErrorKind::degenerate, "efficiency ratio undefined for a zero efficiency");
  }
  return 0.5 * (eta1 / eta2 + eta2 / eta1);
}

}  // namespace

void DetectionSpec::validate() const {
  if (!(eta1 >= 0.0 && eta1 <= 1.0 && eta2 >= 0.0 && eta2 <= 1.0)) {
    throw Error(ErrorKind::contract, "transmissions must lie in [0, 1]");
  }
  if (!(gate_rate > 0.0)) throw Error(ErrorKind::contract, "gate rate must be positive");
  if (!(dark_prob >= 0.0 && dark_prob < 1.0)) throw Error(ErrorKind::contract, "dark probability must lie in [0, 1)");
}

void CountRecord::validate() const {
  if (coincidences > std::min(singles_s, singles_i) || std::max(singles_s, singles_i) > gates) {
    throw Error(ErrorKind::contract, "count record violates C <= min(S_s, S_i) <= gates");
  }
  if (!(gate_rate > 0.0)) throw Error(ErrorKind::contract, "gate rate must be positive");
}

double CountRecord::accidentals() const {
  return static_cast<double>(singles_s) * static_cast<double>(singles_i) / static_cast<double>(gates);
}

CountRecord& CountRecord::operator+=(const CountRecord& other) {
  gates += other.gates;
  singles_s += other.singles_s;
  singles_i += other.singles_i;
  coincidences += other.coincidences;
  return *this;
}

double glauber(double effective_modes, double mean_n, GlauberOrder order) {
  if (!(effective_modes >= 1.0)) throw Error(ErrorKind::contract, "K must be >= 1");
  const double bunched = mean_n * mean_n * (1.0 + inverse_modes(effective_modes));
  switch (order) {
    case GlauberOrder::g10:
    case GlauberOrder::g01:
      return mean_n;
    case GlauberOrder::g20:
    case GlauberOrder::g02:
      return bunched;
    case GlauberOrder::g11:
      return bunched + mean_n;
  }
  throw Error(ErrorKind::contract, "unsupported Glauber order");
}

double glauber(const SchmidtData& schmidt, const GainSpec& gain, GlauberOrder order) {
  return glauber(schmidt.effective_modes, gain.mean_photon_number(schmidt.coefficients), order);
}

CoincidenceRates coincidence_rates(double overlap, double density_overlap, double mean_n,
                                   double eta1, double eta2, double effective_modes) {
  if (eta1 == 0.0 && eta2 == 0.0) {
    throw Error(ErrorKind::degenerate, "both arms blocked: no coincidences to compare");
  }
  const double g20 = glauber(effective_modes, mean_n, GlauberOrder::g20);
  const double g11 = glauber(effective_modes, mean_n, GlauberOrder::g11);
  const double interference = mean_n * overlap + mean_n * mean_n * density_overlap;
  CoincidenceRates r;
  r.r_min = 0.25 * g20 * (eta1 * eta1 + eta2 * eta2) + 0.5 * g11 * eta1 * eta2 -
            0.5 * interference * eta1 * eta2;
  r.r_max = g11 * eta1 * eta2;
  return r;
}

CoincidenceRates coincidence_rates(const SchmidtData& schmidt, const GainSpec& gain,
                                   const DetectionSpec& det, double overlap, double density_overlap) {
  return coincidence_rates(overlap, density_overlap, gain.mean_photon_number(schmidt.coefficients),
                           det.eta1, det.eta2, schmidt.effective_modes);
}

double visibility_from_rates(const CoincidenceRates& rates) {
  const double total = rates.r_max + rates.r_min;
  if (!(total > 0.0)) throw Error(ErrorKind::degenerate, "no coincidences: visibility undefined");
  return (rates.r_max - rates.r_min) / total;
}

double visibility_full(double overlap, double mean_n, double eta1, double eta2) {
  check_overlap_inputs(overlap, mean_n);
  const double q = imbalance(eta1, eta2);
  return ((1.0 + overlap) + mean_n * (1.0 - q)) / ((3.0 - overlap) + 3.0 * mean_n + mean_n * q);
}

double visibility_approx(double overlap, double mean_n) {
  check_overlap_inputs(overlap, mean_n);
  return (1.0 + overlap) / (3.0 - overlap + 4.0 * mean_n);
}

KlyshkoEstimate klyshko(const CountRecord& rec) {
  rec.validate();
  if (rec.singles_s == 0 || rec.singles_i == 0 || rec.coincidences == 0) {
    throw Error(ErrorKind::non_physical, "Klyshko efficiency needs non-zero singles and coincidences");
  }
  const auto binomial = [](double c, double s) {
    const double p = c / s;
    return Estimate{p, std::sqrt(p * (1.0 - p) / s)};
  };
  const auto c = static_cast<double>(rec.coincidences);
  return {binomial(c, static_cast<double>(rec.singles_i)), binomial(c, static_cast<double>(rec.singles_s))};
}

Estimate cross_correlation(const CountRecord& rec) {
  rec.validate();
  if (rec.singles_s == 0 || rec.singles_i == 0 || rec.coincidences == 0) {
    throw Error(ErrorKind::non_physical, "cross-correlation needs non-zero singles and coincidences");
  }
  const auto c = static_cast<double>(rec.coincidences);
  const auto ss = static_cast<double>(rec.singles_s);
  const auto si = static_cast<double>(rec.singles_i);
  const double ratio = c / rec.accidentals();
  return {ratio, ratio * std::sqrt(1.0 / c + 1.0 / ss + 1.0 / si)};
}

Estimate mean_n_from_cross(const CountRecord& rec) {
  const Estimate ca = cross_correlation(rec);
  if (!(ca.value > 1.0)) {
    throw Error(ErrorKind::non_physical, "C/A <= 1: record is dominated by uncorrelated background");
  }
  const double n = 1.0 / (ca.value - 1.0);
  return {n, n * n * ca.sigma};
}

std::vector<double> fringe_curve(const FringeModel& m, const std::vector<double>& hwp_angles_deg) {
  const CoincidenceRates r =
      coincidence_rates(m.overlap, m.density_overlap, m.mean_n, m.eta1, m.eta2, m.effective_modes);
  std::vector<double> out;
  out.reserve(hwp_angles_deg.size());
  for (double theta : hwp_angles_deg) {
    if (!std::isfinite(theta)) throw Error(ErrorKind::contract, "HWP angles must be finite");
    const double s = std::sin(4.0 * units::rad(theta - m.splitting_angle_deg));
    out.push_back(r.r_max - s * s * (r.r_max - r.r_min));
  }
  return out;
}

}  // namespace pdc
