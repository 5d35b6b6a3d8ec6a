#include "pdc/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdc/error.hpp"
#include "pdc/units.hpp"

namespace pdc {

namespace {

// sinc(x) = 1/sqrt(2) at x = 1.391557..., so |sinc(L dk / 2)|^2 has full
// width 4 * 1.391557 / L in dk.
constexpr double kSincHalfIntensityArg = 1.3915573782515103;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Intensity FWHM of the phasematching function in dk (rad/um).
double pm_intensity_fwhm_dk(const DeviceSpec& spec, PmApproximation approx) {
  if (approx == PmApproximation::sinc) return 4.0 * kSincHalfIntensityArg / spec.length_um;
  // exp(-gamma L^2 dk^2 / 2) = 1/2
  return 2.0 * std::sqrt(2.0 * std::log(2.0) / spec.gamma) / spec.length_um;
}

void check_resolution(const DeviceSpec& spec, const PumpSpec& pump,
                      const FrequencyGrid& grid, PmApproximation approx) {
  const double pump_width = pump.intensity_fwhm();
  const double pm_dk = pm_intensity_fwhm_dk(spec, approx);
  struct AxisCheck {
    const char* name;
    double step;
    double kappa;
  };
  for (const AxisCheck& a : {AxisCheck{"signal", grid.step_s(), spec.signal.kappa},
                             AxisCheck{"idler", grid.step_i(), spec.idler.kappa}}) {
    double narrowest = pump_width;
    if (a.kappa != 0.0) narrowest = std::min(narrowest, pm_dk / std::abs(a.kappa));
    const double points = narrowest / a.step;
    if (points < kMinPointsPerWidth) {
      std::ostringstream os;
      os << "grid under-resolves the JSA along the " << a.name << " axis: "
         << points << " points across the narrowest width " << narrowest
         << " rad/ps (need " << kMinPointsPerWidth << ")";
      throw Error(ErrorKind::resolution, os.str());
    }
  }
}

}  // namespace

PumpSpec PumpSpec::from_fwhm_nm(double fwhm_nm, double center_nm) {
  if (!(fwhm_nm > 0.0 && center_nm > 0.0)) {
    throw Error(ErrorKind::contract, "pump FWHM and center wavelength must be positive");
  }
  // |exp(-x^2/s^2)|^2 has FWHM s sqrt(2 ln 2).
  const double fwhm = units::nm_width_to_rad_per_ps(fwhm_nm, center_nm);
  return PumpSpec{fwhm / std::sqrt(2.0 * std::log(2.0))};
}

double PumpSpec::intensity_fwhm() const { return sigma * std::sqrt(2.0 * std::log(2.0)); }

std::vector<double> FrequencyGrid::axis_s() const {
  std::vector<double> v(n_s);
  for (std::size_t j = 0; j < n_s; ++j) v[j] = nu_s(j);
  return v;
}

std::vector<double> FrequencyGrid::axis_i() const {
  std::vector<double> v(n_i);
  for (std::size_t j = 0; j < n_i; ++j) v[j] = nu_i(j);
  return v;
}

void FrequencyGrid::validate() const {
  if (n_s < 2 || n_i < 2) throw Error(ErrorKind::contract, "grid needs at least 2 points per axis");
  if (!(span_s > 0.0 && span_i > 0.0)) throw Error(ErrorKind::contract, "grid spans must be positive");
}

JointAmplitude::JointAmplitude(FrequencyGrid grid, Eigen::MatrixXcd values, bool normalized)
    : grid_(grid), values_(std::move(values)), normalized_(normalized) {
  if (static_cast<std::size_t>(values_.rows()) != grid_.n_s ||
      static_cast<std::size_t>(values_.cols()) != grid_.n_i) {
    throw Error(ErrorKind::shape, "amplitude matrix does not match its grid");
  }
}

double JointAmplitude::norm_squared() const {
  return values_.squaredNorm() * grid_.cell_area();
}

JointAmplitude JointAmplitude::renormalized() const {
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw Error(ErrorKind::range, "cannot normalize a vanishing amplitude");
  }
  return JointAmplitude(grid_, values_ / std::sqrt(n2), true);
}

double pump_envelope(const PumpSpec& pump, double nu_s, double nu_i) {
  const double sum = nu_s + nu_i;
  return std::exp(-sum * sum / (pump.sigma * pump.sigma));
}

cplx pm_function(const DeviceSpec& spec, double nu_s, double nu_i, PmApproximation approx) {
  const double half_phase = 0.5 * spec.length_um * delta_k(spec, nu_s, nu_i);
  const double magnitude = approx == PmApproximation::sinc
                               ? sinc(half_phase)
                               : std::exp(-spec.gamma * half_phase * half_phase);
  return std::polar(1.0, half_phase) * magnitude;
}

JointAmplitude build_jsa(const DeviceSpec& spec, const PumpSpec& pump,
                         const FrequencyGrid& grid, PmApproximation approx) {
  spec.validate();
  grid.validate();
  if (!(pump.sigma > 0.0)) throw Error(ErrorKind::contract, "pump width must be positive");
  check_resolution(spec, pump, grid, approx);

  const auto rows = static_cast<Eigen::Index>(grid.n_s);
  const auto cols = static_cast<Eigen::Index>(grid.n_i);
  Eigen::MatrixXcd values(rows, cols);
  // Column-major storage: fill one idler column per iteration.
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < cols; ++c) {
    const double nu_i = grid.nu_i(static_cast<std::size_t>(c));
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double nu_s = grid.nu_s(static_cast<std::size_t>(r));
      values(r, c) = pump_envelope(pump, nu_s, nu_i) * pm_function(spec, nu_s, nu_i, approx);
    }
  }
  return JointAmplitude(grid, std::move(values), false).renormalized();
}

void FilterSpec::validate() const {
  if (!(bandwidth > 0.0)) throw Error(ErrorKind::contract, "filter bandwidth must be positive");
  if (order < 1) throw Error(ErrorKind::contract, "super-Gaussian order must be >= 1");
}

double filter_transmission(const FilterSpec& filter, double nu) {
  const double x = 2.0 * (nu - filter.center) / filter.bandwidth;
  switch (filter.shape) {
    case FilterShape::rectangular:
      return std::abs(x) <= 1.0 ? 1.0 : 0.0;
    case FilterShape::gaussian:
      return std::exp(-std::log(2.0) * x * x);
    case FilterShape::supergaussian:
      return std::exp(-std::log(2.0) * std::pow(std::abs(x), 2 * filter.order));
  }
  return 0.0;
}

FilteredJsa apply_filter(const JointAmplitude& jsa, const FilterSpec& filter) {
  filter.validate();
  if (!jsa.normalized()) throw Error(ErrorKind::contract, "apply_filter expects a normalized JSA");
  const FrequencyGrid& g = jsa.grid();
  const bool on_signal = filter.applies_to != FilterAxes::idler;
  const bool on_idler = filter.applies_to != FilterAxes::signal;
  const double coarsest = std::max(on_signal ? g.step_s() : 0.0, on_idler ? g.step_i() : 0.0);
  if (filter.bandwidth < 2.0 * coarsest) {
    throw Error(ErrorKind::resolution, "filter bandwidth is narrower than two grid steps");
  }

  Eigen::VectorXd ts = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(g.n_s));
  Eigen::VectorXd ti = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(g.n_i));
  if (on_signal) {
    for (std::size_t j = 0; j < g.n_s; ++j) {
      ts(static_cast<Eigen::Index>(j)) = std::sqrt(filter_transmission(filter, g.nu_s(j)));
    }
  }
  if (on_idler) {
    for (std::size_t j = 0; j < g.n_i; ++j) {
      ti(static_cast<Eigen::Index>(j)) = std::sqrt(filter_transmission(filter, g.nu_i(j)));
    }
  }
  Eigen::MatrixXcd filtered = ts.asDiagonal() * jsa.values() * ti.asDiagonal();
  JointAmplitude raw(g, std::move(filtered), false);
  const double fraction = raw.norm_squared();
  if (!(fraction > 0.0)) {
    throw Error(ErrorKind::range, "filter blocks the whole JSA; nothing to renormalize");
  }
  return FilteredJsa{raw.renormalized(), fraction, fraction < kNegligibleTransmission};
}

Marginals marginals(const JointAmplitude& jsa) {
  const Eigen::MatrixXd intensity = jsa.values().cwiseAbs2();
  const double total = intensity.sum();
  Marginals m;
  m.signal.resize(jsa.grid().n_s);
  m.idler.resize(jsa.grid().n_i);
  const Eigen::VectorXd rows = intensity.rowwise().sum() / total;
  const Eigen::VectorXd cols = intensity.colwise().sum().transpose() / total;
  for (Eigen::Index j = 0; j < rows.size(); ++j) m.signal[static_cast<std::size_t>(j)] = rows(j);
  for (Eigen::Index j = 0; j < cols.size(); ++j) m.idler[static_cast<std::size_t>(j)] = cols(j);
  return m;
}

double fwhm(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw Error(ErrorKind::shape, "fwhm needs matching arrays of at least 3 samples");
  }
  const auto peak = static_cast<std::size_t>(std::distance(y.begin(), std::max_element(y.begin(), y.end())));
  const double half = 0.5 * y[peak];
  if (!(half > 0.0)) throw Error(ErrorKind::range, "fwhm of an all-zero profile");

  std::size_t l = peak;
  while (l > 0 && y[l - 1] >= half) --l;
  std::size_t r = peak;
  while (r + 1 < y.size() && y[r + 1] >= half) ++r;
  if (l == 0 || r + 1 == y.size()) {
    throw Error(ErrorKind::range, "no half-maximum crossing inside the sampled range");
  }
  const auto cross = [&](std::size_t inside, std::size_t outside) {
    const double t = (y[inside] - half) / (y[inside] - y[outside]);
    return x[inside] + t * (x[outside] - x[inside]);
  };
  return cross(r, r + 1) - cross(l, l - 1);
}

double centroid(const std::vector<double>& x, const std::vector<double>& weights) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    num += x[j] * weights[j];
    den += weights[j];
  }
  if (!(den > 0.0)) throw Error(ErrorKind::range, "centroid of zero weights");
  return num / den;
}

double jsi_linewidth(const JointAmplitude& jsa, CutAxis axis) {
  // Walk the signal nodes; the idler coordinate is +-nu_s, interpolated
  // linearly between idler nodes (exact node hits on a square grid).
  const FrequencyGrid& g = jsa.grid();
  const double sign = axis == CutAxis::antidiagonal ? 1.0 : -1.0;
  std::vector<double> t;
  std::vector<double> intensity;
  for (std::size_t j = 0; j < g.n_s; ++j) {
    const double nu_s = g.nu_s(j);
    const double nu_i = sign * nu_s;
    const double pos = (nu_i + g.span_i) / g.step_i();
    if (pos < -1e-9 || pos > static_cast<double>(g.n_i - 1) + 1e-9) continue;
    const double clamped = std::clamp(pos, 0.0, static_cast<double>(g.n_i - 1));
    auto lo = static_cast<std::size_t>(std::floor(clamped));
    if (lo == g.n_i - 1) lo = g.n_i - 2;
    const double w = clamped - static_cast<double>(lo);
    const auto r = static_cast<Eigen::Index>(j);
    const double a = std::norm(jsa.values()(r, static_cast<Eigen::Index>(lo)));
    const double b = std::norm(jsa.values()(r, static_cast<Eigen::Index>(lo + 1)));
    t.push_back(std::sqrt(2.0) * nu_s);
    intensity.push_back((1.0 - w) * a + w * b);
  }
  return fwhm(t, intensity);
}

}  // namespace pdc
