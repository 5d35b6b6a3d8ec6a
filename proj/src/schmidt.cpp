#include "pdc/schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/minima.hpp>

#include "pdc/error.hpp"
#include "pdc/units.hpp"

namespace pdc {

namespace {

void require_square(const FrequencyGrid& g, const char* what) {
  if (!g.is_square()) {
    throw Error(ErrorKind::shape, std::string(what) + " needs a square grid (n_s = n_i, equal spans)");
  }
}

// <phi_n | psi_k> on the shared axis.
Eigen::MatrixXcd cross_overlaps(const SchmidtData& data, Eigen::Index terms) {
  const double step = data.grid.step_s();
  return data.signal_modes.leftCols(terms).adjoint() * data.idler_modes.leftCols(terms) * step;
}

// h[m] = sum_{s - i = m} f(s, i) conj(f(i, s)) da, indexed m + n - 1.
std::vector<std::complex<double>> lag_sums(const JointAmplitude& jsa) {
  const Eigen::MatrixXcd& f = jsa.values();
  const Eigen::Index n = f.rows();
  std::vector<std::complex<double>> h(static_cast<std::size_t>(2 * n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index s = 0; s < n; ++s) {
      h[static_cast<std::size_t>(s - i + n - 1)] += f(s, i) * std::conj(f(i, s));
    }
  }
  const double area = jsa.grid().cell_area();
  for (auto& v : h) v *= area;
  return h;
}

std::complex<double> overlap_from_lags(const std::vector<std::complex<double>>& h,
                                       double step, double tau) {
  const auto n = static_cast<std::int64_t>((h.size() + 1) / 2);
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double lag = static_cast<double>(static_cast<std::int64_t>(j) - (n - 1)) * step;
    sum += h[j] * std::polar(1.0, lag * tau);
  }
  return sum;
}

}  // namespace

SchmidtData decompose(const JointAmplitude& jsa, double discarded_weight) {
  if (!jsa.normalized()) throw Error(ErrorKind::contract, "decompose expects a normalized JSA");
  if (!(discarded_weight >= 0.0 && discarded_weight < 1.0)) {
    throw Error(ErrorKind::contract, "discarded weight must lie in [0, 1)");
  }
  const FrequencyGrid& g = jsa.grid();
  const Eigen::MatrixXcd scaled = jsa.values() * std::sqrt(g.cell_area());
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();

  const double total = s.squaredNorm();
  Eigen::Index keep = 0;
  double kept = 0.0;
  while (keep < s.size() && kept < total * (1.0 - discarded_weight)) {
    kept += s(keep) * s(keep);
    ++keep;
  }
  keep = std::max<Eigen::Index>(keep, 1);

  SchmidtData out;
  out.grid = g;
  out.coefficients.resize(static_cast<std::size_t>(keep));
  double fourth = 0.0;
  for (Eigen::Index k = 0; k < keep; ++k) {
    out.coefficients[static_cast<std::size_t>(k)] = s(k);
    fourth += std::pow(s(k), 4);
  }
  out.truncation_residual = s.tail(s.size() - keep).squaredNorm();
  out.effective_modes = 1.0 / fourth;
  // f = U S V^H  =>  phi_k = U_k / sqrt(ds), psi_k = conj(V_k) / sqrt(di).
  out.signal_modes = svd.matrixU().leftCols(keep) / std::sqrt(g.step_s());
  out.idler_modes = svd.matrixV().leftCols(keep).conjugate() / std::sqrt(g.step_i());
  return out;
}

double effective_mode_number(const std::vector<double>& coefficients) {
  double sq = 0.0;
  double fourth = 0.0;
  for (double l : coefficients) {
    sq += l * l;
    fourth += l * l * l * l;
  }
  if (!(fourth > 0.0)) throw Error(ErrorKind::contract, "empty Schmidt spectrum");
  return sq * sq / fourth;
}

std::vector<double> GainSpec::squeezing(const std::vector<double>& coefficients) const {
  std::vector<double> r(coefficients.size());
  std::transform(coefficients.begin(), coefficients.end(), r.begin(),
                 [this](double l) { return gain * l; });
  return r;
}

double GainSpec::mean_photon_number(const std::vector<double>& coefficients) const {
  if (gain < 0.0) throw Error(ErrorKind::contract, "gain must be non-negative");
  double n = 0.0;
  for (double l : coefficients) {
    const double sh = std::sinh(gain * l);
    n += sh * sh;
  }
  return n;
}

std::complex<double> spectral_overlap(const JointAmplitude& jsa) {
  require_square(jsa.grid(), "spectral overlap");
  const Eigen::MatrixXcd& f = jsa.values();
  return (f.array() * f.transpose().array().conjugate()).sum() * jsa.grid().cell_area();
}

std::complex<double> spectral_overlap_schmidt(const SchmidtData& data, std::size_t max_terms) {
  require_square(data.grid, "spectral overlap");
  const auto terms = static_cast<Eigen::Index>(
      max_terms == 0 ? data.rank() : std::min(max_terms, data.rank()));
  const Eigen::MatrixXcd m = cross_overlaps(data, terms);
  Eigen::VectorXd l(terms);
  for (Eigen::Index k = 0; k < terms; ++k) l(k) = data.coefficients[static_cast<std::size_t>(k)];
  const Eigen::MatrixXd weights = l * l.transpose();
  return (weights.cast<std::complex<double>>().array() * m.array() *
          m.transpose().array().conjugate())
      .sum();
}

std::pair<double, double> default_delay_range(const DeviceSpec& spec) {
  const double reach = std::max(3.0 * std::abs(group_delay_mismatch(spec)), 0.1);
  return {-reach, reach};
}

std::complex<double> delayed_overlap(const JointAmplitude& jsa, double tau) {
  require_square(jsa.grid(), "delay-compensated overlap");
  return overlap_from_lags(lag_sums(jsa), jsa.grid().step_s(), tau);
}

DelayCompensation delay_compensated_overlap(const JointAmplitude& jsa, double tau_lo, double tau_hi) {
  require_square(jsa.grid(), "delay-compensated overlap");
  if (!(std::isfinite(tau_lo) && std::isfinite(tau_hi) && tau_lo < tau_hi)) {
    throw Error(ErrorKind::range, "delay range must be a finite, non-empty interval");
  }
  const auto h = lag_sums(jsa);
  const double step = jsa.grid().step_s();
  const auto magnitude = [&](double tau) { return std::abs(overlap_from_lags(h, step, tau)); };

  // |O(tau)| is only locally unimodal: bracket the global peak on a scan
  // finer than the inverse spectral extent, then refine inside the bracket.
  const double extent = 2.0 * static_cast<double>(jsa.grid().n_s - 1) * step;
  const double scan_step = std::min(0.25 * units::pi / extent, (tau_hi - tau_lo) / 16.0);
  const auto n_scan = static_cast<std::size_t>(std::ceil((tau_hi - tau_lo) / scan_step)) + 1;
  double best_tau = tau_lo;
  double best = -1.0;
  for (std::size_t j = 0; j < n_scan; ++j) {
    const double tau = std::min(tau_lo + static_cast<double>(j) * scan_step, tau_hi);
    const double v = magnitude(tau);
    if (v > best) {
      best = v;
      best_tau = tau;
    }
  }
  const double lo = std::max(tau_lo, best_tau - scan_step);
  const double hi = std::min(tau_hi, best_tau + scan_step);
  std::uintmax_t max_iter = 200;
  const auto [tau, neg] = boost::math::tools::brent_find_minima(
      [&](double t) { return -magnitude(t); }, lo, hi, 30, max_iter);
  DelayCompensation out;
  if (-neg >= best) {
    out.tau = tau;
  } else {
    out.tau = best_tau;
  }
  out.overlap_complex = overlap_from_lags(h, step, out.tau);
  out.overlap = std::abs(out.overlap_complex);
  return out;
}

double density_overlap(const JointAmplitude& jsa) {
  require_square(jsa.grid(), "density overlap");
  const Eigen::MatrixXcd& f = jsa.values();
  const double d = jsa.grid().step_s();
  // g_s(w, w') = sum_i conj(f(w, i)) f(w', i) d;  g_i(w', w) = sum_s conj(f(s, w')) f(s, w) d.
  const Eigen::MatrixXcd gs = f.conjugate() * f.transpose() * d;
  const Eigen::MatrixXcd gi = f.adjoint() * f * d;
  // sum_{w, w'} gs(w, w') gi(w', w) d^2 = trace(gs gi) d^2
  return (gs.array() * gi.transpose().array()).sum().real() * d * d;
}

double density_overlap_schmidt(const SchmidtData& data) {
  require_square(data.grid, "density overlap");
  const auto terms = static_cast<Eigen::Index>(data.rank());
  const Eigen::MatrixXd m2 = cross_overlaps(data, terms).cwiseAbs2();
  Eigen::VectorXd l2(terms);
  for (Eigen::Index k = 0; k < terms; ++k) {
    const double l = data.coefficients[static_cast<std::size_t>(k)];
    l2(k) = l * l;
  }
  return l2.dot(m2 * l2);
}

}  // namespace pdc
