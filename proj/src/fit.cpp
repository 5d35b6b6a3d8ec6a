#include "pdc/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "pdc/error.hpp"

namespace pdc {

namespace {

constexpr int kMinimizerBits = 40;
constexpr double kBoundaryTolerance = 1e-6;
constexpr double kGradientStep = 1e-6;

void check_points(const std::vector<VisibilityPoint>& points) {
  if (points.size() < 3) throw Error(ErrorKind::ill_posed, "overlap fit needs at least 3 points");
  const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                            [](const auto& a, const auto& b) { return a.mean_n < b.mean_n; });
  if (!(hi->mean_n > lo->mean_n)) {
    throw Error(ErrorKind::ill_posed, "all points share one mean photon number: overlap is not identifiable");
  }
  for (const auto& p : points) {
    if (!(p.sigma > 0.0)) throw Error(ErrorKind::contract, "visibility errors must be positive");
    if (!(p.mean_n >= 0.0)) throw Error(ErrorKind::contract, "mean photon numbers must be non-negative");
  }
}

// Bounded Brent minimization with an evaluation trace for diagnostics.
struct Minimum {
  double x;
  double value;
  unsigned iterations;
};

template <class F>
Minimum minimize(F&& f, double lo, double hi, unsigned cap, const char* what) {
  std::deque<std::pair<double, double>> trace;
  auto traced = [&](double x) {
    const double v = f(x);
    trace.emplace_back(x, v);
    if (trace.size() > 8) trace.pop_front();
    return v;
  };
  std::uintmax_t iters = cap;
  auto [x, v] = boost::math::tools::brent_find_minima(traced, lo, hi, kMinimizerBits, iters);
  if (iters >= cap) {
    std::ostringstream os;
    os << what << " did not converge in " << cap << " iterations; last evaluations:";
    for (const auto& [tx, tv] : trace) os << " (" << tx << ", " << tv << ")";
    throw Error(ErrorKind::convergence, os.str());
  }
  // Brent never evaluates the bracket ends; boundary optima are exact there.
  for (double edge : {lo, hi}) {
    const double fe = f(edge);
    if (fe <= v) {
      x = edge;
      v = fe;
    }
  }
  return {x, v, static_cast<unsigned>(iters)};
}

}  // namespace

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& sigma) {
  if (x.size() != y.size() || (!sigma.empty() && sigma.size() != x.size())) {
    throw Error(ErrorKind::shape, "linear fit inputs differ in length");
  }
  if (x.size() < 2) throw Error(ErrorKind::ill_posed, "linear fit needs at least 2 points");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[j] * sigma[j]);
    sw += w;
    sx += w * x[j];
    sy += w * y[j];
    sxx += w * x[j] * x[j];
    sxy += w * x[j] * y[j];
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0.0)) throw Error(ErrorKind::ill_posed, "linear fit abscissae are all equal");

  LinearFit fit;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  const double mean_y = [&] {
    double m = 0.0;
    for (double v : y) m += v;
    return m / static_cast<double>(y.size());
  }();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double r = y[j] - fit.intercept - fit.slope * x[j];
    const double w = sigma.empty() ? 1.0 : 1.0 / (sigma[j] * sigma[j]);
    fit.chi_square += w * r * r;
    ss_res += r * r;
    ss_tot += (y[j] - mean_y) * (y[j] - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  // Unweighted fits scale the covariance by the residual variance.
  double scale = 1.0;
  if (sigma.empty()) scale = x.size() > 2 ? ss_res / static_cast<double>(x.size() - 2) : 0.0;
  fit.sigma_slope = std::sqrt(scale * sw / det);
  fit.sigma_intercept = std::sqrt(scale * sxx / det);
  return fit;
}

double VisibilityModel::evaluate(double overlap, double mean_n, double ratio) const {
  if (kind == Kind::approx) return visibility_approx(overlap, mean_n);
  return visibility_full(overlap, mean_n, ratio, 1.0);
}

double fit_objective(const std::vector<VisibilityPoint>& points, const VisibilityModel& model,
                     double overlap, double ratio) {
  double chi2 = 0.0;
  for (const auto& p : points) {
    const double r = (p.visibility - model.evaluate(overlap, p.mean_n, ratio)) / p.sigma;
    chi2 += r * r;
  }
  return chi2;
}

FitReport fit_overlap(const std::vector<VisibilityPoint>& points, const VisibilityModel& model) {
  check_points(points);
  const bool fit_ratio = model.kind == VisibilityModel::Kind::full && !model.eta_ratio;
  if (model.kind == VisibilityModel::Kind::full && model.eta_ratio && !(*model.eta_ratio > 0.0)) {
    throw Error(ErrorKind::contract, "efficiency ratio must be positive");
  }
  if (fit_ratio && !(model.max_eta_ratio > 1.0)) {
    throw Error(ErrorKind::contract, "max efficiency ratio must exceed 1");
  }

  unsigned iterations = 0;
  const auto best_overlap = [&](double ratio) {
    const Minimum m = minimize([&](double o) { return fit_objective(points, model, o, ratio); }, 0.0, 1.0,
                               model.max_iterations, "overlap fit");
    iterations += m.iterations;
    return m;
  };

  double ratio = model.eta_ratio.value_or(1.0);
  Minimum inner{};
  if (fit_ratio) {
    const Minimum outer = minimize(
        [&](double log_ratio) { return best_overlap(std::exp(log_ratio)).value; }, 0.0,
        std::log(model.max_eta_ratio), model.max_iterations, "efficiency-ratio fit");
    ratio = std::exp(outer.x);
  }
  inner = best_overlap(ratio);

  FitReport report;
  report.overlap = inner.x;
  report.chi_square = inner.value;
  report.iterations = iterations;
  report.at_boundary = inner.x <= kBoundaryTolerance || inner.x >= 1.0 - kBoundaryTolerance;
  if (model.kind == VisibilityModel::Kind::full) report.eta_ratio = ratio;
  for (const auto& p : points) {
    report.residuals.push_back(p.visibility - model.evaluate(inner.x, p.mean_n, ratio));
  }
  const std::size_t params = fit_ratio ? 2 : 1;
  report.dof = points.size() > params ? points.size() - params : 0;

  // Fisher information from model gradients (Gauss-Newton curvature).
  const auto d_overlap = [&](double n) {
    const double lo = std::max(0.0, inner.x - kGradientStep);
    const double hi = std::min(1.0, inner.x + kGradientStep);
    return (model.evaluate(hi, n, ratio) - model.evaluate(lo, n, ratio)) / (hi - lo);
  };
  const auto d_ratio = [&](double n) {
    const double lo = std::max(1.0, ratio - kGradientStep);
    const double hi = ratio + kGradientStep;
    return (model.evaluate(inner.x, n, hi) - model.evaluate(inner.x, n, lo)) / (hi - lo);
  };
  if (fit_ratio) {
    Eigen::Matrix2d fisher = Eigen::Matrix2d::Zero();
    for (const auto& p : points) {
      const Eigen::Vector2d g(d_overlap(p.mean_n), d_ratio(p.mean_n));
      fisher += g * g.transpose() / (p.sigma * p.sigma);
    }
    const Eigen::Matrix2d cov = fisher.inverse();
    report.sigma_overlap = std::sqrt(cov(0, 0));
    report.sigma_eta_ratio = std::sqrt(cov(1, 1));
  } else {
    double fisher = 0.0;
    for (const auto& p : points) {
      const double g = d_overlap(p.mean_n);
      fisher += g * g / (p.sigma * p.sigma);
    }
    report.sigma_overlap = 1.0 / std::sqrt(fisher);
  }
  return report;
}

}  // namespace pdc
