#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdc/twinstats.hpp"

namespace pdc {

/// Straight-line least squares. With empty `sigma` all points weigh 1.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sigma_slope = 0.0;
  double sigma_intercept = 0.0;
  double r_squared = 0.0;
  double chi_square = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& sigma = {});

/// Iteration cap of the bounded 1D minimizer.
inline constexpr unsigned kMaxFitIterations = 200;

/// Visibility model used to extract the overlap.
///  - approx: (1 + O) / (3 - O + 4 n)
///  - full: detection-imbalance form with eta1/eta2 either fixed to
///    `eta_ratio` or, when it is empty, fitted as a second parameter in
///    [1, max_eta_ratio] (the model is symmetric under ratio -> 1/ratio).
struct VisibilityModel {
  enum class Kind { approx, full };
  Kind kind = Kind::approx;
  std::optional<double> eta_ratio;
  double max_eta_ratio = 10.0;
  unsigned max_iterations = kMaxFitIterations;

  static VisibilityModel approximate() { return {}; }
  static VisibilityModel full(std::optional<double> ratio) { return {Kind::full, ratio, 10.0, kMaxFitIterations}; }

  double evaluate(double overlap, double mean_n, double ratio) const;
};

struct FitReport {
  double overlap = 0.0;
  double sigma_overlap = 0.0;
  std::optional<double> eta_ratio;        // fitted or fixed ratio (full model)
  std::optional<double> sigma_eta_ratio;  // only when fitted
  double chi_square = 0.0;
  std::size_t dof = 0;
  std::vector<double> residuals;  // V_i - V_model
  bool at_boundary = false;
  unsigned iterations = 0;
};

/// Weighted least-squares fit of O in [0, 1]. Mean photon numbers are taken
/// as exact. Standard errors are statistical only (curvature of chi^2).
FitReport fit_overlap(const std::vector<VisibilityPoint>& points,
                      const VisibilityModel& model = VisibilityModel::approximate());

/// chi^2 of the data for a given overlap (and ratio for the full model).
double fit_objective(const std::vector<VisibilityPoint>& points, const VisibilityModel& model,
                     double overlap, double ratio = 1.0);

}  // namespace pdc
