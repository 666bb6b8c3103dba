#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace pairdisc {

/// Least-squares line `effect ~ slope * cause + intercept` and its residuals.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares of `effect` on `cause` with an intercept.
///
/// Moments are accumulated around the sample means, which keeps the residuals
/// mean-zero and uncorrelated with the regressor to rounding error.
/// Throws DegenerateRegressor when `cause` is constant.
inline LinearFit ols_fit(std::span<const double> cause, std::span<const double> effect) {
  if (cause.size() != effect.size())
    throw InvalidInput("ols_fit: length mismatch (" + std::to_string(cause.size()) + " vs " +
                       std::to_string(effect.size()) + ")");
  const std::size_t n = cause.size();
  if (n < 3) throw InvalidInput("ols_fit: need at least 3 observations");

  double mean_c = 0.0, mean_e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_c += cause[i];
    mean_e += effect[i];
  }
  mean_c /= static_cast<double>(n);
  mean_e /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dc = cause[i] - mean_c;
    sxx += dc * dc;
    sxy += dc * (effect[i] - mean_e);
  }
  if (!(sxx > 0.0)) throw DegenerateRegressor("ols_fit: regressor has zero variance");

  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_e - fit.slope * mean_c;
  fit.residuals.resize(n);
  // Centered form of effect - (slope * cause + intercept).
  for (std::size_t i = 0; i < n; ++i)
    fit.residuals[i] = (effect[i] - mean_e) - fit.slope * (cause[i] - mean_c);
  return fit;
}

}  // namespace pairdisc
