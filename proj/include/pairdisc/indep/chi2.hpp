#pragma once

#include <algorithm>
#include <span>

#include "../random.hpp"
#include "../special.hpp"
#include "contingency.hpp"
#include "result.hpp"

namespace pairdisc {

/// Upper-tail probability of a chi-squared statistic. df == 0 gives 1.
inline double chi2_pvalue(double statistic, int df) {
  if (df <= 0) return 1.0;
  if (statistic < 0.0) throw InvalidInput("chi2_pvalue: statistic must be non-negative");
  return std::clamp(special::chi2_upper_tail(statistic, df), 0.0, 1.0);
}

/// Pearson chi-squared independence test on a uniform bins x bins grid.
/// `seed` is unused; it is accepted so every test shares one call shape.
inline TestResult chi2_test(std::span<const double> x, std::span<const double> y,
                            std::size_t bins = 10, RngSeed seed = {}) {
  (void)seed;
  if (x.size() != y.size()) throw InvalidInput("chi2_test: length mismatch");
  if (x.size() < 10) throw InvalidInput("chi2_test: need at least 10 observations");
  const auto stat = chi2_statistic(bin_uniform(x, y, bins));
  TestResult r;
  r.kind = TestKind::Chi2;
  r.statistic = stat.statistic;
  r.df = stat.df;
  r.p_value = chi2_pvalue(stat.statistic, stat.df);
  return r;
}

}  // namespace pairdisc
