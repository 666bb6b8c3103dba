#pragma once

#include <cstddef>
#include <span>

#include "indep/chi2.hpp"
#include "indep/contingency.hpp"
#include "indep/result.hpp"
#include "indep/tic.hpp"

namespace pairdisc {

struct TestOptions {
  std::size_t bins = 10;  // chi2 grid resolution per axis
  TicOptions tic;
};

/// Runs the independence test `kind` on (x, y).
inline TestResult independence_test(TestKind kind, std::span<const double> x,
                                    std::span<const double> y, const TestOptions& options = {},
                                    RngSeed seed = {}) {
  if (kind == TestKind::Chi2) return chi2_test(x, y, options.bins, seed);
  return tic_test(x, y, options.tic, seed);
}

}  // namespace pairdisc
