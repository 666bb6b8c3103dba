#pragma once

#include <optional>

#include "../model.hpp"

namespace pairdisc {

/// Outcome of one unconditional independence test.
struct TestResult {
  TestKind kind = TestKind::Chi2;
  double statistic = 0.0;
  double p_value = 1.0;
  std::optional<int> df;               // chi2 only
  std::optional<int> grids_evaluated;  // TIC only
  std::optional<int> permutations;     // TIC only

  friend bool operator==(const TestResult&, const TestResult&) = default;
};

}  // namespace pairdisc
