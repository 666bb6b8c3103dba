#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "indep.hpp"
#include "model.hpp"
#include "random.hpp"
#include "regress.hpp"

namespace pairdisc {

struct DiscoveryConfig {
  double ci = 0.05;  // significance level of both directional tests
  TestPolicy policy;
  TestOptions tests;
};

struct CausalVerdict {
  Structure structure = Structure::Independent;
  double p_causal = 1.0;      // a -> b hypothesis
  double p_anticausal = 1.0;  // b -> a hypothesis
  TestKind test_used = TestKind::Chi2;
  double ci = 0.05;
  PairType pair_type = PairType::Numerical;

  friend bool operator==(const CausalVerdict&, const CausalVerdict&) = default;
};

/// Four-way decision rule over the two directional p-values. Comparisons are
/// strict, so a p-value equal to `ci` always lands in Confounded.
constexpr Structure decide(double p_causal, double p_anticausal, double ci) {
  if (p_causal > ci && p_anticausal < ci) return Structure::Causal;
  if (p_causal < ci && p_anticausal > ci) return Structure::Anticausal;
  if (p_causal > ci && p_anticausal > ci) return Structure::Independent;
  return Structure::Confounded;
}

/// Regresses `effect` on `cause` and returns the p-value of the selected test
/// of independence between the residuals and `cause`.
///
/// A constant cause, or residuals that vanish to rounding error, cannot carry
/// dependence and give p = 1.
inline double resit(std::span<const double> cause, std::span<const double> effect, TestKind test,
                    const TestOptions& options = {}, RngSeed seed = {}) {
  if (cause.size() != effect.size()) throw InvalidInput("resit: length mismatch");
  if (cause.size() < 10) throw InvalidInput("resit: need at least 10 observations");

  LinearFit fit;
  try {
    fit = ols_fit(cause, effect);
  } catch (const DegenerateRegressor&) {
    return 1.0;
  }

  double mean_effect = 0.0;
  for (double e : effect) mean_effect += e;
  mean_effect /= static_cast<double>(effect.size());
  double spread = 0.0, residual_max = 0.0;
  for (std::size_t i = 0; i < effect.size(); ++i) {
    spread = std::max(spread, std::abs(effect[i] - mean_effect));
    residual_max = std::max(residual_max, std::abs(fit.residuals[i]));
  }
  if (residual_max <= 1e-12 * std::max(1.0, spread)) return 1.0;

  try {
    return independence_test(test, fit.residuals, cause, options, seed).p_value;
  } catch (const DegenerateData&) {
    return 1.0;
  }
}

namespace detail {

// Substream of a directional test. Keyed on the ordering of the two series so
// that swapping the arguments of resfit swaps the streams with them.
inline RngSeed direction_seed(RngSeed seed, std::span<const double> cause,
                              std::span<const double> effect) {
  const bool canonical =
      !std::lexicographical_compare(effect.begin(), effect.end(), cause.begin(), cause.end());
  return derive_seed(seed, canonical ? 1u : 2u);
}

}  // namespace detail

/// Flexible regression with subsequent independence test: picks the test for
/// the pair's joint type, scores both causal directions and applies `decide`.
inline CausalVerdict resfit(const VariablePair& pair, const DiscoveryConfig& config = {},
                            RngSeed seed = {}) {
  if (!(config.ci > 0.0 && config.ci < 1.0)) throw InvalidInput("resfit: ci must lie in (0, 1)");
  const auto a = pair.a().values();
  const auto b = pair.b().values();

  CausalVerdict v;
  v.pair_type = pair.pair_type();
  v.test_used = select_test(v.pair_type, config.policy);
  v.ci = config.ci;
  v.p_causal = resit(a, b, v.test_used, config.tests, detail::direction_seed(seed, a, b));
  v.p_anticausal = resit(b, a, v.test_used, config.tests, detail::direction_seed(seed, b, a));
  v.structure = decide(v.p_causal, v.p_anticausal, v.ci);
  return v;
}

}  // namespace pairdisc
