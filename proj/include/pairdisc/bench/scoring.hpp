#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "../discover.hpp"
#include "../errors.hpp"
#include "../model.hpp"
#include "../random.hpp"
#include "../special.hpp"
#include "dataset.hpp"

namespace pairdisc {

/// Fraction of verdicts whose structure equals the truth.
inline double accuracy(std::span<const CausalVerdict> verdicts, std::span<const Structure> truths) {
  if (verdicts.size() != truths.size()) throw InvalidInput("accuracy: length mismatch");
  if (verdicts.empty()) throw InvalidInput("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < verdicts.size(); ++i) hits += verdicts[i].structure == truths[i];
  return static_cast<double>(hits) / static_cast<double>(verdicts.size());
}

struct BootstrapScore {
  double mean = 0.0;
  double std = 0.0;
};

/// Bootstrap of the accuracy over per-pair hit flags: resamples pair indices
/// with replacement `replicates` times and returns the sample mean and sample
/// standard deviation of the replicate accuracies.
inline BootstrapScore bootstrap_accuracy(const std::vector<bool>& correct, int replicates, RngSeed seed) {
  if (correct.empty()) throw InvalidInput("bootstrap_accuracy: empty input");
  if (replicates < 2) throw InvalidInput("bootstrap_accuracy: replicates must be >= 2");
  const std::size_t n = correct.size();
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> scores(static_cast<std::size_t>(replicates));
  for (auto& s : scores) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += correct[pick(rng)];
    s = static_cast<double>(hits) / static_cast<double>(n);
  }
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= replicates;
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  return {mean, std::sqrt(ss / (replicates - 1))};
}

/// Bootstrap over cached verdicts; a missing verdict (skipped pair) counts as wrong.
inline BootstrapScore bootstrap_accuracy(std::span<const LabeledPair> labeled,
                                         std::span<const std::optional<CausalVerdict>> verdicts,
                                         int replicates, RngSeed seed) {
  if (labeled.size() != verdicts.size()) throw InvalidInput("bootstrap_accuracy: length mismatch");
  std::vector<bool> correct(labeled.size());
  for (std::size_t i = 0; i < labeled.size(); ++i)
    correct[i] = verdicts[i] && verdicts[i]->structure == labeled[i].truth;
  return bootstrap_accuracy(correct, replicates, seed);
}

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

/// Welch's unequal-variance two-sample t-test, two-sided.
inline WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw InvalidInput("welch_t_test: each sample needs at least 2 values");
  auto moments = [](std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::pair{m, ss / static_cast<double>(v.size() - 1)};
  };
  const auto [ma, va] = moments(a);
  const auto [mb, vb] = moments(b);
  const double sa = va / static_cast<double>(a.size());
  const double sb = vb / static_cast<double>(b.size());
  if (!(sa + sb > 0.0)) throw DegenerateData("welch_t_test: both samples have zero variance");

  WelchResult r;
  r.t = (ma - mb) / std::sqrt(sa + sb);
  r.df = (sa + sb) * (sa + sb) /
         (sa * sa / static_cast<double>(a.size() - 1) + sb * sb / static_cast<double>(b.size() - 1));
  r.p_value = special::student_t_two_sided(r.t, r.df);
  return r;
}

/// Average causal effect of choosing the test per stratum:
/// sum_s weight_s * best_mean_s - pooled_mean.
inline double ace(const std::map<PairType, double>& stratum_best_means,
                  const std::map<PairType, double>& stratum_weights, double pooled_mean) {
  double weight_sum = 0.0;
  double treated = 0.0;
  for (const auto& [stratum, w] : stratum_weights) {
    if (!(w >= 0.0)) throw InvalidInput("ace: negative weight for " + std::string(to_string(stratum)));
    weight_sum += w;
    if (w == 0.0) continue;
    const auto it = stratum_best_means.find(stratum);
    if (it == stratum_best_means.end())
      throw InvalidInput("ace: no mean for weighted stratum " + std::string(to_string(stratum)));
    treated += w * it->second;
  }
  if (std::abs(weight_sum - 1.0) > 1e-9)
    throw InvalidInput("ace: weights sum to " + std::to_string(weight_sum) + ", not 1");
  return treated - pooled_mean;
}

}  // namespace pairdisc
