#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../random.hpp"
#include "result.hpp"

namespace pairdisc {

/// Tuning of the total information coefficient.
struct TicOptions {
  /// Grid budget: resolutions (k, l) with k * l <= floor(n^exponent).
  double max_cells_exponent = 0.6;
  /// Column optimisation works on at most factor * k superclumps.
  int max_clumps_factor = 5;
  /// Permutations of the null distribution in tic_test.
  int permutations = 100;
};

struct TicStatistic {
  double statistic = 0.0;
  int grids_evaluated = 0;
};

namespace detail::tic {

// Assigns consecutive groups of the given sizes to at most `bins` bins of
// near-equal total size. Groups are never split. Returns the bin of each group.
inline std::vector<int> partition_groups(std::span<const int> sizes, int bins) {
  const long total = std::accumulate(sizes.begin(), sizes.end(), 0L);
  std::vector<int> bin_of(sizes.size(), 0);
  int bin = 0;
  long filled = 0;    // in the current bin
  long consumed = 0;  // before the current bin
  double desired = static_cast<double>(total) / bins;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    const long s = sizes[g];
    if (filled > 0 && bin < bins - 1 &&
        std::abs(static_cast<double>(filled + s) - desired) >=
            std::abs(static_cast<double>(filled) - desired)) {
      ++bin;
      consumed += filled;
      filled = 0;
      desired = static_cast<double>(total - consumed) / (bins - bin);
    }
    bin_of[g] = bin;
    filled += s;
  }
  return bin_of;
}

// Sort order of one axis and its runs of tied values.
struct RankedAxis {
  std::vector<int> order;        // observation indices by increasing value
  std::vector<int> group_start;  // tie-group boundaries into `order`, plus n
};

inline RankedAxis rank_axis(std::span<const double> v) {
  RankedAxis a;
  a.order.resize(v.size());
  std::iota(a.order.begin(), a.order.end(), 0);
  std::stable_sort(a.order.begin(), a.order.end(), [&](int i, int j) { return v[i] < v[j]; });
  for (std::size_t p = 0; p < v.size(); ++p)
    if (p == 0 || v[a.order[p]] != v[a.order[p - 1]]) a.group_start.push_back(static_cast<int>(p));
  a.group_start.push_back(static_cast<int>(v.size()));
  return a;
}

// Rank-based equipartition into at most `bins` rows; returns the row of every
// observation and stores the number of rows actually used.
inline std::vector<int> equipartition(const RankedAxis& axis, int bins, int& rows_used) {
  const std::size_t groups = axis.group_start.size() - 1;
  std::vector<int> sizes(groups);
  for (std::size_t g = 0; g < groups; ++g) sizes[g] = axis.group_start[g + 1] - axis.group_start[g];
  const auto bin_of = partition_groups(sizes, bins);
  std::vector<int> row(axis.order.size());
  for (std::size_t g = 0; g < groups; ++g)
    for (int p = axis.group_start[g]; p < axis.group_start[g + 1]; ++p) row[axis.order[p]] = bin_of[g];
  rows_used = groups == 0 ? 0 : bin_of.back() + 1;
  return row;
}

class GridOptimizer {
 public:
  explicit GridOptimizer(std::size_t n) : n_(static_cast<double>(n)), nlogn_(n + 1, 0.0) {
    for (std::size_t i = 2; i <= n; ++i) nlogn_[i] = static_cast<double>(i) * std::log(static_cast<double>(i));
  }

  // Best mutual information between the fixed row partition and a partition
  // of `cols` into exactly-or-fewer j columns, for j = 0..k_max (entry j).
  std::vector<double> optimize(const RankedAxis& cols, std::span<const int> row_of, int rows,
                               int k_max, int clumps_factor) const {
    std::vector<double> best(k_max + 1, 0.0);
    if (rows < 2) return best;

    // Clumps: maximal runs of the column order whose tie groups all lie in
    // one row. A tie group spanning several rows is a clump of its own.
    std::vector<int> ends;  // exclusive end position of each clump
    int last_label = -2;
    for (std::size_t g = 0; g + 1 < cols.group_start.size(); ++g) {
      const int b = cols.group_start[g], e = cols.group_start[g + 1];
      int label = row_of[cols.order[b]];
      for (int p = b + 1; p < e; ++p)
        if (row_of[cols.order[p]] != label) {
          label = -1;
          break;
        }
      if (label >= 0 && label == last_label)
        ends.back() = e;
      else
        ends.push_back(e);
      last_label = label;
    }

    const int cap = clumps_factor * k_max;
    if (static_cast<int>(ends.size()) > cap) {
      std::vector<int> sizes(ends.size());
      for (std::size_t c = 0; c < ends.size(); ++c) sizes[c] = ends[c] - (c == 0 ? 0 : ends[c - 1]);
      const auto super_of = partition_groups(sizes, cap);
      std::vector<int> merged;
      for (std::size_t c = 0; c < ends.size(); ++c)
        if (c + 1 == ends.size() || super_of[c + 1] != super_of[c]) merged.push_back(ends[c]);
      ends = std::move(merged);
    }

    const int m = static_cast<int>(ends.size());
    const int stride = rows;
    std::vector<int> cum((m + 1) * stride, 0);
    {
      int p = 0;
      for (int c = 0; c < m; ++c) {
        std::copy_n(cum.begin() + c * stride, stride, cum.begin() + (c + 1) * stride);
        for (; p < ends[c]; ++p) ++cum[(c + 1) * stride + row_of[cols.order[p]]];
      }
    }

    // Column score of clumps (s, t]: -(size/n) * H(rows | column), stored at t * w + s.
    const int w = m + 1;
    std::vector<double> score(static_cast<std::size_t>(w) * w, 0.0);
    for (int s = 0; s < m; ++s)
      for (int t = s + 1; t <= m; ++t) {
        double acc = 0.0;
        int size = 0;
        for (int r = 0; r < rows; ++r) {
          const int c = cum[t * stride + r] - cum[s * stride + r];
          acc += nlogn_[c];
          size += c;
        }
        score[t * w + s] = (acc - nlogn_[size]) / n_;
      }

    double row_entropy = std::log(n_);
    for (int r = 0; r < rows; ++r) row_entropy -= nlogn_[cum[m * stride + r]] / n_;

    std::vector<double> prev(w), cur(w);
    for (int t = 1; t <= m; ++t) prev[t] = score[t * w];
    double running = prev[m];
    best[1] = row_entropy + running;
    const int k_limit = std::min(k_max, m);
    for (int j = 2; j <= k_max; ++j) {
      if (j <= k_limit) {
        const int t_from = j == k_limit ? m : j;
        for (int t = t_from; t <= m; ++t) {
          const double* col = score.data() + static_cast<std::size_t>(t) * w;
          double v = -std::numeric_limits<double>::infinity();
          for (int s = j - 1; s < t; ++s) v = std::max(v, prev[s] + col[s]);
          cur[t] = v;
        }
        running = std::max(running, cur[m]);
        std::swap(prev, cur);
      }
      best[j] = row_entropy + running;
    }
    return best;
  }

 private:
  double n_;
  std::vector<double> nlogn_;
};

inline int grid_budget(std::size_t n, double exponent) {
  const auto b = static_cast<int>(std::floor(std::pow(static_cast<double>(n), exponent)));
  return std::max(b, 4);
}

}  // namespace detail::tic

/// Computes the total information coefficient of (x, y) for many y against a
/// fixed x, reusing the ranking of x.
///
/// For every resolution (k, l) with k, l >= 2 and k * l <= B = floor(n^exponent),
/// one axis is equipartitioned by rank and the other is partitioned optimally
/// by dynamic programming over clumps; both orientations are tried and the
/// larger MI kept. The statistic is the sum of MI*(k, l) / ln(min(k, l)).
class TicEstimator {
 public:
  TicEstimator(std::span<const double> x, TicOptions options = {})
      : options_(options),
        n_(x.size()),
        x_rank_(detail::tic::rank_axis(x)),
        optimizer_(x.size()) {
    if (n_ < 4) throw InvalidInput("tic: need at least 4 observations for a 2x2 grid");
    if (options_.max_clumps_factor < 1) throw InvalidInput("tic: max_clumps_factor must be >= 1");
    budget_ = detail::tic::grid_budget(n_, options_.max_cells_exponent);
  }

  int budget() const noexcept { return budget_; }

  TicStatistic statistic(std::span<const double> y) const {
    if (y.size() != n_)
      throw InvalidInput("tic: length mismatch (" + std::to_string(n_) + " vs " +
                         std::to_string(y.size()) + ")");
    const auto y_rank = detail::tic::rank_axis(y);
    const int half = budget_ / 2;
    // best[k][l], k columns on x and l rows on y.
    std::vector<std::vector<double>> best(half + 1, std::vector<double>(half + 1, 0.0));

    for (int l = 2; l <= half; ++l) {
      int used = 0;
      const auto rows = detail::tic::equipartition(y_rank, l, used);
      const auto mi = optimizer_.optimize(x_rank_, rows, used, budget_ / l, options_.max_clumps_factor);
      for (int k = 2; k <= budget_ / l; ++k) best[k][l] = std::max(best[k][l], mi[k]);
    }
    for (int k = 2; k <= half; ++k) {
      int used = 0;
      const auto cols = detail::tic::equipartition(x_rank_, k, used);
      const auto mi = optimizer_.optimize(y_rank, cols, used, budget_ / k, options_.max_clumps_factor);
      for (int l = 2; l <= budget_ / k; ++l) best[k][l] = std::max(best[k][l], mi[l]);
    }

    TicStatistic out;
    for (int k = 2; k <= half; ++k)
      for (int l = 2; l <= budget_ / k; ++l) {
        out.statistic += std::max(best[k][l], 0.0) / std::log(static_cast<double>(std::min(k, l)));
        ++out.grids_evaluated;
      }
    return out;
  }

 private:
  TicOptions options_;
  std::size_t n_;
  detail::tic::RankedAxis x_rank_;
  detail::tic::GridOptimizer optimizer_;
  int budget_ = 4;
};

inline TicStatistic tic_statistic(std::span<const double> x, std::span<const double> y,
                                  TicOptions options = {}) {
  return TicEstimator(x, options).statistic(y);
}

/// Permutation test of independence based on the TIC statistic. Replicate j
/// shuffles y with substream j of `seed`; p = (1 + #{perm >= observed}) / (1 + P).
inline TestResult tic_test(std::span<const double> x, std::span<const double> y,
                           TicOptions options = {}, RngSeed seed = {}) {
  if (x.size() != y.size()) throw InvalidInput("tic_test: length mismatch");
  if (x.size() < 10) throw InvalidInput("tic_test: need at least 10 observations");
  if (options.permutations < 19) throw InvalidInput("tic_test: permutations must be >= 19");
  for (auto axis : {x, y}) {
    const auto [lo, hi] = std::minmax_element(axis.begin(), axis.end());
    if (!(*hi > *lo)) throw ConstantVariable("tic_test: constant variable");
  }

  const TicEstimator estimator(x, options);
  const auto observed = estimator.statistic(y);
  int exceed = 0;
  std::vector<double> shuffled(y.size());
  for (int j = 0; j < options.permutations; ++j) {
    std::copy(y.begin(), y.end(), shuffled.begin());
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    rng.shuffle(std::span<double>(shuffled));
    if (estimator.statistic(shuffled).statistic >= observed.statistic) ++exceed;
  }

  TestResult r;
  r.kind = TestKind::TIC;
  r.statistic = observed.statistic;
  r.p_value = static_cast<double>(1 + exceed) / static_cast<double>(1 + options.permutations);
  r.grids_evaluated = observed.grids_evaluated;
  r.permutations = options.permutations;
  return r;
}

}  // namespace pairdisc
