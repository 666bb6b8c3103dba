#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "../errors.hpp"

namespace pairdisc {

/// Joint counts of two binned variables. Rows index the first variable,
/// columns the second.
class ContingencyTable {
 public:
  using Count = std::int64_t;

  /// Table with unit-spaced edges, for counts that do not come from binning.
  ContingencyTable(std::size_t rows, std::size_t cols, std::vector<Count> counts)
      : ContingencyTable(rows, cols, std::move(counts), unit_edges(rows), unit_edges(cols)) {}

  ContingencyTable(std::size_t rows, std::size_t cols, std::vector<Count> counts,
                   std::vector<double> row_edges, std::vector<double> col_edges)
      : rows_(rows),
        cols_(cols),
        counts_(std::move(counts)),
        row_edges_(std::move(row_edges)),
        col_edges_(std::move(col_edges)) {
    if (rows_ < 1 || cols_ < 1) throw InvalidInput("contingency table needs at least 1x1 cells");
    if (counts_.size() != rows_ * cols_) throw InvalidInput("contingency table: count size mismatch");
    if (row_edges_.size() != rows_ + 1 || col_edges_.size() != cols_ + 1)
      throw InvalidInput("contingency table: edge count mismatch");
    if (!strictly_increasing(row_edges_) || !strictly_increasing(col_edges_))
      throw InvalidInput("contingency table: edges must be strictly increasing");
    for (auto c : counts_)
      if (c < 0) throw InvalidInput("contingency table: negative count");
    total_ = std::accumulate(counts_.begin(), counts_.end(), Count{0});
  }

  /// Builds a table from a nested row list, e.g. {{10, 0}, {0, 10}}.
  static ContingencyTable from_rows(const std::vector<std::vector<Count>>& rows) {
    if (rows.empty() || rows.front().empty()) throw InvalidInput("contingency table: empty rows");
    const std::size_t c = rows.front().size();
    std::vector<Count> flat;
    flat.reserve(rows.size() * c);
    for (const auto& r : rows) {
      if (r.size() != c) throw InvalidInput("contingency table: ragged rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return ContingencyTable(rows.size(), c, std::move(flat));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Count total() const noexcept { return total_; }
  Count at(std::size_t r, std::size_t c) const { return counts_[r * cols_ + c]; }
  std::span<const Count> counts() const noexcept { return counts_; }
  std::span<const double> row_edges() const noexcept { return row_edges_; }
  std::span<const double> col_edges() const noexcept { return col_edges_; }

  std::vector<Count> row_totals() const {
    std::vector<Count> out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out[r] += at(r, c);
    return out;
  }

  std::vector<Count> col_totals() const {
    std::vector<Count> out(cols_, 0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out[c] += at(r, c);
    return out;
  }

  ContingencyTable transposed() const {
    std::vector<Count> t(counts_.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t[c * rows_ + r] = at(r, c);
    return ContingencyTable(cols_, rows_, std::move(t), col_edges_, row_edges_);
  }

 private:
  static std::vector<double> unit_edges(std::size_t n) {
    std::vector<double> e(n + 1);
    std::iota(e.begin(), e.end(), 0.0);
    return e;
  }

  static bool strictly_increasing(const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<Count> counts_;
  std::vector<double> row_edges_;
  std::vector<double> col_edges_;
  Count total_ = 0;
};

namespace detail {

struct AxisBinning {
  std::vector<std::size_t> index;  // bin of each observation
  std::vector<double> edges;
};

// Equal-width bins over [min, max] with the maximum in the last bin. An axis
// with fewer distinct values than bins gets one bin per distinct value, with
// edges at the midpoints between neighbours.
inline AxisBinning bin_axis(std::span<const double> v, std::size_t bins, const char* axis) {
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw ConstantVariable(std::string("bin_uniform: ") + axis + " axis is constant");

  std::vector<double> distinct(v.begin(), v.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  AxisBinning out;
  out.index.resize(v.size());
  if (distinct.size() < bins) {
    out.edges.push_back(lo);
    for (std::size_t i = 1; i < distinct.size(); ++i)
      out.edges.push_back(distinct[i - 1] + 0.5 * (distinct[i] - distinct[i - 1]));
    out.edges.push_back(hi);
    for (std::size_t i = 0; i < v.size(); ++i)
      out.index[i] = static_cast<std::size_t>(
          std::lower_bound(distinct.begin(), distinct.end(), v[i]) - distinct.begin());
    return out;
  }

  const double width = hi - lo;
  out.edges.resize(bins + 1);
  for (std::size_t i = 0; i < bins; ++i)
    out.edges[i] = lo + width * static_cast<double>(i) / static_cast<double>(bins);
  out.edges[bins] = hi;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto b = static_cast<std::size_t>((v[i] - lo) / width * static_cast<double>(bins));
    out.index[i] = std::min(b, bins - 1);
  }
  return out;
}

}  // namespace detail

/// Joint histogram of (x, y) on a uniform `bins` x `bins` grid spanning the
/// data range of each axis. Throws ConstantVariable when an axis has zero range.
inline ContingencyTable bin_uniform(std::span<const double> x, std::span<const double> y,
                                    std::size_t bins) {
  if (x.size() != y.size())
    throw InvalidInput("bin_uniform: length mismatch (" + std::to_string(x.size()) + " vs " +
                       std::to_string(y.size()) + ")");
  if (bins < 2) throw InvalidInput("bin_uniform: bins must be at least 2");
  if (x.empty()) throw InvalidInput("bin_uniform: empty input");

  auto bx = detail::bin_axis(x, bins, "x");
  auto by = detail::bin_axis(y, bins, "y");
  const std::size_t rows = bx.edges.size() - 1;
  const std::size_t cols = by.edges.size() - 1;
  std::vector<ContingencyTable::Count> counts(rows * cols, 0);
  for (std::size_t i = 0; i < x.size(); ++i) ++counts[bx.index[i] * cols + by.index[i]];
  return ContingencyTable(rows, cols, std::move(counts), std::move(bx.edges), std::move(by.edges));
}

/// Plug-in mutual information of the table in nats. Empty cells contribute 0.
inline double mutual_information(const ContingencyTable& table) {
  const auto n = static_cast<double>(table.total());
  if (!(n > 0)) return 0.0;
  const auto rt = table.row_totals();
  const auto ct = table.col_totals();

  std::vector<double> terms;
  terms.reserve(table.counts().size());
  for (std::size_t r = 0; r < table.rows(); ++r)
    for (std::size_t c = 0; c < table.cols(); ++c) {
      const auto o = static_cast<double>(table.at(r, c));
      if (o == 0) continue;
      const double expected = static_cast<double>(rt[r]) * static_cast<double>(ct[c]);
      terms.push_back(o / n * std::log(o * n / expected));
    }
  // Sorted summation: the result is independent of the table's orientation.
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

struct Chi2Statistic {
  double statistic = 0.0;
  int df = 0;
};

/// Pearson's chi-squared statistic after dropping empty rows and columns.
/// Throws DegenerateTable when the reduced table has a single row or column.
inline Chi2Statistic chi2_statistic(const ContingencyTable& table) {
  const auto rt = table.row_totals();
  const auto ct = table.col_totals();
  std::vector<std::size_t> keep_r, keep_c;
  for (std::size_t r = 0; r < rt.size(); ++r)
    if (rt[r] > 0) keep_r.push_back(r);
  for (std::size_t c = 0; c < ct.size(); ++c)
    if (ct[c] > 0) keep_c.push_back(c);
  if (keep_r.size() <= 1 || keep_c.size() <= 1)
    throw DegenerateTable("chi2_statistic: reduced table is " + std::to_string(keep_r.size()) +
                          "x" + std::to_string(keep_c.size()) + ", no degrees of freedom");

  const auto n = static_cast<double>(table.total());
  std::vector<double> terms;
  terms.reserve(keep_r.size() * keep_c.size());
  for (auto r : keep_r)
    for (auto c : keep_c) {
      const double expected = static_cast<double>(rt[r]) * static_cast<double>(ct[c]) / n;
      const double diff = static_cast<double>(table.at(r, c)) - expected;
      terms.push_back(diff * diff / expected);
    }
  std::sort(terms.begin(), terms.end());

  Chi2Statistic out;
  out.statistic = std::accumulate(terms.begin(), terms.end(), 0.0);
  out.df = static_cast<int>((keep_r.size() - 1) * (keep_c.size() - 1));
  return out;
}

}  // namespace pairdisc
