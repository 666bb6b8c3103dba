#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace pairdisc {

// Data types ----------------------------------------------------------------

enum class VarType { Categorical, Binary, Numerical };

enum class PairType { Categorical, Binary, Numerical, Mixed };

enum class TestKind { Chi2, TIC };

/// The four pairwise structures. Used both as a discovery verdict and as the
/// ground truth of generated or labelled data.
enum class Structure { Causal, Anticausal, Independent, Confounded };

inline constexpr std::array<PairType, 4> kAllPairTypes = {
    PairType::Categorical, PairType::Binary, PairType::Numerical, PairType::Mixed};

inline constexpr std::array<Structure, 4> kAllStructures = {
    Structure::Causal, Structure::Anticausal, Structure::Independent, Structure::Confounded};

inline std::string_view to_string(VarType t) {
  switch (t) {
    case VarType::Categorical: return "Categorical";
    case VarType::Binary: return "Binary";
    case VarType::Numerical: return "Numerical";
  }
  return "?";
}

inline std::string_view to_string(PairType t) {
  switch (t) {
    case PairType::Categorical: return "Categorical";
    case PairType::Binary: return "Binary";
    case PairType::Numerical: return "Numerical";
    case PairType::Mixed: return "Mixed";
  }
  return "?";
}

inline std::string_view to_string(TestKind k) { return k == TestKind::Chi2 ? "chi2" : "tic"; }

inline std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::Causal: return "Causal";
    case Structure::Anticausal: return "Anticausal";
    case Structure::Independent: return "Independent";
    case Structure::Confounded: return "Confounded";
  }
  return "?";
}

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace detail

// Case-insensitive parsers; nullopt on unknown names.

inline std::optional<PairType> parse_pair_type(std::string_view s) {
  const auto l = detail::lower(s);
  for (auto t : kAllPairTypes)
    if (detail::lower(to_string(t)) == l) return t;
  return std::nullopt;
}

inline std::optional<TestKind> parse_test_kind(std::string_view s) {
  const auto l = detail::lower(s);
  if (l == "chi2" || l == "chi-squared" || l == "chisq") return TestKind::Chi2;
  if (l == "tic") return TestKind::TIC;
  return std::nullopt;
}

inline std::optional<Structure> parse_structure(std::string_view s) {
  const auto l = detail::lower(s);
  for (auto k : kAllStructures)
    if (detail::lower(to_string(k)) == l) return k;
  return std::nullopt;
}

// Observations --------------------------------------------------------------

/// A named sequence of at least two finite reals. Discrete variables are
/// carried as their integer codes.
class ObservationSeries {
 public:
  ObservationSeries(std::vector<double> values, std::string name = {})
      : values_(std::move(values)), name_(std::move(name)) {
    if (values_.size() < 2)
      throw InvalidInput("series '" + name_ + "' needs at least 2 observations, got " +
                         std::to_string(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i]))
        throw InvalidInput("series '" + name_ + "' has a non-finite value at index " +
                           std::to_string(i));
  }

  std::span<const double> values() const noexcept { return values_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
  std::string name_;
};

/// Binary: exactly two distinct values. Categorical: integer valued with at
/// most min(20, ceil(n/10)) distinct values. Numerical otherwise.
inline VarType infer_var_type(const ObservationSeries& series) {
  std::vector<double> sorted(series.values().begin(), series.values().end());
  std::sort(sorted.begin(), sorted.end());
  const auto distinct =
      static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  if (distinct == 2) return VarType::Binary;

  const bool integral =
      std::all_of(sorted.begin(), sorted.end(), [](double v) { return v == std::floor(v); });
  const std::size_t n = series.size();
  const std::size_t limit = std::min<std::size_t>(20, (n + 9) / 10);
  if (integral && distinct <= limit) return VarType::Categorical;
  return VarType::Numerical;
}

inline PairType infer_pair_type(VarType a, VarType b) {
  const bool a_num = a == VarType::Numerical;
  const bool b_num = b == VarType::Numerical;
  if (a_num && b_num) return PairType::Numerical;
  if (a_num != b_num) return PairType::Mixed;
  if (a == VarType::Binary && b == VarType::Binary) return PairType::Binary;
  return PairType::Categorical;
}

/// Two aligned series and their joint type.
class VariablePair {
 public:
  VariablePair(ObservationSeries a, ObservationSeries b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.size() != b_.size())
      throw InvalidInput("pair length mismatch: " + std::to_string(a_.size()) + " vs " +
                         std::to_string(b_.size()));
    a_type_ = infer_var_type(a_);
    b_type_ = infer_var_type(b_);
    pair_type_ = infer_pair_type(a_type_, b_type_);
  }

  const ObservationSeries& a() const noexcept { return a_; }
  const ObservationSeries& b() const noexcept { return b_; }
  VarType a_type() const noexcept { return a_type_; }
  VarType b_type() const noexcept { return b_type_; }
  PairType pair_type() const noexcept { return pair_type_; }
  std::size_t size() const noexcept { return a_.size(); }

 private:
  ObservationSeries a_;
  ObservationSeries b_;
  VarType a_type_{};
  VarType b_type_{};
  PairType pair_type_{};
};

// Test selection -------------------------------------------------------------

/// Which independence test runs for each pair type. Defaults to the winners of
/// the stratified benchmark: TIC for discrete pairs, chi2 when numerical data
/// is involved.
class TestPolicy {
 public:
  TestPolicy() = default;

  static TestPolicy uniform(TestKind kind) {
    TestPolicy p;
    p.kinds_.fill(kind);
    return p;
  }

  TestKind select(PairType t) const { return kinds_[static_cast<std::size_t>(t)]; }
  void set(PairType t, TestKind k) { kinds_[static_cast<std::size_t>(t)] = k; }

  friend bool operator==(const TestPolicy&, const TestPolicy&) = default;

 private:
  std::array<TestKind, 4> kinds_ = {TestKind::TIC, TestKind::TIC, TestKind::Chi2, TestKind::Chi2};
};

inline TestKind select_test(PairType t, const TestPolicy& policy = {}) { return policy.select(t); }

}  // namespace pairdisc
