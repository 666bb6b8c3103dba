#pragma once

#include <array>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "../discover.hpp"
#include "../parallel.hpp"
#include "dataset.hpp"
#include "scoring.hpp"

namespace pairdisc {

struct BenchConfig {
  DiscoveryConfig discovery;
  int replicates = 1000;  // bootstrap replicates
  unsigned threads = 1;
};

/// Verdict of one benchmark pair, or the reason it was skipped.
struct PairOutcome {
  std::string id;
  PairType pair_type = PairType::Numerical;
  Structure truth = Structure::Causal;
  std::optional<CausalVerdict> verdict;
  std::string error;

  bool correct() const { return verdict && verdict->structure == truth; }
};

struct StratumScore {
  std::size_t count = 0;
  std::size_t skipped = 0;
  std::optional<double> accuracy;  // point accuracy; empty when count == 0
  std::optional<BootstrapScore> bootstrap;
};

/// Accuracy of a benchmark run per pair type and in total. Standard
/// deviations are taken over bootstrap replicates.
struct BenchReport {
  std::array<StratumScore, 4> per_stratum;  // indexed by PairType
  StratumScore total;
  TestPolicy test_policy;
  double ci = 0.05;
  int bootstrap_replicates = 0;
  RngSeed seed;
  std::vector<PairOutcome> pairs;

  const StratumScore& stratum(PairType t) const { return per_stratum[static_cast<std::size_t>(t)]; }
};

namespace detail {

inline StratumScore score_stratum(const std::vector<bool>& correct, std::size_t skipped, int replicates,
                                  RngSeed seed) {
  StratumScore s;
  s.count = correct.size();
  s.skipped = skipped;
  if (correct.empty()) return s;
  std::size_t hits = 0;
  for (bool c : correct) hits += c;
  s.accuracy = static_cast<double>(hits) / static_cast<double>(correct.size());
  s.bootstrap = bootstrap_accuracy(correct, replicates, seed);
  return s;
}

}  // namespace detail

/// Classifies every pair with resfit and scores the verdicts per stratum.
/// Pair i uses substream (0, i) of `seed`; stratum bootstraps use (1, stratum).
/// Pairs that fail are kept as skipped and count as incorrect.
inline BenchReport run_benchmark(std::span<const LabeledPair> labeled, const BenchConfig& config, RngSeed seed) {
  if (labeled.empty()) throw InvalidInput("run_benchmark: empty dataset");
  BenchReport report;
  report.test_policy = config.discovery.policy;
  report.ci = config.discovery.ci;
  report.bootstrap_replicates = config.replicates;
  report.seed = seed;
  report.pairs.resize(labeled.size());

  parallel_for(labeled.size(), config.threads, [&](std::size_t i) {
    const auto& lp = labeled[i];
    auto& out = report.pairs[i];
    out.id = lp.id;
    out.pair_type = lp.pair.pair_type();
    out.truth = lp.truth;
    try {
      out.verdict = resfit(lp.pair, config.discovery, derive_seed(seed, {0, i}));
    } catch (const Error& e) {
      out.error = e.what();
    }
  });

  std::array<std::vector<bool>, 4> correct;
  std::array<std::size_t, 4> skipped{};
  std::vector<bool> all;
  std::size_t all_skipped = 0;
  for (const auto& p : report.pairs) {
    const auto s = static_cast<std::size_t>(p.pair_type);
    correct[s].push_back(p.correct());
    all.push_back(p.correct());
    if (!p.verdict) {
      ++skipped[s];
      ++all_skipped;
    }
  }
  for (std::size_t s = 0; s < 4; ++s)
    report.per_stratum[s] = detail::score_stratum(correct[s], skipped[s], config.replicates, derive_seed(seed, {1, s}));
  report.total = detail::score_stratum(all, all_skipped, config.replicates, derive_seed(seed, {1, 4}));
  return report;
}

// Rendering ------------------------------------------------------------------

namespace detail {

inline std::string fixed(std::optional<double> v, int digits = 6) {
  if (!v) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
  return buf;
}

struct ReportLine {
  std::string stratum;
  std::string test;
  const StratumScore* score;
};

inline std::vector<ReportLine> report_lines(const BenchReport& r) {
  std::vector<ReportLine> lines;
  for (auto t : kAllPairTypes)
    lines.push_back({std::string(to_string(t)), std::string(to_string(r.test_policy.select(t))), &r.stratum(t)});
  lines.push_back({"Total", "policy", &r.total});
  return lines;
}

inline std::optional<double> boot_mean(const StratumScore& s) {
  return s.bootstrap ? std::optional(s.bootstrap->mean) : std::nullopt;
}
inline std::optional<double> boot_std(const StratumScore& s) {
  return s.bootstrap ? std::optional(s.bootstrap->std) : std::nullopt;
}

}  // namespace detail

inline void render_table(std::ostream& out, const BenchReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %-6s %7s %7s %10s %10s %10s\n", "Stratum", "Test", "Count", "Skipped",
                "Accuracy", "Mean", "Std");
  out << buf;
  for (const auto& l : detail::report_lines(r)) {
    std::snprintf(buf, sizeof buf, "%-12s %-6s %7zu %7zu %10s %10s %10s\n", l.stratum.c_str(), l.test.c_str(),
                  l.score->count, l.score->skipped, detail::fixed(l.score->accuracy).c_str(),
                  detail::fixed(detail::boot_mean(*l.score)).c_str(),
                  detail::fixed(detail::boot_std(*l.score)).c_str());
    out << buf;
  }
  out << "mean/std over " << r.bootstrap_replicates << " bootstrap replicates; ci " << detail::fixed(r.ci, 4)
      << "; seed " << r.seed.value << "\n";
}

inline constexpr const char* kReportCsvHeader = "stratum,test,count,skipped,accuracy,mean,std,replicates,seed";

inline void render_csv(std::ostream& out, const BenchReport& r) {
  out << kReportCsvHeader << "\n";
  for (const auto& l : detail::report_lines(r))
    out << l.stratum << ',' << l.test << ',' << l.score->count << ',' << l.score->skipped << ','
        << detail::fixed(l.score->accuracy) << ',' << detail::fixed(detail::boot_mean(*l.score)) << ','
        << detail::fixed(detail::boot_std(*l.score)) << ',' << r.bootstrap_replicates << ',' << r.seed.value
        << "\n";
}

inline void render_json_lines(std::ostream& out, const BenchReport& r) {
  auto num = [](std::optional<double> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  for (const auto& l : detail::report_lines(r)) {
    nlohmann::ordered_json j;
    j["stratum"] = l.stratum;
    j["test"] = l.test;
    j["count"] = l.score->count;
    j["skipped"] = l.score->skipped;
    j["accuracy"] = num(l.score->accuracy);
    j["mean"] = num(detail::boot_mean(*l.score));
    j["std"] = num(detail::boot_std(*l.score));
    j["replicates"] = r.bootstrap_replicates;
    j["seed"] = r.seed.value;
    out << j.dump() << "\n";
  }
}

// Parsing a rendered CSV report back --------------------------------------------

struct ReportRow {
  std::string stratum;
  std::string test;
  std::size_t count = 0;
  std::size_t skipped = 0;
  std::optional<double> accuracy;
  std::optional<double> mean;
  std::optional<double> std;
};

inline std::vector<ReportRow> parse_report_csv(std::istream& in) {
  std::vector<std::string_view> header;
  for (auto f : csv::split(kReportCsvHeader)) header.push_back(f);
  std::vector<ReportRow> rows;
  for (const auto& [line, text] : csv::read_table(in, header, "report")) {
    const auto f = csv::split(text);
    if (f.size() != header.size()) throw ParseError("report: expected " + std::to_string(header.size()) + " fields", line);
    auto opt = [&](std::string_view s) -> std::optional<double> {
      if (s == "NA") return std::nullopt;
      double v = 0.0;
      if (!csv::parse_double(s, v)) throw ParseError("report: bad number '" + std::string(s) + "'", line);
      return v;
    };
    long count = 0, skipped = 0;
    if (!csv::parse_int(f[2], count) || !csv::parse_int(f[3], skipped) || count < 0 || skipped < 0)
      throw ParseError("report: bad count", line);
    rows.push_back({std::string(f[0]), std::string(f[1]), static_cast<std::size_t>(count),
                    static_cast<std::size_t>(skipped), opt(f[4]), opt(f[5]), opt(f[6])});
  }
  if (rows.empty()) throw ParseError("report: no rows");
  return rows;
}

}  // namespace pairdisc
