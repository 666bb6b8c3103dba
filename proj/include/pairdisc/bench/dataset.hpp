#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "../errors.hpp"
#include "../model.hpp"

namespace pairdisc {

/// A benchmark pair with its ground-truth structure.
struct LabeledPair {
  std::string id;
  VariablePair pair;
  Structure truth;
};

namespace csv {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Splits one line on commas. Quoting is not supported; fields are trimmed.
inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

inline bool parse_int(std::string_view s, long& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

/// Parses a whitespace-separated list of reals, e.g. "0 1.5 2".
inline std::vector<double> parse_list(std::string_view s, std::size_t line) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    double v = 0.0;
    if (!parse_double(s.substr(i, j - i), v))
      throw ParseError("not a number: '" + std::string(s.substr(i, j - i)) + "'", line);
    out.push_back(v);
    i = j;
  }
  return out;
}

// Reads non-empty lines, checking the header against `expected`.
// Returns (line number, content) for every data line.
inline std::vector<std::pair<std::size_t, std::string>> read_table(
    std::istream& in, const std::vector<std::string_view>& expected, const std::string& what) {
  std::string line;
  std::size_t number = 0;
  bool header = false;
  std::vector<std::pair<std::size_t, std::string>> rows;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    if (!header) {
      const auto cols = split(line);
      bool ok = cols.size() == expected.size();
      for (std::size_t i = 0; ok && i < cols.size(); ++i)
        ok = detail::lower(cols[i]) == detail::lower(expected[i]);
      if (!ok) throw ParseError(what + ": unexpected header '" + std::string(trim(line)) + "'", number);
      header = true;
      continue;
    }
    rows.emplace_back(number, line);
  }
  if (!header) throw ParseError(what + ": empty file (missing header)");
  return rows;
}

}  // namespace csv

/// Ground-truth code of the cause-effect pairs layout: Target 1 is A -> B,
/// Target -1 is B -> A, Target 0 needs Details 3 (confounded) or 4 (independent).
inline Structure decode_truth(long target, long details) {
  if (target == 1) return Structure::Causal;
  if (target == -1) return Structure::Anticausal;
  if (target != 0) throw InvalidInput("unknown Target code " + std::to_string(target));
  if (details == 3) return Structure::Confounded;
  if (details == 4) return Structure::Independent;
  throw InvalidInput("unknown Details code " + std::to_string(details));
}

/// Reads a pairs file (`SampleID,A,B`) and a truth file
/// (`SampleID,Target,Details`), matched by SampleID. Pairs keep the order of
/// the pairs file.
inline std::vector<LabeledPair> load_pairs(std::istream& pairs_in, std::istream& truth_in) {
  std::map<std::string, Structure> truth;
  for (const auto& [line, text] : csv::read_table(truth_in, {"SampleID", "Target", "Details"}, "truth")) {
    const auto f = csv::split(text);
    if (f.size() != 3) throw ParseError("truth: expected 3 fields", line);
    long target = 0, details = 0;
    if (!csv::parse_int(f[1], target)) throw ParseError("truth: bad Target '" + std::string(f[1]) + "'", line);
    if (!csv::parse_int(f[2], details)) throw ParseError("truth: bad Details '" + std::string(f[2]) + "'", line);
    Structure s;
    try {
      s = decode_truth(target, details);
    } catch (const InvalidInput& e) {
      throw ParseError(std::string("truth: ") + e.what(), line);
    }
    if (!truth.emplace(std::string(f[0]), s).second)
      throw ParseError("truth: duplicate SampleID '" + std::string(f[0]) + "'", line);
  }
  if (truth.empty()) throw ParseError("truth: no rows");

  std::vector<LabeledPair> out;
  for (const auto& [line, text] : csv::read_table(pairs_in, {"SampleID", "A", "B"}, "pairs")) {
    const auto f = csv::split(text);
    if (f.size() != 3) throw ParseError("pairs: expected 3 fields", line);
    const std::string id(f[0]);
    auto a = csv::parse_list(f[1], line);
    auto b = csv::parse_list(f[2], line);
    if (a.size() != b.size())
      throw ParseError("pairs: '" + id + "' has A of length " + std::to_string(a.size()) +
                           " and B of length " + std::to_string(b.size()),
                       line);
    const auto it = truth.find(id);
    if (it == truth.end()) throw ParseError("pairs: no truth row for '" + id + "'", line);
    try {
      out.push_back({id, VariablePair(ObservationSeries(std::move(a), "A"), ObservationSeries(std::move(b), "B")),
                     it->second});
    } catch (const InvalidInput& e) {
      throw ParseError("pairs: '" + id + "': " + e.what(), line);
    }
    truth.erase(it);
  }
  if (!truth.empty()) throw ParseError("truth: no pair for SampleID '" + truth.begin()->first + "'");
  return out;
}

inline std::vector<LabeledPair> load_pairs(const std::string& pairs_path, const std::string& truth_path) {
  std::ifstream pairs(pairs_path), truth(truth_path);
  if (!pairs) throw IoError("cannot open " + pairs_path);
  if (!truth) throw IoError("cannot open " + truth_path);
  return load_pairs(pairs, truth);
}

}  // namespace pairdisc
