// pairdisc: pairwise causal discovery from the command line.
//
// Exit codes: 0 ok, 2 input error, 3 degenerate data, 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <pairdisc/pairdisc.hpp>

namespace {

using namespace pairdisc;

enum ExitCode { kOk = 0, kInputError = 2, kDegenerate = 3, kIoError = 4 };

struct CommonOptions {
  double ci = 0.05;
  std::size_t bins = 10;
  int permutations = 100;
  std::uint64_t seed = 0;
  std::vector<std::string> policy;
  std::string format = "table";
  std::string out;
};

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Output goes to --out when given, standard output otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw IoError("cannot open " + path + " for writing");
    path_ = path;
  }

  std::ostream& stream() { return file_ ? *file_ : std::cout; }

  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failed" + (path_.empty() ? std::string() : " for " + path_));
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::string path_;
};

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

TestPolicy parse_policy(const std::vector<std::string>& specs) {
  TestPolicy policy;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw InvalidInput("--policy expects <type>=<test>, got '" + spec + "'");
    const auto type = spec.substr(0, eq);
    const auto test = parse_test_kind(spec.substr(eq + 1));
    if (!test) throw InvalidInput("unknown test '" + spec.substr(eq + 1) + "' (expected chi2 or tic)");
    if (detail::lower(type) == "all") {
      policy = TestPolicy::uniform(*test);
      continue;
    }
    const auto pt = parse_pair_type(type);
    if (!pt) throw InvalidInput("unknown pair type '" + type + "'");
    policy.set(*pt, *test);
  }
  return policy;
}

DiscoveryConfig discovery_config(const CommonOptions& o) {
  if (!(o.ci > 0.0 && o.ci < 1.0)) throw InvalidInput("--ci must lie in (0, 1)");
  if (o.bins < 2) throw InvalidInput("--bins must be at least 2");
  if (o.permutations < 19) throw InvalidInput("--permutations must be at least 19");
  DiscoveryConfig cfg;
  cfg.ci = o.ci;
  cfg.policy = parse_policy(o.policy);
  cfg.tests.bins = o.bins;
  cfg.tests.tic.permutations = o.permutations;
  return cfg;
}

void add_common(CLI::App& cmd, CommonOptions& o, bool with_tests) {
  if (with_tests) {
    cmd.add_option("--ci", o.ci, "Significance level of the directional tests")->capture_default_str();
    cmd.add_option("--bins", o.bins, "Uniform grid bins per axis for chi2")->capture_default_str();
    cmd.add_option("--permutations", o.permutations, "Permutations of the TIC null")->capture_default_str();
    cmd.add_option("--policy", o.policy, "Test override <type>=<test>, e.g. numerical=tic or all=chi2");
    cmd.add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json-lines"}))
        ->capture_default_str();
  }
  cmd.add_option("--seed", o.seed, "Random seed")->envname("PAIRDISC_SEED")->capture_default_str();
  cmd.add_option("--out", o.out, "Output file (default: standard output)");
}

// discover -------------------------------------------------------------------

VariablePair parse_discover_input(const std::string& text) {
  std::istringstream in(text);
  std::string first;
  while (std::getline(in, first))
    if (!csv::trim(first).empty()) break;
  const auto header = csv::split(first);
  if (header.size() == 3 && detail::lower(header[0]) == "sampleid") {
    std::istringstream all(text);
    const auto rows = csv::read_table(all, {"SampleID", "A", "B"}, "pairs");
    if (rows.size() != 1) throw ParseError("pairs input must hold exactly one row, got " + std::to_string(rows.size()));
    const auto f = csv::split(rows[0].second);
    if (f.size() != 3) throw ParseError("expected 3 fields", rows[0].first);
    auto a = csv::parse_list(f[1], rows[0].first);
    auto b = csv::parse_list(f[2], rows[0].first);
    if (a.size() != b.size()) throw ParseError("A and B have different lengths", rows[0].first);
    return VariablePair(ObservationSeries(std::move(a), "A"), ObservationSeries(std::move(b), "B"));
  }

  std::istringstream all(text);
  std::vector<double> a, b;
  for (const auto& [line, row] : csv::read_table(all, {"A", "B"}, "input")) {
    const auto f = csv::split(row);
    if (f.size() != 2 || f[0].empty() || f[1].empty()) throw ParseError("columns A and B have unequal lengths", line);
    double va = 0, vb = 0;
    if (!csv::parse_double(f[0], va) || !csv::parse_double(f[1], vb)) throw ParseError("not a number", line);
    a.push_back(va);
    b.push_back(vb);
  }
  return VariablePair(ObservationSeries(std::move(a), "A"), ObservationSeries(std::move(b), "B"));
}

void print_verdict(std::ostream& out, const CausalVerdict& v, const std::string& format) {
  if (format == "csv") {
    out << "structure,p_causal,p_anticausal,test_used,pair_type\n"
        << to_string(v.structure) << ',' << format_g(v.p_causal) << ',' << format_g(v.p_anticausal) << ','
        << to_string(v.test_used) << ',' << to_string(v.pair_type) << "\n";
  } else if (format == "json-lines") {
    nlohmann::ordered_json j;
    j["structure"] = to_string(v.structure);
    j["p_causal"] = v.p_causal;
    j["p_anticausal"] = v.p_anticausal;
    j["test_used"] = to_string(v.test_used);
    j["pair_type"] = to_string(v.pair_type);
    out << j.dump() << "\n";
  } else {
    out << "structure     " << to_string(v.structure) << "\n"
        << "p_causal      " << format_g(v.p_causal) << "\n"
        << "p_anticausal  " << format_g(v.p_anticausal) << "\n"
        << "test_used     " << to_string(v.test_used) << "\n"
        << "pair_type     " << to_string(v.pair_type) << "\n";
  }
}

int cmd_discover(const std::string& input, const CommonOptions& o) {
  const auto cfg = discovery_config(o);
  const auto pair = parse_discover_input(read_input(input));
  if (pair.size() < 10) throw DegenerateData("need at least 10 observations, got " + std::to_string(pair.size()));
  const auto verdict = resfit(pair, cfg, RngSeed{o.seed});
  Output out(o.out);
  print_verdict(out.stream(), verdict, o.format);
  out.finish();
  return kOk;
}

// synth ----------------------------------------------------------------------

int cmd_synth(const std::string& kind_name, std::size_t n, const CommonOptions& o) {
  const auto kind = parse_structure(kind_name);
  if (!kind) throw InvalidInput("unknown structure '" + kind_name + "'");
  const auto sample = generate_structure(*kind, n, RngSeed{o.seed});
  Output out(o.out);
  auto& s = out.stream();
  s << "A,B\n";
  for (std::size_t i = 0; i < sample.n; ++i) s << format_exact(sample.x[i]) << ',' << format_exact(sample.y[i]) << "\n";
  out.finish();
  std::cerr << to_string(*kind) << "\n";
  return kOk;
}

// mi-density -----------------------------------------------------------------

int cmd_mi_density(const std::string& kind_name, std::size_t replicates, std::size_t n, const CommonOptions& o) {
  std::vector<Structure> kinds;
  if (detail::lower(kind_name) == "all") {
    kinds.assign(kAllStructures.begin(), kAllStructures.end());
  } else if (const auto k = parse_structure(kind_name)) {
    kinds.push_back(*k);
  } else {
    throw InvalidInput("unknown structure '" + kind_name + "'");
  }
  if (replicates < 1) throw InvalidInput("replicates must be at least 1");
  if (o.bins < 2) throw InvalidInput("--bins must be at least 2");
  Output out(o.out);
  auto& s = out.stream();
  s << "structure,mi\n";
  for (auto k : kinds)
    for (double mi : mi_distribution(k, replicates, n, o.bins, RngSeed{o.seed})) s << to_string(k) << ',' << format_exact(mi) << "\n";
  out.finish();
  return kOk;
}

// bench ----------------------------------------------------------------------

int cmd_bench(const std::string& pairs_path, const std::string& truth_path, const CommonOptions& o, int replicates,
              unsigned threads) {
  BenchConfig cfg;
  cfg.discovery = discovery_config(o);
  if (replicates < 2) throw InvalidInput("--replicates must be at least 2");
  cfg.replicates = replicates;
  cfg.threads = threads;
  const auto data = load_pairs(pairs_path, truth_path);
  const auto report = run_benchmark(data, cfg, RngSeed{o.seed});

  Output out(o.out);
  if (o.format == "csv")
    render_csv(out.stream(), report);
  else if (o.format == "json-lines")
    render_json_lines(out.stream(), report);
  else
    render_table(out.stream(), report);
  out.finish();
  if (report.total.skipped > 0) {
    std::cerr << report.total.skipped << " pair(s) skipped:\n";
    for (const auto& p : report.pairs)
      if (!p.verdict) std::cerr << "  " << p.id << ": " << p.error << "\n";
  }
  return kOk;
}

// ace ------------------------------------------------------------------------

std::map<PairType, double> parse_weights(const std::string& spec_or_path) {
  std::string spec = spec_or_path;
  if (std::filesystem::is_regular_file(spec_or_path)) spec = read_input(spec_or_path);
  std::map<PairType, double> weights;
  std::string item;
  for (char& c : spec)
    if (c == '\n' || c == ';') c = ',';
  std::istringstream in(spec);
  while (std::getline(in, item, ',')) {
    const auto t = csv::trim(item);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw InvalidInput("weights expect <type>=<weight>, got '" + std::string(t) + "'");
    const auto type = parse_pair_type(csv::trim(t.substr(0, eq)));
    double w = 0;
    if (!type) throw InvalidInput("unknown pair type '" + std::string(t.substr(0, eq)) + "'");
    if (!csv::parse_double(t.substr(eq + 1), w)) throw InvalidInput("bad weight '" + std::string(t.substr(eq + 1)) + "'");
    weights[*type] = w;
  }
  if (weights.empty()) throw InvalidInput("no weights given");
  return weights;
}

int cmd_ace(const std::vector<std::string>& reports, const std::string& weights_spec, std::optional<double> pooled,
            const CommonOptions& o) {
  std::map<PairType, double> best;
  std::map<PairType, std::size_t> counts;
  double total_sum = 0.0;
  int total_n = 0;
  for (const auto& path : reports) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    for (const auto& row : parse_report_csv(in)) {
      if (detail::lower(row.stratum) == "total") {
        if (row.mean) {
          total_sum += *row.mean;
          ++total_n;
        }
        continue;
      }
      const auto t = parse_pair_type(row.stratum);
      if (!t) throw ParseError("report: unknown stratum '" + row.stratum + "'");
      counts[*t] = std::max(counts[*t], row.count);
      if (row.mean && (!best.count(*t) || *row.mean > best[*t])) best[*t] = *row.mean;
    }
  }

  std::map<PairType, double> weights;
  if (!weights_spec.empty()) {
    weights = parse_weights(weights_spec);
  } else {
    std::size_t n = 0;
    for (const auto& [t, c] : counts) n += c;
    if (n == 0) throw InvalidInput("reports hold no pairs to derive weights from");
    for (const auto& [t, c] : counts) weights[t] = static_cast<double>(c) / static_cast<double>(n);
  }
  if (!pooled) {
    if (total_n == 0) throw InvalidInput("reports hold no Total mean");
    pooled = total_sum / total_n;
  }

  const double effect = ace(best, weights, *pooled);
  Output out(o.out);
  char buf[128];
  std::snprintf(buf, sizeof buf, "treated_mean %.4f\ncontrol_mean %.4f\nace %.4f\nace_percent %.2f%%\n",
                effect + *pooled, *pooled, effect, 100.0 * effect);
  out.stream() << buf;
  out.finish();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairwise causal discovery with regression and flexible independence tests"};
  app.footer("Exit codes: 0 ok, 2 input error, 3 degenerate data, 4 I/O error.\nSeed fallback: PAIRDISC_SEED.");
  app.require_subcommand(1);

  CommonOptions discover_opts, synth_opts, bench_opts, mi_opts, ace_opts;

  std::string discover_input;
  auto* discover = app.add_subcommand("discover", "Classify one pair as Causal, Anticausal, Independent or Confounded");
  discover->add_option("input", discover_input, "CSV with header A,B (or one SampleID,A,B row); '-' or omitted reads stdin");
  add_common(*discover, discover_opts, true);

  std::string synth_kind;
  std::size_t synth_n = 0;
  auto* synth = app.add_subcommand("synth", "Sample a reference structure as CSV A,B");
  synth->add_option("kind", synth_kind, "causal | anticausal | independent | confounded")->required();
  synth->add_option("n", synth_n, "Number of rows")->required();
  add_common(*synth, synth_opts, false);

  std::string pairs_path, truth_path;
  int replicates = 1000;
  unsigned threads = 1;
  auto* bench = app.add_subcommand("bench", "Score discovery on a labelled pairs corpus");
  bench->add_option("pairs", pairs_path, "Pairs CSV (SampleID,A,B)")->required();
  bench->add_option("truth", truth_path, "Truth CSV (SampleID,Target,Details)")->required();
  bench->add_option("--replicates", replicates, "Bootstrap replicates")->capture_default_str();
  bench->add_option("--threads", threads, "Worker threads")->capture_default_str();
  add_common(*bench, bench_opts, true);

  std::string mi_kind;
  std::size_t mi_replicates = 0, mi_n = 0;
  auto* mi = app.add_subcommand("mi-density", "Residual/cause mutual information samples per structure");
  mi->add_option("kind", mi_kind, "Structure name or 'all'")->required();
  mi->add_option("replicates", mi_replicates, "Samples per structure")->required();
  mi->add_option("n", mi_n, "Observations per sample")->required();
  mi->add_option("--bins", mi_opts.bins, "Uniform grid bins per axis")->capture_default_str();
  add_common(*mi, mi_opts, false);

  std::vector<std::string> report_paths;
  std::string weights_spec;
  std::optional<double> pooled;
  auto* ace_cmd = app.add_subcommand("ace", "Average causal effect of per-stratum test selection");
  ace_cmd->add_option("reports", report_paths, "bench CSV reports, one per test")->required();
  ace_cmd->add_option("--weights", weights_spec, "type=weight list or file (default: stratum counts)");
  ace_cmd->add_option("--pooled", pooled, "Control mean (default: mean of the reports' Total means)");
  ace_cmd->add_option("--out", ace_opts.out, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*discover) return cmd_discover(discover_input, discover_opts);
    if (*synth) return cmd_synth(synth_kind, synth_n, synth_opts);
    if (*bench) return cmd_bench(pairs_path, truth_path, bench_opts, replicates, threads);
    if (*mi) return cmd_mi_density(mi_kind, mi_replicates, mi_n, mi_opts);
    if (*ace_cmd) return cmd_ace(report_paths, weights_spec, pooled, ace_opts);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const DegenerateData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
