// Acceptance checks. `acceptance N` runs criterion N, prints one PASS/FAIL
// line with the measured values and exits non-zero on failure. Without an
// argument every criterion runs in turn.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <pairdisc/pairdisc.hpp>

#include "oracles.hpp"

using namespace pairdisc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool report(int criterion, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << criterion << " (" << name << "): " << detail << std::endl;
  return pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> uniform(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& e : v) e = rng.uniform01();
  return v;
}

VariablePair as_pair(const SynthSample& s) {
  return VariablePair(ObservationSeries(s.x, "A"), ObservationSeries(s.y, "B"));
}

DiscoveryConfig uniform_config(TestKind kind) {
  DiscoveryConfig cfg;
  cfg.policy = TestPolicy::uniform(kind);
  cfg.tests.bins = 10;
  cfg.tests.tic.permutations = 100;
  return cfg;
}

// 1 -------------------------------------------------------------------------

bool criterion_1() {
  const auto start = Clock::now();
  const auto cfg = uniform_config(TestKind::Chi2);
  std::map<Structure, int> hits;
  for (std::uint64_t s = 0; s < 100; ++s) {
    for (auto kind : kAllStructures) {
      const auto v = resfit(as_pair(generate_structure(kind, 1000, RngSeed{s})), cfg, RngSeed{s});
      const bool c = v.p_causal > 0.05, a = v.p_anticausal > 0.05;
      bool ok = false;
      switch (kind) {
        case Structure::Causal: ok = c && v.p_anticausal < 0.05; break;
        case Structure::Anticausal: ok = a && v.p_causal < 0.05; break;
        case Structure::Independent: ok = c && a; break;
        case Structure::Confounded: ok = v.p_causal < 0.05 && v.p_anticausal < 0.05; break;
      }
      hits[kind] += ok;
    }
  }
  const double t = seconds_since(start);
  const bool pass = hits[Structure::Causal] >= 90 && hits[Structure::Anticausal] >= 90 &&
                    hits[Structure::Independent] >= 85 && hits[Structure::Confounded] >= 85 && t < 30.0;
  return report(1, "p-value pattern over 100 seeds", pass,
                fmt("causal %d/100 (>=90), anticausal %d/100 (>=90), independent %d/100 (>=85), "
                    "confounded %d/100 (>=85), %.1f s (<30)",
                    hits[Structure::Causal], hits[Structure::Anticausal], hits[Structure::Independent],
                    hits[Structure::Confounded], t));
}

// 2 -------------------------------------------------------------------------

std::vector<LabeledPair> synthetic_corpus(std::size_t per_structure, std::size_t n, RngSeed seed) {
  std::vector<LabeledPair> out;
  for (auto kind : kAllStructures)
    for (std::size_t i = 0; i < per_structure; ++i) {
      const auto s = generate_structure(kind, n, derive_seed(seed, {static_cast<std::uint64_t>(kind), i}));
      out.push_back({std::string(to_string(kind)) + "_" + std::to_string(i), as_pair(s), kind});
    }
  return out;
}

bool criterion_2() {
  const auto start = Clock::now();
  const auto corpus = synthetic_corpus(100, 1000, RngSeed{2024});
  BenchConfig cfg;
  cfg.replicates = 100;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());

  cfg.discovery = uniform_config(TestKind::Chi2);
  const auto chi2 = run_benchmark(corpus, cfg, RngSeed{1});
  cfg.discovery = uniform_config(TestKind::TIC);
  const auto tic = run_benchmark(corpus, cfg, RngSeed{1});
  const double t = seconds_since(start);

  auto per_structure = [](const BenchReport& r) {
    std::map<Structure, int> hits;
    for (const auto& p : r.pairs) hits[p.truth] += p.correct();
    return fmt("C %d A %d I %d F %d", hits[Structure::Causal], hits[Structure::Anticausal],
               hits[Structure::Independent], hits[Structure::Confounded]);
  };
  const double a_chi2 = *chi2.total.accuracy, a_tic = *tic.total.accuracy;
  const bool pass = a_chi2 >= 0.85 && a_tic >= 0.75 && t < 300.0;
  return report(2, "four-way accuracy on 400 synthetic pairs", pass,
                fmt("chi2 %.4f (>=0.85; %s), tic %.4f (>=0.75; %s), %.1f s (<300)", a_chi2,
                    per_structure(chi2).c_str(), a_tic, per_structure(tic).c_str(), t));
}

// 3 -------------------------------------------------------------------------

bool criterion_3() {
  std::map<Structure, double> med;
  for (auto kind : kAllStructures) med[kind] = median(mi_distribution(kind, 200, 1000, 10, RngSeed{3}));
  const double anti = med[Structure::Anticausal] / med[Structure::Causal];
  const double conf = med[Structure::Confounded] / med[Structure::Independent];
  const double ci = std::abs(med[Structure::Causal] / med[Structure::Independent]);
  const bool pass = anti >= 5.0 && conf >= 5.0 && ci >= 0.5 && ci <= 2.0;
  return report(3, "residual MI ordering", pass,
                fmt("medians C %.5f A %.5f I %.5f F %.5f; A/C %.2f (>=5), F/I %.2f (>=5), C/I %.2f (in [0.5, 2])",
                    med[Structure::Causal], med[Structure::Anticausal], med[Structure::Independent],
                    med[Structure::Confounded], anti, conf, ci));
}

// 4 -------------------------------------------------------------------------

bool criterion_4() {
  std::mt19937_64 gen(4);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int r = std::uniform_int_distribution<int>(1, 12)(gen);
    const int c = std::uniform_int_distribution<int>(1, 12)(gen);
    const int max_count = std::uniform_int_distribution<int>(1, 1000)(gen);
    std::uniform_int_distribution<long> cell(0, max_count);
    std::bernoulli_distribution zero(0.2);
    std::vector<std::vector<long>> rows(r, std::vector<long>(c));
    std::vector<std::int64_t> flat;
    long total = 0;
    for (auto& row : rows)
      for (auto& v : row) {
        v = zero(gen) ? 0 : cell(gen);
        total += v;
      }
    if (total == 0) rows[0][0] = 1;
    for (const auto& row : rows)
      for (long v : row) flat.push_back(v);
    const double got = mutual_information(ContingencyTable(r, c, flat));
    worst = std::max(worst, std::abs(got - oracle::mutual_information(rows)));
  }
  return report(4, "MI against direct summation", worst <= 1e-12,
                fmt("max |error| %.3g over 1000 tables up to 12x12 (<=1e-12)", worst));
}

// 5 -------------------------------------------------------------------------

bool criterion_5() {
  double worst = 0.0;
  int worst_df = 0;
  double worst_s = 0.0;
  for (int df = 1; df <= 200; ++df)
    for (int step = 0; step <= 600; ++step) {
      const double s = 0.5 * step;
      const double err = std::abs(chi2_pvalue(s, df) - oracle::chi2_tail_by_quadrature(s, df));
      if (err > worst) {
        worst = err;
        worst_df = df;
        worst_s = s;
      }
    }
  return report(5, "chi2 p-value against quadrature", worst <= 1e-6,
                fmt("max |error| %.3g at df %d, statistic %.1f; df 1..200, statistic 0..300 step 0.5 (<=1e-6)",
                    worst, worst_df, worst_s));
}

// 6 -------------------------------------------------------------------------

bool criterion_6() {
  // Weak dependence: the joint stays close to the product of its margins.
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(derive_seed(RngSeed{6}, s));
    const auto x = uniform(rng, 1000);
    auto y = uniform(rng, 1000);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 0.05 * x[i];
    const auto table = bin_uniform(x, y, 10);
    const double chi2 = chi2_statistic(table).statistic;
    const double mi = mutual_information(table);
    worst = std::max(worst, std::abs(chi2 - 2.0 * 1000.0 * mi) / chi2);
  }
  return report(6, "chi2 versus 2n MI", worst < 0.15,
                fmt("max relative gap %.4f over 100 simulations of y = u + 0.05 x, n 1000 (<0.15)", worst));
}

// 7 -------------------------------------------------------------------------

std::function<double(double)> random_increasing(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.5, 3.0);
  const double a = u(gen), b = u(gen) - 1.75;
  switch (std::uniform_int_distribution<int>(0, 5)(gen)) {
    case 0: return [a, b](double v) { return a * v + b; };
    case 1: return [a](double v) { return std::exp(a * v); };
    case 2: return [a, b](double v) { return v * v * v + a * v + b; };
    case 3: return [a](double v) { return std::atan(a * v); };
    case 4: return [a](double v) { return std::log(v + a); };
    default: return [a](double v) { return std::pow(v + 0.1, a); };
  }
}

bool criterion_7() {
  Rng rng(RngSeed{7});
  const auto x = uniform(rng, 500);
  auto y = uniform(rng, 500);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.5 * y[i] + std::sin(3 * x[i]);
  const double base = tic_statistic(x, y).statistic;
  std::mt19937_64 gen(77);
  int exact = 0;
  for (int t = 0; t < 20; ++t) {
    const auto f = random_increasing(gen);
    const auto g = random_increasing(gen);
    std::vector<double> fx(x.size()), gy(y.size());
    std::transform(x.begin(), x.end(), fx.begin(), f);
    std::transform(y.begin(), y.end(), gy.begin(), g);
    exact += tic_statistic(fx, gy).statistic == base;
  }

  const auto start = Clock::now();
  int rejected = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng data(derive_seed(RngSeed{70}, t));
    const auto a = uniform(data, 500);
    const auto b = uniform(data, 500);
    rejected += tic_test(a, b, {}, derive_seed(RngSeed{71}, t)).p_value <= 0.05;
  }
  const double rate = rejected / 200.0;
  const bool pass = exact == 20 && rate >= 0.01 && rate <= 0.12;
  return report(7, "TIC invariance and calibration", pass,
                fmt("%d/20 transforms exact; rejection rate %.3f at level 0.05 over 200 independent trials, "
                    "n 500 (in [0.01, 0.12]); %.1f s",
                    exact, rate, seconds_since(start)));
}

// 8 -------------------------------------------------------------------------

bool criterion_8() {
  // Best of the chi2 and TIC stratum means; weights put most mass on the
  // numerical and mixed strata, as in the benchmark corpus.
  const std::map<PairType, double> best = {{PairType::Categorical, 0.3500},
                                           {PairType::Binary, 0.5336},
                                           {PairType::Numerical, 0.4300},
                                           {PairType::Mixed, 0.3215}};
  const std::map<PairType, double> weights = {{PairType::Categorical, 0.10},
                                              {PairType::Binary, 0.10},
                                              {PairType::Numerical, 0.37825},
                                              {PairType::Mixed, 0.42175}};
  double treated = 0.0;
  for (const auto& [t, w] : weights) treated += w * best.at(t);
  const double effect = ace(best, weights, 0.3531);
  const bool pass = std::abs(effect - 0.0335) <= 1e-4;
  return report(8, "average causal effect", pass,
                fmt("E[Y1] %.4f, E[Y0] 0.3531, ACE %.5f (%.2f%%) (0.0335 +- 0.0001)", treated, effect, 100 * effect));
}

// 9 -------------------------------------------------------------------------

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun cli(const std::string& args) {
  const std::string cmd = std::string(PAIRDISC_CLI) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Writes `pairs` in the challenge layout and returns (pairs path, truth path).
std::pair<std::string, std::string> write_corpus(const fs::path& dir, const std::vector<LabeledPair>& pairs) {
  const auto pp = (dir / "pairs.csv").string(), tp = (dir / "truth.csv").string();
  std::ofstream po(pp), to(tp);
  po << "SampleID,A,B\n";
  to << "SampleID,Target,Details\n";
  auto list = [](std::span<const double> v) {
    std::string s;
    for (double e : v) s += fmt("%.17g ", e);
    return s;
  };
  for (const auto& p : pairs) {
    po << p.id << ',' << list(p.pair.a().values()) << ',' << list(p.pair.b().values()) << "\n";
    switch (p.truth) {
      case Structure::Causal: to << p.id << ",1,1\n"; break;
      case Structure::Anticausal: to << p.id << ",-1,2\n"; break;
      case Structure::Confounded: to << p.id << ",0,3\n"; break;
      case Structure::Independent: to << p.id << ",0,4\n"; break;
    }
  }
  return {pp, tp};
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("pairdisc_acceptance_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

bool criterion_9() {
  TempDir dir;
  cli("synth causal 500 --seed 9 --out " + (dir / "sample.csv"));
  const auto [pairs, truth] = write_corpus(dir.path, synthetic_corpus(3, 300, RngSeed{9}));
  const std::string bench = "bench " + pairs + " " + truth + " --seed 9 --replicates 200 --permutations 19";
  const std::string chi2_report = dir / "chi2.csv", tic_report = dir / "tic.csv";
  cli(bench + " --format csv --out " + chi2_report);
  cli(bench + " --format csv --policy all=tic --out " + tic_report);

  // Each command is run twice; commands that take --threads also run with 1 and 3 workers.
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"synth confounded 200 --seed 9", {""}},
      {"discover " + (dir / "sample.csv") + " --seed 9", {""}},
      {"discover " + (dir / "sample.csv") + " --seed 9 --policy all=tic --format json-lines", {""}},
      {"mi-density all 20 500 --seed 9 --bins 8", {""}},
      {bench + " --format table", {" --threads 1", " --threads 3"}},
      {bench + " --format csv --policy numerical=tic", {" --threads 1", " --threads 3"}},
      {bench + " --format json-lines", {" --threads 1", " --threads 3"}},
      {"ace " + chi2_report + " " + tic_report, {""}},
  };
  int stable = 0;
  std::string failures;
  for (const auto& [cmd, variants] : commands) {
    std::vector<std::string> outputs;
    bool ok = true;
    for (const auto& v : variants)
      for (int rep = 0; rep < 2; ++rep) {
        const auto r = cli(cmd + v);
        ok = ok && r.code == 0;
        outputs.push_back(r.out);
      }
    ok = ok && std::all_of(outputs.begin(), outputs.end(), [&](const auto& o) { return o == outputs.front(); });
    stable += ok;
    if (!ok) failures += " [" + cmd.substr(0, cmd.find(' ')) + "]";
  }
  // Files written with --out match standard output byte for byte.
  const auto direct = cli("synth anticausal 100 --seed 9");
  cli("synth anticausal 100 --seed 9 --out " + (dir / "a.csv"));
  const bool out_ok = slurp(dir / "a.csv") + "Anticausal\n" == direct.out;
  const bool pass = stable == static_cast<int>(commands.size()) && out_ok;
  return report(9, "determinism", pass,
                fmt("%d/%zu commands byte-identical across repeated runs and thread counts; --out %s%s", stable,
                    commands.size(), out_ok ? "matches stdout" : "differs", failures.c_str()));
}

// 10 ------------------------------------------------------------------------

// A synthetic corpus covering all four pair types: numerical samples are
// quantised to a few levels (categorical) or split at the median (binary).
std::vector<double> quantise(std::span<const double> v, int levels) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = std::min(levels - 1.0, std::floor(levels * (v[i] - *lo) / (*hi - *lo)));
  return out;
}

bool criterion_10() {
  TempDir dir;
  std::vector<LabeledPair> corpus;
  std::size_t id = 0;
  for (auto kind : kAllStructures)
    for (std::uint64_t i = 0; i < 5; ++i) {
      const auto s = generate_structure(kind, 1000, derive_seed(RngSeed{10}, {static_cast<std::uint64_t>(kind), i}));
      auto add = [&](std::vector<double> a, std::vector<double> b) {
        corpus.push_back({"p" + std::to_string(id++),
                          VariablePair(ObservationSeries(std::move(a), "A"), ObservationSeries(std::move(b), "B")), kind});
      };
      add(s.x, s.y);
      add(quantise(s.x, 5), quantise(s.y, 6));
      add(quantise(s.x, 2), quantise(s.y, 2));
      add(s.x, quantise(s.y, 4));
    }
  const auto [pairs, truth] = write_corpus(dir.path, corpus);
  const auto r = cli("bench " + pairs + " " + truth + " --seed 10 --replicates 1000");
  std::cout << r.out;
  std::size_t rows = 0;
  for (const char* s : {"Categorical", "Binary", "Numerical", "Mixed", "Total"})
    rows += r.out.find(s) != std::string::npos;
  const bool pass = r.code == 0 && rows == 5;
  return report(10, "corpus ingestion and stratified report (values informational)", pass,
                fmt("exit %d, %zu/5 strata reported for %zu pairs", r.code, rows, corpus.size()));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<bool()>> criteria = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                       criterion_5, criterion_6, criterion_7, criterion_8,
                                                       criterion_9, criterion_10};
  try {
    if (argc > 1) {
      const int n = std::atoi(argv[1]);
      if (n < 1 || n > static_cast<int>(criteria.size())) {
        std::cerr << "usage: acceptance [1-" << criteria.size() << "]\n";
        return 2;
      }
      return criteria[n - 1]() ? 0 : 1;
    }
    int failed = 0;
    for (const auto& c : criteria) failed += !c();
    return failed ? 1 : 0;
  } catch (const std::exception& e) {
    std::cout << "FAIL  error: " << e.what() << std::endl;
    return 1;
  }
}
