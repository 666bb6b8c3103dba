#pragma once

#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "indep/contingency.hpp"
#include "model.hpp"
#include "random.hpp"
#include "regress.hpp"

namespace pairdisc {

/// One draw of a reference structure.
struct SynthSample {
  std::vector<double> x;
  std::vector<double> y;
  Structure truth = Structure::Causal;
  std::size_t n = 0;
  RngSeed seed;
};

/// Draws Z, X, Y ~ Uniform(0, 1) and builds
///   Causal       (X, X + Z)
///   Anticausal   (X + Z, X)
///   Independent  (X, Y)
///   Confounded   (X + Z, Y + Z)
/// Z, X and Y come from fixed substreams of `seed`, so all four structures
/// drawn from one seed share their noise.
inline SynthSample generate_structure(Structure kind, std::size_t n, RngSeed seed) {
  if (n < 10) throw InvalidInput("generate_structure: n must be at least 10");
  auto draw = [&](std::uint64_t stream) {
    Rng rng(derive_seed(seed, stream));
    std::vector<double> v(n);
    for (auto& e : v) e = rng.uniform01();
    return v;
  };
  const auto z = draw(0);
  const auto x_ind = draw(1);
  const auto y_ind = draw(2);

  auto plus_z = [&](const std::vector<double>& v) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = v[i] + z[i];
    return out;
  };

  SynthSample s;
  s.truth = kind;
  s.n = n;
  s.seed = seed;
  switch (kind) {
    case Structure::Causal:
      s.x = x_ind;
      s.y = plus_z(x_ind);
      break;
    case Structure::Anticausal:
      s.x = plus_z(x_ind);
      s.y = x_ind;
      break;
    case Structure::Independent:
      s.x = x_ind;
      s.y = y_ind;
      break;
    case Structure::Confounded:
      s.x = plus_z(x_ind);
      s.y = plus_z(y_ind);
      break;
  }
  return s;
}

/// Mutual information between regression residual and hypothetical cause for
/// `replicates` draws of `kind`. Replicate r uses substream r of `seed`.
inline std::vector<double> mi_distribution(Structure kind, std::size_t replicates, std::size_t n,
                                           std::size_t bins, RngSeed seed) {
  if (replicates < 1) throw InvalidInput("mi_distribution: replicates must be >= 1");
  std::vector<double> out;
  out.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    const auto s = generate_structure(kind, n, derive_seed(seed, r));
    const auto fit = ols_fit(s.x, s.y);
    out.push_back(mutual_information(bin_uniform(fit.residuals, s.x, bins)));
  }
  return out;
}

}  // namespace pairdisc
