// Draws a causal sample X -> Y and asks resfit which structure explains it.

#include <iostream>

#include <pairdisc/pairdisc.hpp>

int main() {
  using namespace pairdisc;

  const auto sample = generate_structure(Structure::Causal, 1000, RngSeed{7});
  const VariablePair pair(ObservationSeries(sample.x, "X"), ObservationSeries(sample.y, "Y"));

  DiscoveryConfig config;
  config.ci = 0.05;
  const auto verdict = resfit(pair, config, RngSeed{7});

  std::cout << "pair type    " << to_string(pair.pair_type()) << "\n"
            << "test         " << to_string(verdict.test_used) << "\n"
            << "p(X -> Y)    " << verdict.p_causal << "\n"
            << "p(Y -> X)    " << verdict.p_anticausal << "\n"
            << "structure    " << to_string(verdict.structure) << "\n";
}
