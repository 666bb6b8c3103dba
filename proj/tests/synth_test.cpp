#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <pairdisc/regress.hpp>
#include <pairdisc/synth.hpp>

using namespace pairdisc;

namespace {

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i] / n;
    mb += b[i] / n;
  }
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST(GenerateStructure, CausalDifferenceIsUnitNoise) {
  const auto s = generate_structure(Structure::Causal, 1000, RngSeed{1});
  ASSERT_EQ(s.x.size(), 1000u);
  EXPECT_EQ(s.n, 1000u);
  EXPECT_EQ(s.truth, Structure::Causal);
  for (std::size_t i = 0; i < s.n; ++i) {
    EXPECT_GE(s.y[i] - s.x[i], 0.0);
    EXPECT_LE(s.y[i] - s.x[i], 1.0);
  }
}

TEST(GenerateStructure, SharedNoiseAcrossStructures) {
  const auto c = generate_structure(Structure::Causal, 100, RngSeed{5});
  const auto a = generate_structure(Structure::Anticausal, 100, RngSeed{5});
  const auto i = generate_structure(Structure::Independent, 100, RngSeed{5});
  const auto f = generate_structure(Structure::Confounded, 100, RngSeed{5});
  EXPECT_EQ(c.x, a.y);
  EXPECT_EQ(c.y, a.x);
  EXPECT_EQ(c.x, i.x);
  EXPECT_EQ(c.y, f.x);
}

TEST(GenerateStructure, Deterministic) {
  for (auto kind : kAllStructures) {
    const auto a = generate_structure(kind, 64, RngSeed{99});
    const auto b = generate_structure(kind, 64, RngSeed{99});
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.y, b.y);
  }
  EXPECT_NE(generate_structure(Structure::Causal, 64, RngSeed{1}).x,
            generate_structure(Structure::Causal, 64, RngSeed{2}).x);
  EXPECT_THROW(generate_structure(Structure::Causal, 5, RngSeed{}), InvalidInput);
}

TEST(GenerateStructure, IndependentIsUncorrelated) {
  int small = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto g = generate_structure(Structure::Independent, 1000, RngSeed{s});
    small += std::abs(correlation(g.x, g.y)) < 0.1;
  }
  EXPECT_GE(small, 99);
}

TEST(GenerateStructure, ConfoundedCorrelationIsHalf) {
  // Var(X + Z) = 1/6 and Cov = Var(Z) = 1/12.
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto g = generate_structure(Structure::Confounded, 1000, RngSeed{s});
    EXPECT_NEAR(correlation(g.x, g.y), 0.5, 0.06);
  }
}

TEST(GenerateStructure, CausalSlopeNearOne) {
  int within = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto g = generate_structure(Structure::Causal, 1000, RngSeed{s});
    const double slope = ols_fit(g.x, g.y).slope;
    within += slope >= 0.9 && slope <= 1.1;
  }
  EXPECT_GE(within, 95);
}

TEST(MiDistribution, ShapeAndOrdering) {
  const auto causal = mi_distribution(Structure::Causal, 60, 1000, 10, RngSeed{3});
  const auto anti = mi_distribution(Structure::Anticausal, 60, 1000, 10, RngSeed{3});
  const auto indep = mi_distribution(Structure::Independent, 60, 1000, 10, RngSeed{3});
  const auto conf = mi_distribution(Structure::Confounded, 60, 1000, 10, RngSeed{3});
  ASSERT_EQ(causal.size(), 60u);
  for (const auto* v : {&causal, &anti, &indep, &conf})
    for (double m : *v) EXPECT_GE(m, 0.0);
  EXPECT_GE(median(anti), 5 * median(causal));
  const double ratio = median(causal) / median(indep);
  EXPECT_GE(ratio, 0.5);
  EXPECT_LE(ratio, 2.0);
  EXPECT_GT(median(conf), median(causal));
  EXPECT_GT(median(conf), median(indep));
  EXPECT_EQ(causal, mi_distribution(Structure::Causal, 60, 1000, 10, RngSeed{3}));
}
