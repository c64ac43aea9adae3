#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "sbmcd/modularity.hpp"
#include "sbmcd/random_instances.hpp"
#include "sbmcd/theory.hpp"

namespace sbmcd {
namespace {

double sq_root_gap(double s1, double s2) {
  const double d = std::sqrt(s1) - std::sqrt(s2);
  return d * d;
}

TEST(DivergenceTest, EndpointsAndSigns) {
  using namespace divergence;
  for (auto [p, q] : std::vector<std::pair<double, double>>{{1.0, 2.0}, {3.5, 0.2}, {0.7, 0.7}}) {
    EXPECT_NEAR(ht(0.0, p, q), 0.0, 1e-15);
    EXPECT_NEAR(ht(1.0, p, q), 0.0, 1e-15);
    EXPECT_GE(ht(0.5, p, q), -1e-15);
    EXPECT_NEAR(kt(0.0, p, q), 0.0, 1e-15);
    EXPECT_NEAR(kt(1.0, p, q), k1(p, q), 1e-14);
    EXPECT_GE(k1(p, q), -1e-15);
  }
  // H_{1/2}(p||q) = (sqrt p - sqrt q)^2 / 2.
  EXPECT_NEAR(ht(0.5, 4.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(kl(0.5, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(kl(0.0, 0.5), std::log(2.0), 1e-15);
  EXPECT_NEAR(gamma_fn(1.0), -1.0, 1e-15);
  EXPECT_NEAR(big_l(0.0), 0.0, 1e-15);
  EXPECT_NEAR(big_l(1e-9), 5e-19, 1e-24);
}

TEST(MaximizeConcaveTest, FindsInteriorAndBoundaryMaxima) {
  auto [t1, v1] = maximize_concave([](double t) { return -(t - 0.3) * (t - 0.3); });
  EXPECT_NEAR(t1, 0.3, 1e-6);
  EXPECT_NEAR(v1, 0.0, 1e-12);
  auto [t2, v2] = maximize_concave([](double t) { return 2.0 * t; });
  EXPECT_EQ(t2, 1.0);
  EXPECT_EQ(v2, 2.0);
}

TEST(ChConstantTest, SymmetricTwoCommunityClosedForm) {
  Xoshiro256 rng(11);
  for (int i = 0; i < 20; ++i) {
    const double s1 = 10.0 * (1.0 - rng.uniform()), s2 = 10.0 * (1.0 - rng.uniform());
    const auto params = SbmParams::balanced(2, s1, s2, 0.01);
    EXPECT_NEAR(ch_constant(params).value, 0.5 * sq_root_gap(s1, s2), 1e-9);
  }
}

TEST(ChConstantTest, BalancedKCommunityClosedForm) {
  Xoshiro256 rng(12);
  for (std::size_t k = 2; k <= 5; ++k)
    for (int i = 0; i < 20; ++i) {
      const double s1 = 10.0 * (1.0 - rng.uniform()), s2 = 10.0 * (1.0 - rng.uniform());
      const auto c = ch_constant(SbmParams::balanced(k, s1, s2, 0.01));
      EXPECT_NEAR(c.value, sq_root_gap(s1, s2) / double(k), 1e-9);
      EXPECT_NEAR(c.argmax_t, 0.5, 1e-4);
    }
}

TEST(ChConstantTest, ThresholdVerdicts) {
  const auto c = ch_constant(SbmParams::balanced(2, 4.0, 1.0, 0.01));
  EXPECT_NEAR(c.value, 0.5, 1e-12);
  EXPECT_FALSE(c.ml_threshold_met());
  const auto strong = ch_constant(SbmParams::balanced(2, 36.0, 1.0, 0.01));
  EXPECT_NEAR(strong.value, 12.5, 1e-9);
  EXPECT_TRUE(strong.ml_threshold_met());
  EXPECT_TRUE(strong.icl_threshold_met(2));
  EXPECT_FALSE(strong.icl_threshold_met(4));
}

TEST(ChConstantTest, IdenticalColumnsGiveZero) {
  const Matrix<double> s{{2, 2, 1}, {2, 2, 1}, {1, 1, 3}};
  const auto c = ch_constant({0.3, 0.3, 0.4}, s);
  EXPECT_NEAR(c.value, 0.0, 1e-15);
  EXPECT_EQ(c.argmin_pair, (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(ChConstantTest, UndefinedForOneCommunity) {
  EXPECT_THROW(ch_constant({1.0}, Matrix<double>{{2.0}}), UndefinedError);
}

TEST(ChConstantTest, GoldenSectionMatchesFineGrid) {
  Xoshiro256 rng(13);
  for (int i = 0; i < 30; ++i) {
    const std::size_t k = 2 + rng.below(3);
    const auto pi = random_simplex(k, rng);
    const auto s = random_symmetric(k, 0.1, 10.0, rng);
    double grid_min = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t b2 = 0; b2 < k; ++b2) {
        if (b == b2) continue;
        double m = -std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 10000; ++j) m = std::max(m, ch_profile(pi, s, b, b2, j * 1e-4));
        grid_min = std::min(grid_min, m);
      }
    const double golden = ch_constant(pi, s).value;
    EXPECT_GE(golden, grid_min - 1e-12);
    EXPECT_NEAR(golden, grid_min, 1e-6);
  }
}

TEST(DValueTest, MatchesGridOverT) {
  Xoshiro256 rng(14);
  for (int i = 0; i < 10; ++i) {
    const std::size_t k = 2 + rng.below(3);
    const auto s = random_symmetric(k, 0.1, 5.0, rng);
    double grid = 0.0;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t a2 = 0; a2 < k; ++a2)
        for (std::size_t b = 0; b < k; ++b)
          for (std::size_t b2 = 0; b2 < k; ++b2) {
            if (a == a2 || b == b2) continue;
            for (int j = 0; j <= 1000; ++j) grid = std::max(grid, divergence::kt(j * 1e-3, s(a, b), s(a2, b2)));
          }
    EXPECT_NEAR(d_value(s), grid, 1e-12);
  }
}

TEST(GsTest, DiagonalClosedForm) {
  const std::vector<double> pi{0.2, 0.3, 0.5};
  const Matrix<double> s{{3, 1, 0.5}, {1, 2, 1}, {0.5, 1, 4}};
  double expected = 0.0;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) expected += pi[a] * pi[b] * s(a, b) * std::log(s(a, b));
  EXPECT_NEAR(g_s(diag(pi), s), expected, 1e-14);
}

TEST(GsTest, TruthMaximizesOverConfusions) {
  Xoshiro256 rng(15);
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 2 + rng.below(3);
    const auto s = random_symmetric(k, 0.1, 5.0, rng);
    Matrix<double> r(k, k);
    const auto w = random_simplex(k * k, rng);
    for (std::size_t j = 0; j < k * k; ++j) r(j / k, j % k) = w[j];
    EXPECT_GE(g_s_gap(r, s), -1e-12);
  }
}

TEST(HpnTest, DiagonalConfusionClosedForm) {
  const auto params = SbmParams::balanced(2, 5.0, 1.0, 0.1);
  const std::size_t n = 20;
  const Labeling z({0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}, 2);
  const auto prob = params.probability_matrix();
  const double p0 = 0.4, p1 = 0.6;
  const double expected = 0.5 * (p0 * (p0 - 0.05) * tau(prob(0, 0)) + 2 * p0 * p1 * tau(prob(0, 1)) +
                                 p1 * (p1 - 0.05) * tau(prob(1, 1)));
  EXPECT_NEAR(h_pn(confusion(z, z), params, n), expected, 1e-15);
}

TEST(XStatisticTest, DecomposesIntoQmlMinusHpn) {
  Xoshiro256 rng(16);
  for (int i = 0; i < 300; ++i) {
    const std::size_t k = 1 + rng.below(3);
    const std::size_t n = 6 + rng.below(35);
    SbmParams params;
    params.pi = random_simplex(k, rng);
    params.shape = random_symmetric(k, 0.05, 0.95, rng);
    params.rho = 1.0;
    const Labeling z = random_labeling(n, k, rng);
    const Labeling e = random_labeling(n, k, rng, 2);
    const Graph g = sample_graph(params, z, rng());
    const double lhs = x_statistic(g, e, z, params);
    const double rhs = q_ml(g, e) - h_pn(confusion(e, z), params, n);
    ASSERT_LT(std::abs(lhs - rhs), 1e-10);
  }
}

TEST(XStatisticTest, TruthFluctuationShrinksWithN) {
  const auto params = SbmParams::balanced(2, 0.5, 0.1, 1.0);
  std::vector<double> medians;
  for (std::size_t n : {50u, 100u, 200u}) {
    std::vector<double> xs;
    for (std::uint64_t r = 0; r < 31; ++r) {
      const auto [z, g] = sample(params, n, derive_seed(n, r));
      xs.push_back(std::abs(x_statistic(g, z, z, params)));
    }
    std::nth_element(xs.begin(), xs.begin() + 15, xs.end());
    medians.push_back(xs[15]);
  }
  EXPECT_GT(medians[0], medians[1]);
  EXPECT_GT(medians[1], medians[2]);
}

TEST(WDeviationTest, VanishesAtTruth) {
  const auto params = SbmParams::balanced(3, 6.0, 1.0, 0.05);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto [z, g] = sample(params, 90, seed);
    const auto w = w_deviation(g, z, z, params);
    for (double v : w.data()) ASSERT_EQ(v, 0.0);
  }
}

TEST(WDeviationTest, OneNodeDifferenceOnEmptyGraph) {
  // Constant P = p: E o_ab(e) = p n_ab(e), so W_ab = p (n_ab(z) - n_ab(e)) / n^2.
  const double p = 0.3;
  const auto params = SbmParams::balanced(2, p, p, 1.0);
  const Labeling z({0, 0, 0, 1, 1, 1}, 2), e({0, 0, 1, 1, 1, 1}, 2);
  const auto w = w_deviation(Graph(6), e, z, params);
  const auto nz = pair_counts_from_sizes(z.community_sizes());
  const auto ne = pair_counts_from_sizes(e.community_sizes());
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      EXPECT_NEAR(w(a, b), p * double(nz(a, b) - ne(a, b)) / 36.0, 1e-15);
  EXPECT_NEAR(w(0, 0), p * (6.0 - 2.0) / 36.0, 1e-15);
}

}  // namespace
}  // namespace sbmcd
