#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "sbmcd/experiments.hpp"

namespace sbmcd {
namespace {

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.n = 60;
  cfg.k = 2;
  cfg.reps = 3;
  cfg.base_seed = 21;
  cfg.restarts = 3;
  return cfg;
}

std::string csv_of(const SweepResult& r) {
  std::ostringstream out;
  write_csv(out, r.rows);
  return out.str();
}

TEST(SeparationTest, InverseOfS1ForSeparation) {
  for (double sep : {0.0, 0.5, 2.1, 4.0})
    for (double s2 : {0.5, 1.0, 3.0}) EXPECT_NEAR(separation_of(s1_for_separation(sep, s2), s2), sep, 1e-12);
  EXPECT_DOUBLE_EQ(s1_for_separation(4.0, 1.0), 9.0);
}

TEST(GridTest, DefaultsSpanTheExpectedRange) {
  const auto seps = default_separation_grid(3);
  ASSERT_EQ(seps.size(), 9u);
  EXPECT_EQ(seps.front(), 0.0);
  EXPECT_EQ(seps.back(), 6.0);
  const auto rhos = default_sparsity_grid(200);
  EXPECT_DOUBLE_EQ(rhos.front(), 1.0 / 200);
  EXPECT_DOUBLE_EQ(rhos.back(), std::log(200.0) / 200);
}

TEST(SweepTest, RowsCarryReplicateSeedsAndBothObjectives) {
  const auto cfg = small_config();
  const auto res = sweep_separation({0.0, 4.0}, cfg);
  ASSERT_EQ(res.rows.size(), 2 * cfg.reps * 2);
  EXPECT_EQ(res.rows[0].replicate_seed, derive_seed(cfg.base_seed, 0));
  EXPECT_EQ(res.rows[0].objective, Objective::kML);
  EXPECT_EQ(res.rows[1].objective, Objective::kICL);
  EXPECT_EQ(res.rows.back().replicate_seed, derive_seed(cfg.base_seed, 2 * cfg.reps - 1));
  ASSERT_EQ(res.summary.size(), 2u);
  EXPECT_EQ(res.summary[0].replicates, cfg.reps);
  for (const auto& r : res.rows) EXPECT_EQ(r.runtime_ms, 0.0);
}

TEST(SweepTest, DeterministicAcrossRunsAndThreadCounts) {
  auto cfg = small_config();
  const std::string a = csv_of(sweep_separation({0.0, 2.0, 4.0}, cfg));
  const std::string b = csv_of(sweep_separation({0.0, 2.0, 4.0}, cfg));
  cfg.threads = 3;
  const std::string c = csv_of(sweep_separation({0.0, 2.0, 4.0}, cfg));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(SweepTest, KeptLabelingsReproduceReportedMetrics) {
  auto cfg = small_config();
  cfg.keep_labelings = true;
  const auto res = sweep_sparsity({std::log(60.0) / 60.0}, cfg);
  for (const auto& r : res.rows) {
    ASSERT_EQ(r.truth.size(), cfg.n);
    const Labeling truth(r.truth, cfg.k), est(r.estimate, cfg.k);
    EXPECT_DOUBLE_EQ(nmi(est, truth), r.nmi);
    EXPECT_EQ(misclassification(est, truth), r.misclassified);
  }
}

TEST(SweepTest, InvalidGridPointIsSkippedWithWarning) {
  auto cfg = small_config();
  // rho = 0.5 with s1 = 9 gives P > 1.
  const auto res = sweep_sparsity({0.05, 0.5}, cfg, 4.0);
  ASSERT_EQ(res.warnings.size(), 1u);
  EXPECT_NE(res.warnings[0].find("x=0.5"), std::string::npos);
  for (const auto& r : res.rows) EXPECT_EQ(r.rho, 0.05);
  EXPECT_EQ(res.summary.size(), 1u);
  std::ostringstream out;
  write_summary(out, res, "rho");
  EXPECT_NE(out.str().find("# warning"), std::string::npos);
}

TEST(SweepTest, TimingRecordedOnlyOnRequest) {
  auto cfg = small_config();
  cfg.reps = 1;
  cfg.record_timing = true;
  const auto res = sweep_separation({4.0}, cfg);
  for (const auto& r : res.rows) EXPECT_GT(r.runtime_ms, 0.0);
}

TEST(OutputTest, CsvHeaderAndSvg) {
  auto cfg = small_config();
  cfg.reps = 1;
  const auto res = sweep_separation({1.0, 3.0}, cfg);
  const std::string csv = csv_of(res);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kSweepCsvHeader);
  std::ostringstream svg;
  write_svg_plot(svg, res.summary, "separation", "test");
  EXPECT_EQ(svg.str().rfind("<svg", 0), 0u);
  EXPECT_NE(svg.str().find("</svg>"), std::string::npos);
}

TEST(ConcentrationTest, ExtremeRadiiAndTruthDeviation) {
  const auto params = SbmParams::balanced(2, s1_for_separation(2.1, 1.0), 1.0, std::log(100.0) / 100.0);
  const auto wide = concentration_experiment(params, 100, 100, 1e6, 3);
  EXPECT_EQ(wide.violation_fraction, 0.0);
  EXPECT_EQ(wide.w_nonzero, 0u);
  const auto narrow = concentration_experiment(params, 100, 100, 1e-12, 3);
  EXPECT_EQ(narrow.violation_fraction, 1.0);
  EXPECT_EQ(narrow.empirical_sup_deviation, wide.empirical_sup_deviation);
  EXPECT_NEAR(wide.theoretical_bound, std::sqrt(1e6 * params.rho * std::log(100.0)) / 100.0, 1e-15);
  EXPECT_THROW(concentration_experiment(params, 100, 99, 4.0), std::invalid_argument);
  EXPECT_THROW(concentration_experiment(params, 100, 100, 0.0), std::invalid_argument);
}

TEST(ConcentrationTest, VacuousRadiusAtModerateN) {
  const auto params = SbmParams::balanced(2, s1_for_separation(2.1, 1.0), 1.0, std::log(200.0) / 200.0);
  EXPECT_EQ(concentration_experiment(params, 200, 100, 1e3, 5).violation_fraction, 0.0);
}

TEST(ConcentrationTest, SupDeviationOnKnownGraph) {
  SbmParams params;
  params.pi = {1.0};
  params.shape = Matrix<double>{{0.5}};
  params.rho = 1.0;
  const Graph g(3, std::vector<Graph::Edge>{{0, 1}});
  EXPECT_NEAR(sup_block_deviation(g, Labeling({0, 0, 0}, 1), params), 0.5 - 1.0 / 3, 1e-15);
}

}  // namespace
}  // namespace sbmcd
