#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "sbmcd/estimators.hpp"
#include "sbmcd/random_instances.hpp"
#include "sbmcd/sampler.hpp"

namespace sbmcd {
namespace {

Graph two_cliques(std::size_t half) {
  std::vector<Graph::Edge> edges;
  for (Node base : {Node{0}, static_cast<Node>(half)})
    for (Node i = 0; i < half; ++i)
      for (Node j = i + 1; j < half; ++j) edges.emplace_back(base + i, base + j);
  return Graph(2 * half, edges);
}

TEST(BlockStateTest, InitialValueMatchesDirectEvaluation) {
  Xoshiro256 rng(1);
  for (Objective obj : {Objective::kML, Objective::kICL})
    for (int t = 0; t < 50; ++t) {
      const Graph g = random_graph(20, rng.uniform(), rng);
      const Labeling z = random_labeling(20, 3, rng);
      EXPECT_NEAR(BlockState(g, z, obj).value(), evaluate(obj, g, z), 1e-12);
    }
}

TEST(BlockStateTest, IncrementalMovesTrackFullRecompute) {
  Xoshiro256 rng(2);
  for (Objective obj : {Objective::kML, Objective::kICL})
    for (int t = 0; t < 40; ++t) {
      const std::size_t n = 3 + rng.below(25), k = 1 + rng.below(4);
      const Graph g = random_graph(n, rng.uniform(), rng);
      BlockState state(g, random_labeling(n, k, rng), obj);
      for (int step = 0; step < 30; ++step) {
        const Node v = static_cast<Node>(rng.below(n));
        const Label to = static_cast<Label>(rng.below(k));
        state.count_neighbors(v);
        const double delta = state.move_delta(v, to);
        const double before = state.unnormalized();
        state.apply_move(v, to, delta);
        const double direct = evaluate(obj, g, state.labeling());
        const double nd = double(n);
        ASSERT_NEAR(state.value(), direct, 1e-10);
        ASSERT_NEAR(state.unnormalized() - before, delta, 1e-9 * std::max(1.0, std::abs(before)));
        ASSERT_NEAR(delta / (nd * nd), direct - (before / (nd * nd)), 1e-10);
      }
    }
}

TEST(SearchConfigTest, InfeasibleConstraint) {
  SearchConfig cfg;
  cfg.alpha = 0.4;
  EXPECT_THROW(cfg.validate(10, 3), InfeasibleError);
  cfg.alpha = 1.0 / 3;
  EXPECT_THROW(cfg.validate(10, 3), InfeasibleError);
  EXPECT_NO_THROW(cfg.validate(9, 3));
  cfg.alpha = 0.0;
  EXPECT_THROW(cfg.validate(9, 3), std::invalid_argument);
}

TEST(ExactTest, CompleteGraphTieBreaksLexicographically) {
  SearchConfig cfg;
  cfg.alpha = 0.25;
  const auto r = exact_argmax(Graph::complete(6), 2, cfg);
  EXPECT_EQ(r.labeling, Labeling({0, 0, 0, 0, 1, 1}, 2));
  EXPECT_NEAR(r.objective_value, 0.0, 1e-15);
  EXPECT_TRUE(r.feasible);
}

TEST(ExactTest, RecoversTwoCliques) {
  SearchConfig cfg;
  cfg.alpha = 0.2;
  for (Objective obj : {Objective::kML, Objective::kICL}) {
    cfg.objective = obj;
    const auto r = exact_argmax(two_cliques(5), 2, cfg);
    EXPECT_EQ(r.labeling, Labeling({0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, 2));
  }
}

TEST(ExactTest, RefusesHugeSearchSpaces) {
  EXPECT_THROW(exact_argmax(Graph(30), 2, SearchConfig{}), SearchSpaceError);
}

TEST(GreedyTest, RecoversTwoCliquesAndIsFeasible) {
  SearchConfig cfg;
  cfg.alpha = 0.1;
  for (Objective obj : {Objective::kML, Objective::kICL}) {
    cfg.objective = obj;
    const auto r = greedy_argmax(two_cliques(10), 2, cfg);
    std::vector<Label> expected(20, 0);
    std::fill(expected.begin() + 10, expected.end(), 1);
    EXPECT_EQ(r.labeling, Labeling(expected, 2));
    EXPECT_TRUE(r.feasible);
    EXPECT_EQ(r.objective, obj);
  }
}

TEST(GreedyTest, DeterministicForFixedSeed) {
  const auto params = SbmParams::balanced(3, 8.0, 1.0, 0.05);
  const auto [z, g] = sample(params, 120, 9);
  SearchConfig cfg;
  cfg.seed = 77;
  const auto a = greedy_argmax(g, 3, cfg), b = greedy_argmax(g, 3, cfg);
  EXPECT_EQ(a.labeling, b.labeling);
  EXPECT_EQ(a.objective_value, b.objective_value);
  EXPECT_EQ(a.restart_index, b.restart_index);
  EXPECT_TRUE(a.labeling.is_canonical());
}

TEST(GreedyTest, RespectsMinimumCommunitySize) {
  Xoshiro256 rng(3);
  SearchConfig cfg;
  cfg.alpha = 0.3;
  cfg.restarts = 3;
  for (int t = 0; t < 20; ++t) {
    const Graph g = random_graph(20, 0.3, rng);
    cfg.seed = rng();
    const auto r = greedy_argmax(g, 3, cfg);
    EXPECT_TRUE(in_constraint_set(r.labeling, cfg.alpha));
  }
}

TEST(GreedyTest, ObserverSeesStrictlyIncreasingValues) {
  const auto params = SbmParams::balanced(2, 10.0, 2.0, 0.05);
  const auto [z, g] = sample(params, 100, 4);
  SearchConfig cfg;
  cfg.objective = Objective::kICL;
  cfg.restarts = 3;
  std::size_t last_restart = 0;
  double last = -std::numeric_limits<double>::infinity();
  std::size_t calls = 0;
  greedy_argmax(g, 2, cfg, [&](std::size_t r, Node, Label, const BlockState& s) {
    if (r != last_restart) {
      last_restart = r;
      last = -std::numeric_limits<double>::infinity();
    }
    EXPECT_GT(s.value(), last);
    last = s.value();
    ++calls;
  });
  EXPECT_GT(calls, 0u);
}

TEST(GreedyTest, LocalSearchNeverDecreasesObjective) {
  Xoshiro256 rng(5);
  SearchConfig cfg;
  cfg.alpha = 0.1;
  for (int t = 0; t < 20; ++t) {
    const Graph g = random_graph(30, 0.2, rng);
    const Labeling init = random_labeling(30, 2, rng, 3);
    const auto r = local_search(g, init, cfg);
    EXPECT_GE(r.objective_value, evaluate(cfg.objective, g, init) - 1e-12);
  }
}

TEST(GreedyTest, MatchesExactOnSmallPlantedInstances) {
  SbmParams params;
  params.pi = {0.5, 0.5};
  params.shape = Matrix<double>{{0.9, 0.05}, {0.05, 0.9}};
  params.rho = 1.0;
  SearchConfig cfg;
  cfg.alpha = 0.2;
  cfg.restarts = 20;
  std::size_t hits = 0, total = 0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto [z, g] = sample(params, 10, derive_seed(500, i));
    for (Objective obj : {Objective::kML, Objective::kICL}) {
      cfg.objective = obj;
      cfg.seed = derive_seed(600, i);
      const double exact = exact_argmax(g, 2, cfg).objective_value;
      const double greedy = greedy_argmax(g, 2, cfg).objective_value;
      EXPECT_LE(greedy, exact + 1e-12);
      hits += std::abs(greedy - exact) <= 1e-9 ? 1 : 0;
      ++total;
    }
  }
  EXPECT_GE(hits, total * 95 / 100);
}

}  // namespace
}  // namespace sbmcd
