#pragma once

// Maximizers of Q_ML / Q_ICL over F(n, alpha): exhaustive enumeration for toy
// sizes and best-improvement single-node relabeling with random restarts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "sbmcd/errors.hpp"
#include "sbmcd/graph.hpp"
#include "sbmcd/modularity.hpp"
#include "sbmcd/rng.hpp"

namespace sbmcd {

struct SearchConfig {
  Objective objective = Objective::kML;
  double alpha = 0.05;
  std::size_t restarts = 10;
  std::size_t max_sweeps = 100;
  std::uint64_t seed = 1;

  void validate(std::size_t n, std::size_t k) const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (alpha * static_cast<double>(k) > 1.0 || !constraint_set_nonempty(n, k, alpha))
      throw InfeasibleError("F(n=" + std::to_string(n) + ", alpha=" + std::to_string(alpha) +
                            ") is empty for k=" + std::to_string(k));
  }
};

struct FitResult {
  Labeling labeling;
  double objective_value = 0.0;
  Objective objective = Objective::kML;
  std::size_t sweeps_used = 0;
  std::size_t restart_index = 0;
  std::size_t moves = 0;
  bool feasible = false;
};

/// Mutable block-counter state for one labeling, tracking the unnormalized
/// objective U = sum_{a<=b} T(o~_ab, n~_ab) so that Q = U / n^2. A single-node
/// move is scored in O(k) block terms after an O(degree) neighbor count.
class BlockState {
 public:
  BlockState(const Graph& g, const Labeling& z, Objective obj)
      : g_(&g), obj_(obj), k_(z.k()), labels_(z.labels().begin(), z.labels().end()),
        half_edges_(k_, k_), neighbor_counts_(k_, 0) {
    if (z.size() != g.num_nodes()) throw std::invalid_argument("labeling/graph size mismatch");
    const auto c = block_counters(g, z);
    sizes_ = c.sizes;
    for (std::size_t a = 0; a < k_; ++a)
      for (std::size_t b = a; b < k_; ++b) half_edges_(a, b) = half_edges_(b, a) = c.half_edges(a, b);
    total_ = 0.0;
    for (std::size_t a = 0; a < k_; ++a)
      for (std::size_t b = a; b < k_; ++b) total_ += term(half_edges_(a, b), half_pairs(a, b, sizes_));
  }

  std::size_t k() const { return k_; }
  std::size_t n() const { return labels_.size(); }
  Label label(Node v) const { return labels_[v]; }
  Count size(Label a) const { return sizes_[a]; }
  std::span<const Label> labels() const { return labels_; }
  Labeling labeling() const { return Labeling(labels_, k_); }

  /// Current objective, normalized by n^2.
  double value() const {
    const double nd = static_cast<double>(n());
    return total_ / (nd * nd);
  }
  double unnormalized() const { return total_; }

  /// Tally neighbors of v per community; must precede move_delta/apply_move for v.
  void count_neighbors(Node v) {
    std::fill(neighbor_counts_.begin(), neighbor_counts_.end(), 0);
    for (Node u : g_->neighbors(v)) ++neighbor_counts_[labels_[u]];
  }

  /// Change in U if v moves from its community to `to`.
  double move_delta(Node v, Label to) const {
    const Label from = labels_[v];
    if (from == to) return 0.0;
    double delta = 0.0;
    auto visit = [&](std::size_t x, std::size_t y) {
      if (x > y) std::swap(x, y);
      const Count old_o = half_edges_(x, y);
      const Count new_o = old_o - contribution(x, y, from) + contribution(x, y, to);
      delta += term(new_o, moved_pairs(x, y, from, to)) - term(old_o, half_pairs(x, y, sizes_));
    };
    for (std::size_t c = 0; c < k_; ++c) visit(from, c);
    for (std::size_t c = 0; c < k_; ++c)
      if (c != from) visit(to, c);
    return delta;
  }

  void apply_move(Node v, Label to, double delta) {
    const Label from = labels_[v];
    if (from == to) return;
    Matrix<Count> next = half_edges_;
    for (std::size_t x = 0; x < k_; ++x)
      for (std::size_t y = x; y < k_; ++y) {
        if (x != from && x != to && y != from && y != to) continue;
        const Count o = half_edges_(x, y) - contribution(x, y, from) + contribution(x, y, to);
        next(x, y) = next(y, x) = o;
      }
    half_edges_ = std::move(next);
    --sizes_[from];
    ++sizes_[to];
    labels_[v] = to;
    total_ += delta;
  }

 private:
  // Edges of the node being moved that fall in block {x,y} while it sits in `at`.
  Count contribution(std::size_t x, std::size_t y, std::size_t at) const {
    Count c = 0;
    if (x == at) c += neighbor_counts_[y];
    if (y == at && x != y) c += neighbor_counts_[x];
    return c;
  }

  static Count half_pairs(std::size_t x, std::size_t y, const std::vector<Count>& sizes) {
    return x == y ? sizes[x] * (sizes[x] - 1) / 2 : sizes[x] * sizes[y];
  }

  Count moved_pairs(std::size_t x, std::size_t y, std::size_t from, std::size_t to) const {
    auto sz = [&](std::size_t c) { return sizes_[c] - (c == from ? 1 : 0) + (c == to ? 1 : 0); };
    return x == y ? sz(x) * (sz(x) - 1) / 2 : sz(x) * sz(y);
  }

  double term(Count edges, Count pairs) const {
    const auto o = static_cast<double>(edges);
    const auto m = static_cast<double>(pairs);
    return obj_ == Objective::kML ? ml_block_term(o, m) : icl_block_term(o, m);
  }

  const Graph* g_;
  Objective obj_;
  std::size_t k_;
  std::vector<Label> labels_;
  std::vector<Count> sizes_;
  Matrix<Count> half_edges_;
  std::vector<Count> neighbor_counts_;
  double total_ = 0.0;
};

/// Called after each accepted move with (restart, node, new label, state).
using MoveObserver = std::function<void(std::size_t, Node, Label, const BlockState&)>;

struct LocalSearchStats {
  std::size_t sweeps = 0;
  std::size_t moves = 0;
};

/// Minimum improvement in U for a move to count.
inline double improvement_threshold(double total) { return 1e-9 + 1e-12 * std::abs(total); }

/// Best-improvement hill climbing from the state's current labeling. Each sweep
/// visits nodes in a fresh random order and applies, per node, the feasible
/// relabel with the largest strict gain. Stops after a sweep without moves or
/// after `max_sweeps` sweeps.
inline LocalSearchStats hill_climb(BlockState& state, Count min_size, std::size_t max_sweeps,
                                   Xoshiro256& rng, std::size_t restart = 0,
                                   const MoveObserver& observer = {}) {
  LocalSearchStats stats;
  std::vector<Node> order(state.n());
  std::iota(order.begin(), order.end(), Node{0});
  while (stats.sweeps < max_sweeps) {
    rng.shuffle(std::span<Node>(order));
    ++stats.sweeps;
    bool moved = false;
    for (Node v : order) {
      const Label from = state.label(v);
      if (state.size(from) - 1 < min_size) continue;
      state.count_neighbors(v);
      double best_delta = improvement_threshold(state.unnormalized());
      Label best_to = from;
      for (Label to = 0; to < state.k(); ++to) {
        if (to == from) continue;
        const double d = state.move_delta(v, to);
        if (d > best_delta) {
          best_delta = d;
          best_to = to;
        }
      }
      if (best_to != from) {
        state.apply_move(v, best_to, best_delta);
        ++stats.moves;
        moved = true;
        if (observer) observer(restart, v, best_to, state);
      }
    }
    if (!moved) break;
  }
  return stats;
}

/// Uniform labels resampled until feasible (at most 1000 attempts), then a
/// round-robin fill over a random node order.
inline Labeling random_feasible_labeling(std::size_t n, std::size_t k, Count min_size,
                                         Xoshiro256& rng) {
  std::vector<Label> z(n);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Count> sizes(k, 0);
    for (auto& l : z) {
      l = static_cast<Label>(rng.below(k));
      ++sizes[l];
    }
    if (std::all_of(sizes.begin(), sizes.end(), [&](Count s) { return s >= min_size; }))
      return Labeling(std::move(z), k);
  }
  std::vector<Node> order(n);
  std::iota(order.begin(), order.end(), Node{0});
  rng.shuffle(std::span<Node>(order));
  for (std::size_t i = 0; i < n; ++i) z[order[i]] = static_cast<Label>(i % k);
  return Labeling(std::move(z), k);
}

/// Hill climbing from a given labeling (single run, restart index 0).
inline FitResult local_search(const Graph& g, const Labeling& init, const SearchConfig& cfg,
                              const MoveObserver& observer = {}) {
  cfg.validate(g.num_nodes(), init.k());
  const Count min_size = min_community_size(g.num_nodes(), cfg.alpha);
  Xoshiro256 rng(derive_seed(cfg.seed, 0));
  BlockState state(g, init, cfg.objective);
  const auto stats = hill_climb(state, min_size, cfg.max_sweeps, rng, 0, observer);
  FitResult r;
  r.labeling = state.labeling().canonical();
  r.objective = cfg.objective;
  r.objective_value = evaluate(cfg.objective, g, r.labeling);
  r.sweeps_used = stats.sweeps;
  r.moves = stats.moves;
  r.feasible = in_constraint_set(r.labeling, cfg.alpha);
  return r;
}

/// Greedy maximizer with restarts. Restart r draws from stream derive_seed(seed, r).
/// The best restart wins; ties (within 1e-12) keep the lowest restart index.
inline FitResult greedy_argmax(const Graph& g, std::size_t k, const SearchConfig& cfg,
                               const MoveObserver& observer = {}) {
  const std::size_t n = g.num_nodes();
  cfg.validate(n, k);
  const Count min_size = min_community_size(n, cfg.alpha);
  FitResult best;
  bool have = false;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Xoshiro256 rng(derive_seed(cfg.seed, r));
    BlockState state(g, random_feasible_labeling(n, k, min_size, rng), cfg.objective);
    const auto stats = hill_climb(state, min_size, cfg.max_sweeps, rng, r, observer);
    Labeling z = state.labeling().canonical();
    const double value = evaluate(cfg.objective, g, z);
    if (!have || value > best.objective_value + 1e-12) {
      have = true;
      best.labeling = std::move(z);
      best.objective_value = value;
      best.sweeps_used = stats.sweeps;
      best.moves = stats.moves;
      best.restart_index = r;
    }
  }
  best.objective = cfg.objective;
  best.feasible = in_constraint_set(best.labeling, cfg.alpha);
  return best;
}

inline constexpr double kMaxEnumeration = 2e7;

/// Exhaustive maximizer over F(n, alpha). Visits [k]^n in lexicographic order
/// and scores only first-occurrence canonical labelings, so each partition is
/// seen once; ties within 1e-12 keep the lexicographically smallest.
inline FitResult exact_argmax(const Graph& g, std::size_t k, const SearchConfig& cfg) {
  const std::size_t n = g.num_nodes();
  const double space = std::pow(static_cast<double>(k), static_cast<double>(n));
  if (space > kMaxEnumeration) throw SearchSpaceError(space, kMaxEnumeration);
  cfg.validate(n, k);
  const Count min_size = min_community_size(n, cfg.alpha);

  std::vector<Label> z(n, 0);
  FitResult best;
  bool have = false;
  for (;;) {
    Labeling lab(z, k);
    if (lab.is_canonical()) {
      const auto sizes = lab.community_sizes();
      if (std::all_of(sizes.begin(), sizes.end(), [&](Count s) { return s >= min_size; })) {
        const double value = evaluate(cfg.objective, g, lab);
        if (!have || value > best.objective_value + 1e-12) {
          have = true;
          best.labeling = std::move(lab);
          best.objective_value = value;
        }
      }
    }
    // Next labeling in lexicographic order (last node fastest).
    std::size_t pos = n;
    while (pos > 0 && z[pos - 1] + 1 == k) z[--pos] = 0;
    if (pos == 0) break;
    ++z[pos - 1];
  }
  if (!have) throw InfeasibleError("no labeling satisfies the size constraint");
  best.objective = cfg.objective;
  best.feasible = true;
  return best;
}

}  // namespace sbmcd
