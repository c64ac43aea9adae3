#pragma once

// Graphs, labelings, block counters and confusion matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sbmcd/matrix.hpp"

namespace sbmcd {

using Node = std::uint32_t;
using Label = std::uint32_t;
using Count = std::int64_t;

/// Undirected simple graph on nodes 0..n-1, stored as sorted adjacency lists.
class Graph {
 public:
  using Edge = std::pair<Node, Node>;

  Graph() = default;

  explicit Graph(std::size_t n) : adj_(n) {
    if (n == 0) throw std::invalid_argument("graph needs at least one node");
  }

  /// Edges may come in any orientation; duplicates collapse. Self-loops and
  /// out-of-range endpoints are rejected.
  Graph(std::size_t n, std::span<const Edge> edges) : Graph(n) {
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n)
        throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                    ") out of range for n=" + std::to_string(n));
      if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
      adj_[u].push_back(v);
      adj_[v].push_back(u);
    }
    for (auto& nb : adj_) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    for (const auto& nb : adj_) num_edges_ += nb.size();
    num_edges_ /= 2;
  }

  Graph(std::size_t n, const std::vector<Edge>& edges) : Graph(n, std::span<const Edge>(edges)) {}

  std::size_t num_nodes() const { return adj_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  std::span<const Node> neighbors(Node v) const { return adj_[v]; }
  std::size_t degree(Node v) const { return adj_[v].size(); }

  bool has_edge(Node u, Node v) const {
    if (u >= adj_.size() || v >= adj_.size()) return false;
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  }

  /// Edges as (i,j) with i<j in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (Node u = 0; u < adj_.size(); ++u)
      for (Node v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  static Graph complete(std::size_t n) {
    std::vector<Edge> e;
    for (Node i = 0; i < n; ++i)
      for (Node j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph(n, e);
  }

 private:
  std::vector<std::vector<Node>> adj_;
  std::size_t num_edges_ = 0;
};

/// Community assignment in [k]^n (0-based labels).
class Labeling {
 public:
  Labeling() = default;

  Labeling(std::vector<Label> labels, std::size_t k) : labels_(std::move(labels)), k_(k) {
    if (k_ == 0) throw std::invalid_argument("labeling needs k >= 1");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] >= k_)
        throw std::invalid_argument("label " + std::to_string(labels_[i]) + " at node " +
                                    std::to_string(i) + " is not below k=" + std::to_string(k_));
  }

  /// k inferred as max label + 1.
  static Labeling from_labels(std::vector<Label> labels) {
    std::size_t k = 1;
    for (Label l : labels) k = std::max<std::size_t>(k, l + 1);
    return Labeling(std::move(labels), k);
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t k() const { return k_; }
  Label operator[](std::size_t i) const { return labels_[i]; }
  std::span<const Label> labels() const { return labels_; }

  std::vector<Count> community_sizes() const {
    std::vector<Count> sizes(k_, 0);
    for (Label l : labels_) ++sizes[l];
    return sizes;
  }

  /// Apply a label map: result[i] = perm[labels[i]].
  Labeling relabeled(std::span<const Label> perm) const {
    if (perm.size() != k_) throw std::invalid_argument("relabel map must have k entries");
    std::vector<Label> out(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) out[i] = perm[labels_[i]];
    return Labeling(std::move(out), k_);
  }

  /// Renumber communities by order of first occurrence; unused labels go last.
  Labeling canonical() const {
    constexpr Label unset = std::numeric_limits<Label>::max();
    std::vector<Label> map(k_, unset);
    Label next = 0;
    for (Label l : labels_)
      if (map[l] == unset) map[l] = next++;
    for (auto& m : map)
      if (m == unset) m = next++;
    return relabeled(map);
  }

  bool is_canonical() const {
    Label next = 0;
    for (Label l : labels_) {
      if (l > next) return false;
      if (l == next) ++next;
    }
    return true;
  }

  friend bool operator==(const Labeling&, const Labeling&) = default;

 private:
  std::vector<Label> labels_;
  std::size_t k_ = 1;
};

/// Counters n_a, n_ab, o_ab of a labeling. o_ab counts ordered pairs, so the
/// diagonal holds twice the number of within-block edges.
struct BlockCounters {
  std::vector<Count> sizes;
  Matrix<Count> pair_counts;
  Matrix<Count> edge_counts;

  std::size_t k() const { return sizes.size(); }

  /// Edge count per unordered block (diagonal halved).
  Count half_edges(std::size_t a, std::size_t b) const {
    return a == b ? edge_counts(a, a) / 2 : edge_counts(a, b);
  }
  /// Pair count per unordered block (diagonal halved).
  Count half_pairs(std::size_t a, std::size_t b) const {
    return a == b ? pair_counts(a, a) / 2 : pair_counts(a, b);
  }
};

inline Count ordered_pairs(Count na, Count nb, bool same) { return same ? na * (na - 1) : na * nb; }

inline Matrix<Count> pair_counts_from_sizes(std::span<const Count> sizes) {
  const std::size_t k = sizes.size();
  Matrix<Count> out(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) out(a, b) = ordered_pairs(sizes[a], sizes[b], a == b);
  return out;
}

inline BlockCounters block_counters(const Graph& g, const Labeling& z) {
  if (z.size() != g.num_nodes())
    throw std::invalid_argument("labeling length " + std::to_string(z.size()) +
                                " does not match graph size " + std::to_string(g.num_nodes()));
  const std::size_t k = z.k();
  BlockCounters c;
  c.sizes = z.community_sizes();
  c.pair_counts = pair_counts_from_sizes(c.sizes);
  c.edge_counts = Matrix<Count>(k, k);
  for (Node u = 0; u < g.num_nodes(); ++u)
    for (Node v : g.neighbors(u)) ++c.edge_counts(z[u], z[v]);
  return c;
}

/// R(e,z): joint label frequencies, R_ab = #{i : e_i=a, z_i=b} / n.
/// `counts` holds n*R exactly when built from labelings.
struct ConfusionMatrix {
  Matrix<double> r;
  Matrix<Count> counts;
  std::size_t n = 0;

  std::size_t k() const { return r.rows(); }
  /// [R 1]_a: community fractions of the first labeling.
  std::vector<double> row_marginals() const { return r.row_sums(); }
  /// [R^T 1]_b: community fractions of the second labeling.
  std::vector<double> col_marginals() const { return r.col_sums(); }

  /// Wrap an arbitrary k x k matrix; entries must be nonnegative and sum to 1.
  static ConfusionMatrix from_matrix(Matrix<double> m, double tol = 1e-9) {
    if (m.rows() != m.cols()) throw std::invalid_argument("confusion matrix must be square");
    for (double v : m.data())
      if (!(v >= 0.0)) throw std::invalid_argument("confusion matrix entries must be nonnegative");
    if (std::abs(m.sum() - 1.0) > tol)
      throw std::invalid_argument("confusion matrix entries must sum to 1");
    ConfusionMatrix c;
    c.r = std::move(m);
    return c;
  }
};

inline void check_pair(const Labeling& e, const Labeling& z) {
  if (e.size() != z.size())
    throw std::invalid_argument("labelings differ in length: " + std::to_string(e.size()) +
                                " vs " + std::to_string(z.size()));
  if (e.k() != z.k())
    throw std::invalid_argument("labelings differ in k: " + std::to_string(e.k()) + " vs " +
                                std::to_string(z.k()));
  if (e.size() == 0) throw std::invalid_argument("empty labeling");
}

inline ConfusionMatrix confusion(const Labeling& e, const Labeling& z) {
  check_pair(e, z);
  const std::size_t k = e.k();
  ConfusionMatrix c;
  c.n = e.size();
  c.counts = Matrix<Count>(k, k);
  for (std::size_t i = 0; i < e.size(); ++i) ++c.counts(e[i], z[i]);
  c.r = Matrix<double>(k, k);
  const double n = static_cast<double>(c.n);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) c.r(a, b) = static_cast<double>(c.counts(a, b)) / n;
  return c;
}

namespace detail {

// Largest permutation agreement max_sigma sum_b C(sigma(b), b) by enumeration.
inline Count max_agreement_enumerate(const Matrix<Count>& c) {
  const std::size_t k = c.rows();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  Count best = std::numeric_limits<Count>::min();
  do {
    Count s = 0;
    for (std::size_t b = 0; b < k; ++b) s += c(perm[b], b);
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Hungarian method (potentials form, O(k^3)) minimizing sum cost(i, assign(i)).
// Returns assignment row -> column.
inline std::vector<std::size_t> hungarian_min(const Matrix<Count>& cost) {
  const std::size_t k = cost.rows();
  constexpr Count inf = std::numeric_limits<Count>::max() / 4;
  std::vector<Count> u(k + 1, 0), v(k + 1, 0);
  std::vector<std::size_t> p(k + 1, 0), way(k + 1, 0);
  for (std::size_t i = 1; i <= k; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<Count> minv(k + 1, inf);
    std::vector<bool> used(k + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      Count delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const Count cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assign(k);
  for (std::size_t j = 1; j <= k; ++j) assign[p[j] - 1] = j - 1;
  return assign;
}

inline Count max_agreement_assignment(const Matrix<Count>& c) {
  const std::size_t k = c.rows();
  Matrix<Count> cost(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) cost(a, b) = -c(a, b);
  const auto assign = hungarian_min(cost);
  Count s = 0;
  for (std::size_t a = 0; a < k; ++a) s += c(a, assign[a]);
  return s;
}

}  // namespace detail

inline constexpr std::size_t kMaxEnumeratedPermutationK = 8;

/// m(e,z) = min over label permutations sigma of #{i : e_i != sigma(z_i)}.
/// Enumerates all k! permutations for k <= 8, solves an assignment problem beyond.
inline Count misclassification(const Labeling& e, const Labeling& z) {
  const auto c = confusion(e, z);
  const Count agree = e.k() <= kMaxEnumeratedPermutationK
                          ? detail::max_agreement_enumerate(c.counts)
                          : detail::max_agreement_assignment(c.counts);
  return static_cast<Count>(e.size()) - agree;
}

/// (n/2) * || Diag(R^T 1) - R ||_1 evaluated on n*R, i.e. an integer.
inline Count hamming_via_confusion(const ConfusionMatrix& c) {
  const std::size_t k = c.counts.rows();
  const auto colsum = c.counts.col_sums();
  Count l1 = 0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      const Count d = (a == b ? colsum[a] : 0) - c.counts(a, b);
      l1 += d < 0 ? -d : d;
    }
  return l1 / 2;
}

/// Unaligned Hamming fraction (1/n) sum 1{e_i != z_i}, computed as
/// (1/2) || Diag(R^T 1) - R ||_1.
inline double misclassification_l1(const Labeling& e, const Labeling& z) {
  const auto c = confusion(e, z);
  return static_cast<double>(hamming_via_confusion(c)) / static_cast<double>(c.n);
}

/// Smallest community size admitted by F(n, alpha): least s with s >= alpha*n,
/// compared exactly against the binary value of alpha.
inline Count min_community_size(std::size_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1), got " + std::to_string(alpha));
  const double nd = static_cast<double>(n);
  auto s = static_cast<Count>(std::ceil(alpha * nd));
  // fma gives the sign of alpha*n - s without intermediate rounding.
  while (s > 0 && std::fma(alpha, nd, -static_cast<double>(s - 1)) <= 0.0) --s;
  while (std::fma(alpha, nd, -static_cast<double>(s)) > 0.0) ++s;
  return s;
}

/// z in F(n, alpha): every community has n_a >= alpha * n.
inline bool in_constraint_set(const Labeling& z, double alpha) {
  const Count min_size = min_community_size(z.size(), alpha);
  for (Count s : z.community_sizes())
    if (s < min_size) return false;
  return true;
}

/// F(n, alpha) is nonempty iff k communities of the minimum size fit.
inline bool constraint_set_nonempty(std::size_t n, std::size_t k, double alpha) {
  return static_cast<Count>(k) * min_community_size(n, alpha) <= static_cast<Count>(n);
}

}  // namespace sbmcd
