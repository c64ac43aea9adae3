#pragma once

// Random graphs, labelings and confusion matrices for property checks.

#include <cstddef>
#include <vector>

#include "sbmcd/graph.hpp"
#include "sbmcd/matrix.hpp"
#include "sbmcd/rng.hpp"

namespace sbmcd {

/// G(n, p) with edges drawn in lexicographic order.
inline Graph random_graph(std::size_t n, double p, Xoshiro256& rng) {
  std::vector<Graph::Edge> edges;
  for (Node i = 0; i < n; ++i)
    for (Node j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
  return Graph(n, edges);
}

/// Uniform labeling in [k]^n; with `min_size` > 0 it is redrawn until every
/// community has at least that many nodes (caller guarantees k*min_size <= n).
inline Labeling random_labeling(std::size_t n, std::size_t k, Xoshiro256& rng, Count min_size = 0) {
  for (;;) {
    std::vector<Label> z(n);
    std::vector<Count> sizes(k, 0);
    for (auto& l : z) {
      l = static_cast<Label>(rng.below(k));
      ++sizes[l];
    }
    bool ok = true;
    for (Count s : sizes) ok = ok && s >= min_size;
    if (ok) return Labeling(std::move(z), k);
  }
}

/// Random symmetric matrix with entries uniform in [lo, hi).
inline Matrix<double> random_symmetric(std::size_t k, double lo, double hi, Xoshiro256& rng) {
  Matrix<double> m(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) m(a, b) = m(b, a) = lo + (hi - lo) * rng.uniform();
  return m;
}

/// Random probability vector with entries bounded away from zero.
inline std::vector<double> random_simplex(std::size_t k, Xoshiro256& rng) {
  std::vector<double> v(k);
  double total = 0.0;
  for (auto& x : v) total += (x = 0.2 + rng.uniform());
  for (auto& x : v) x /= total;
  return v;
}

}  // namespace sbmcd
