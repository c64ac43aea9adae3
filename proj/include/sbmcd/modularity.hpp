#pragma once

// Likelihood modularity Q_ML and integrated conditional likelihood
// modularity Q_ICL (Beta(1/2,1/2) prior), both in nats and normalized by n^2.

#include <cmath>
#include <numbers>
#include <string_view>
#include <stdexcept>
#include <string>

#include "sbmcd/graph.hpp"

namespace sbmcd {

enum class Objective { kML, kICL };

inline std::string_view to_string(Objective o) { return o == Objective::kML ? "ml" : "icl"; }

inline Objective parse_objective(std::string_view s) {
  if (s == "ml" || s == "ML") return Objective::kML;
  if (s == "icl" || s == "ICL") return Objective::kICL;
  throw std::invalid_argument("unknown objective '" + std::string(s) + "' (expected ml or icl)");
}

struct ModularityValue {
  double value = 0.0;
  Objective objective = Objective::kML;
};

/// x log x with 0 log 0 = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// tau(x) = x log x + (1-x) log(1-x), tau(0) = tau(1) = 0.
inline double tau(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return x * std::log(x) + (1.0 - x) * std::log1p(-x);
}

/// Thread-safe log Gamma for positive arguments.
inline double log_gamma(double x) {
#if defined(__GLIBC__) || defined(__APPLE__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

/// log[ B(o + 1/2, m - o + 1/2) / B(1/2, 1/2) ] for a block with m pairs and
/// o edges. Zero when m = 0.
inline double icl_block_term(double edges, double pairs) {
  if (pairs <= 0.0) return 0.0;
  return log_gamma(edges + 0.5) + log_gamma(pairs - edges + 0.5) - log_gamma(pairs + 1.0) -
         std::log(std::numbers::pi);
}

/// m * tau(o/m) rewritten as o log o + (m-o) log(m-o) - m log m.
inline double ml_block_term(double edges, double pairs) {
  if (pairs <= 0.0) return 0.0;
  return xlogx(edges) + xlogx(pairs - edges) - xlogx(pairs);
}

namespace detail {

template <typename TauFn>
double q_ml_with(const BlockCounters& c, std::size_t n, TauFn&& tau_fn) {
  const std::size_t k = c.k();
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      const auto pairs = c.pair_counts(a, b);
      if (pairs == 0) continue;
      const double ratio = static_cast<double>(c.edge_counts(a, b)) / static_cast<double>(pairs);
      total += static_cast<double>(pairs) * tau_fn(ratio);
    }
  const double nd = static_cast<double>(n);
  return total / (2.0 * nd * nd);
}

}  // namespace detail

inline double q_ml(const BlockCounters& c, std::size_t n) {
  return detail::q_ml_with(c, n, [](double x) { return tau(x); });
}

inline double q_icl(const BlockCounters& c, std::size_t n) {
  const std::size_t k = c.k();
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b)
      total += icl_block_term(static_cast<double>(c.half_edges(a, b)),
                              static_cast<double>(c.half_pairs(a, b)));
  const double nd = static_cast<double>(n);
  return total / (nd * nd);
}

/// Q_ML(z) = (1/2n^2) sum_{a,b} n_ab tau(o_ab / n_ab).
inline double q_ml(const Graph& g, const Labeling& z) {
  return q_ml(block_counters(g, z), g.num_nodes());
}

/// Q_ICL(z) = (1/n^2) sum_{a<=b} log[ B(o~_ab + 1/2, n~_ab - o~_ab + 1/2) / B(1/2,1/2) ].
inline double q_icl(const Graph& g, const Labeling& z) {
  return q_icl(block_counters(g, z), g.num_nodes());
}

inline double evaluate(Objective obj, const Graph& g, const Labeling& z) {
  return obj == Objective::kML ? q_ml(g, z) : q_icl(g, z);
}

inline ModularityValue modularity(Objective obj, const Graph& g, const Labeling& z) {
  return {evaluate(obj, g, z), obj};
}

struct GapBound {
  double gap = 0.0;    // Q_ML - Q_ICL
  double bound = 0.0;  // k^2 (log n + 2) / n^2
  bool holds() const { return gap >= 0.0 && gap <= bound; }
};

inline double icl_ml_bound(std::size_t k, std::size_t n) {
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return kd * kd * (std::log(nd) + 2.0) / (nd * nd);
}

inline GapBound icl_ml_gap(const Graph& g, const Labeling& z) {
  const auto c = block_counters(g, z);
  const std::size_t n = g.num_nodes();
  return {q_ml(c, n) - q_icl(c, n), icl_ml_bound(z.k(), n)};
}

}  // namespace sbmcd
