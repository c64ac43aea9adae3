#pragma once

// Analytical quantities: rate divergences, the Chernoff-Hellinger constant
// C(pi,S), G_S, H_{P,n}, the X statistic and the W deviation matrix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "sbmcd/errors.hpp"
#include "sbmcd/graph.hpp"
#include "sbmcd/matrix.hpp"
#include "sbmcd/modularity.hpp"
#include "sbmcd/sampler.hpp"

namespace sbmcd {

namespace divergence {

/// gamma(x) = x log x - x.
inline double gamma_fn(double x) { return xlogx(x) - x; }

/// Bernoulli KL divergence KL(p || q).
inline double kl(double p, double q) {
  double out = 0.0;
  if (p > 0.0) out += p * std::log(p / q);
  if (p < 1.0) out += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return out;
}

/// K_1(p || q) = p log(p/q) + q - p.
inline double k1(double p, double q) { return p * std::log(p / q) + q - p; }

/// K_t(p || q) = p^{1-t} q^t + t p log(p/q) - p.
inline double kt(double t, double p, double q) {
  return std::pow(p, 1.0 - t) * std::pow(q, t) + t * p * std::log(p / q) - p;
}

/// H_t(p || q) = (1-t) p + t q - p^{1-t} q^t.
inline double ht(double t, double p, double q) {
  return (1.0 - t) * p + t * q - std::pow(p, 1.0 - t) * std::pow(q, t);
}

/// L(x) = e^x - x - 1.
inline double big_l(double x) { return std::expm1(x) - x; }

}  // namespace divergence

/// Maximize a concave function on [lo, hi] by golden-section search.
/// Returns (argmax, max).
inline std::pair<double, double> maximize_concave(const std::function<double(double)>& f,
                                                  double lo = 0.0, double hi = 1.0,
                                                  double tol = 1e-10, int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  double t = 0.5 * (a + b);
  double best = f(t);
  // Endpoints can win when the maximum sits on the boundary.
  for (double edge : {lo, hi}) {
    const double fe = f(edge);
    if (fe > best) {
      best = fe;
      t = edge;
    }
  }
  return {t, best};
}

struct PhaseConstant {
  double value = 0.0;
  std::pair<std::size_t, std::size_t> argmin_pair{0, 1};
  double argmax_t = 0.5;

  /// Exact recovery threshold at rho = log n / n for the ML estimator.
  bool ml_threshold_met() const { return value >= 1.0; }
  /// The (stronger) threshold for the ICL estimator: C >= 1 + k^2.
  bool icl_threshold_met(std::size_t k) const {
    return value >= 1.0 + static_cast<double>(k * k);
  }
};

/// t -> sum_a pi_a H_t(S_ab || S_ab').
inline double ch_profile(const std::vector<double>& pi, const Matrix<double>& s, std::size_t b,
                         std::size_t b2, double t) {
  double acc = 0.0;
  for (std::size_t a = 0; a < pi.size(); ++a) acc += pi[a] * divergence::ht(t, s(a, b), s(a, b2));
  return acc;
}

/// C(pi, S) = min_{b != b'} max_{t in [0,1]} sum_a pi_a H_t(S_ab || S_ab').
/// The inner objective is concave in t. Ties in the outer minimum keep the
/// lexicographically smallest ordered pair.
inline PhaseConstant ch_constant(const std::vector<double>& pi, const Matrix<double>& s) {
  const std::size_t k = pi.size();
  if (k < 2) throw UndefinedError("C(pi,S) needs k >= 2");
  if (s.rows() != k || s.cols() != k) throw ParameterError("S must be k x k");
  for (double p : pi)
    if (!(p > 0.0)) throw ParameterError("pi entries must be positive");
  for (double v : s.data())
    if (!(v > 0.0)) throw ParameterError("S entries must be positive");

  PhaseConstant best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < k; ++b)
    for (std::size_t b2 = 0; b2 < k; ++b2) {
      if (b == b2) continue;
      const auto [t, v] =
          maximize_concave([&](double tt) { return ch_profile(pi, s, b, b2, tt); });
      if (v < best.value) {
        best.value = v;
        best.argmin_pair = {b, b2};
        best.argmax_t = t;
      }
    }
  return best;
}

inline PhaseConstant ch_constant(const SbmParams& params) {
  return ch_constant(params.pi, params.shape);
}

/// D(S) = max_{t in [0,1]} max_{a != a', b != b'} K_t(S_ab || S_a'b').
/// K_t is convex in t with K_0 = 0, so the maximum over t sits at t = 0 or t = 1.
inline double d_value(const Matrix<double>& s) {
  const std::size_t k = s.rows();
  double best = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t a2 = 0; a2 < k; ++a2) {
      if (a == a2) continue;
      for (std::size_t b = 0; b < k; ++b)
        for (std::size_t b2 = 0; b2 < k; ++b2) {
          if (b == b2) continue;
          best = std::max(best, divergence::kt(1.0, s(a, b), s(a2, b2)));
        }
    }
  return best;
}

/// G_S(R) = sum_ab [R S R^T]_ab log([R S R^T]_ab / ([R1]_a [R1]_b)).
inline double g_s(const Matrix<double>& r, const Matrix<double>& s) {
  const std::size_t k = r.rows();
  const auto rsr = r * s * r.transpose();
  const auto row = r.row_sums();
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      const double num = rsr(a, b);
      if (num == 0.0) continue;
      const double den = row[a] * row[b];
      if (!(den > 0.0)) throw DegenerateBlockError(a, b);
      total += num * std::log(num / den);
    }
  return total;
}

inline double g_s(const ConfusionMatrix& r, const Matrix<double>& s) { return g_s(r.r, s); }

/// G_S(Diag(R^T 1)) - G_S(R); nonnegative, zero iff R is a row-permuted diagonal.
inline double g_s_gap(const Matrix<double>& r, const Matrix<double>& s) {
  return g_s(diag(r.col_sums()), s) - g_s(r, s);
}

/// H_{P,n}(R) = (1/2) sum_ab [R1]_a ([R1]_b - delta_ab/n) tau([P_R]_ab).
inline double h_pn(const ConfusionMatrix& r, const Matrix<double>& prob, std::size_t n) {
  const auto pr = mixture_probability(r, prob, n);
  const auto row = r.row_marginals();
  const std::size_t k = r.k();
  const double nd = static_cast<double>(n);
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      total += row[a] * (row[b] - (a == b ? 1.0 / nd : 0.0)) * tau(pr(a, b));
  return 0.5 * total;
}

inline double h_pn(const ConfusionMatrix& r, const SbmParams& params, std::size_t n) {
  return h_pn(r, params.probability_matrix(), n);
}

/// X(e,z) = (1/2n^2) sum_ab n_ab(e) [tau(o_ab(e)/n_ab(e)) - tau([P_R(e,z)]_ab)].
inline double x_statistic(const Graph& g, const Labeling& e, const Labeling& z,
                          const SbmParams& params) {
  check_pair(e, z);
  const auto c = block_counters(g, e);
  const std::size_t n = g.num_nodes();
  const auto pr = mixture_probability(confusion(e, z), params, n);
  const std::size_t k = e.k();
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      const double pairs = static_cast<double>(c.pair_counts(a, b));
      total += pairs * (tau(static_cast<double>(c.edge_counts(a, b)) / pairs) - tau(pr(a, b)));
    }
  const double nd = static_cast<double>(n);
  return total / (2.0 * nd * nd);
}

/// W_ab(e,z) = [o_ab(e) - E o_ab(e) - o_ab(z) + E o_ab(z)] / n^2, expectations given Z = z.
inline Matrix<double> w_deviation(const Graph& g, const Labeling& e, const Labeling& z,
                                  const SbmParams& params) {
  check_pair(e, z);
  const auto prob = params.probability_matrix();
  const auto oe = block_counters(g, e).edge_counts;
  const auto oz = block_counters(g, z).edge_counts;
  const auto ee = expected_edge_counts(e, z, prob);
  const auto ez = expected_edge_counts(z, z, prob);
  const std::size_t k = e.k();
  const double n2 = static_cast<double>(g.num_nodes()) * static_cast<double>(g.num_nodes());
  Matrix<double> w(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      const double de = static_cast<double>(oe(a, b)) - ee(a, b);
      const double dz = static_cast<double>(oz(a, b)) - ez(a, b);
      w(a, b) = (de - dz) / n2;
    }
  return w;
}

}  // namespace sbmcd
