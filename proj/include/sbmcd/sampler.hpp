#pragma once

// SBM parameters, sampling, and the conditional-expectation objects
// E(o_ab(e) | Z=z) and the mixture probability P_R.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sbmcd/errors.hpp"
#include "sbmcd/graph.hpp"
#include "sbmcd/matrix.hpp"
#include "sbmcd/rng.hpp"

namespace sbmcd {

inline constexpr double kMinEdgeProbability = 1e-12;
inline constexpr double kMaxEdgeProbability = 1.0 - 1e-12;

/// How the sparsity scale rho is chosen for a given n.
enum class RhoMode { kConst, kLogNOverN, kOneOverN, kCustomLogN };

inline double resolve_rho(RhoMode mode, std::size_t n, double rho_const = 1.0, double c = 1.0) {
  const double nd = static_cast<double>(n);
  switch (mode) {
    case RhoMode::kConst: return rho_const;
    case RhoMode::kLogNOverN: return std::log(nd) / nd;
    case RhoMode::kOneOverN: return 1.0 / nd;
    case RhoMode::kCustomLogN: return c * std::log(nd) / nd;
  }
  return rho_const;
}

/// (k, pi, S, rho) with P = rho * S.
struct SbmParams {
  std::vector<double> pi;
  Matrix<double> shape;  // S
  double rho = 1.0;

  std::size_t k() const { return pi.size(); }

  Matrix<double> probability_matrix() const { return scaled(shape, rho); }

  /// Throws ParameterError unless pi is a positive probability vector, S is
  /// symmetric and positive, and every entry of P lies in [1e-12, 1-1e-12].
  void validate() const {
    const std::size_t k = pi.size();
    if (k == 0) throw ParameterError("k must be at least 1");
    if (shape.rows() != k || shape.cols() != k)
      throw ParameterError("S must be " + std::to_string(k) + "x" + std::to_string(k));
    double total = 0.0;
    for (double p : pi) {
      if (!(p > 0.0)) throw ParameterError("pi entries must be positive");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ParameterError("pi must sum to 1");
    if (!shape.is_symmetric()) throw ParameterError("S must be symmetric");
    if (!(rho > 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in (0,1]");
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        if (!(shape(a, b) > 0.0)) throw ParameterError("S entries must be positive");
        const double p = rho * shape(a, b);
        if (!(p >= kMinEdgeProbability && p <= kMaxEdgeProbability))
          throw ParameterError("P(" + std::to_string(a) + "," + std::to_string(b) +
                               ") = " + std::to_string(p) + " outside [1e-12, 1-1e-12]");
      }
  }

  /// Identifiability warnings: pairs of identical columns of S.
  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    const std::size_t k = pi.size();
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = b + 1; c < k; ++c) {
        bool same = true;
        for (std::size_t a = 0; a < k && same; ++a) same = shape(a, b) == shape(a, c);
        if (same)
          out.push_back("columns " + std::to_string(b) + " and " + std::to_string(c) +
                        " of S are identical; communities are not identifiable");
      }
    return out;
  }

  /// Balanced k-community model: pi_a = 1/k, S = s_in on the diagonal, s_out off it.
  static SbmParams balanced(std::size_t k, double s_in, double s_out, double rho) {
    SbmParams p;
    p.pi.assign(k, 1.0 / static_cast<double>(k));
    p.shape = Matrix<double>(k, k, s_out);
    for (std::size_t a = 0; a < k; ++a) p.shape(a, a) = s_in;
    p.rho = rho;
    return p;
  }
};

/// Labels i.i.d. from pi, drawn in index order from the label stream of `seed`.
inline Labeling sample_labels(const SbmParams& params, std::size_t n, std::uint64_t seed) {
  Xoshiro256 rng(derive_seed(seed, 0));
  std::vector<Label> z(n);
  for (auto& l : z) l = static_cast<Label>(rng.categorical(params.pi));
  return Labeling(std::move(z), params.k());
}

/// Edges given labels: a_ij ~ Bernoulli(P_{z_i z_j}) for i<j in lexicographic
/// order, one uniform draw per pair from the edge stream of `seed`.
inline Graph sample_graph(const SbmParams& params, const Labeling& z, std::uint64_t seed) {
  params.validate();
  const auto prob = params.probability_matrix();
  Xoshiro256 rng(derive_seed(seed, 1));
  const std::size_t n = z.size();
  std::vector<Graph::Edge> edges;
  for (Node i = 0; i < n; ++i)
    for (Node j = i + 1; j < n; ++j)
      if (rng.uniform() < prob(z[i], z[j])) edges.emplace_back(i, j);
  return Graph(n, edges);
}

/// Draw (Z, A) from the SBM. Deterministic in (params, n, seed).
inline std::pair<Labeling, Graph> sample(const SbmParams& params, std::size_t n,
                                         std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample needs n >= 2");
  params.validate();
  Labeling z = sample_labels(params, n, seed);
  Graph g = sample_graph(params, z, seed);
  return {std::move(z), std::move(g)};
}

/// [P_R]_ab = ([R P R^T]_ab - delta_ab sum_i P_ii R_ai / n) / ([R1]_a ([R1]_b - delta_ab / n)).
inline Matrix<double> mixture_probability(const ConfusionMatrix& conf, const Matrix<double>& prob,
                                          std::size_t n) {
  const auto& r = conf.r;
  const std::size_t k = r.rows();
  if (prob.rows() != k || prob.cols() != k)
    throw std::invalid_argument("P and R differ in dimension");
  const double nd = static_cast<double>(n);
  const auto rpr = r * prob * r.transpose();
  const auto row = r.row_sums();
  Matrix<double> out(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      double num = rpr(a, b);
      double den = row[a] * row[b];
      if (a == b) {
        double self = 0.0;
        for (std::size_t i = 0; i < k; ++i) self += prob(i, i) * r(a, i);
        num -= self / nd;
        den = row[a] * (row[b] - 1.0 / nd);
      }
      if (!(den > 1e-15)) throw DegenerateBlockError(a, b);
      out(a, b) = num / den;
    }
  return out;
}

inline Matrix<double> mixture_probability(const ConfusionMatrix& conf, const SbmParams& params,
                                          std::size_t n) {
  return mixture_probability(conf, params.probability_matrix(), n);
}

/// E(o_ab(e) | Z=z) by direct summation over ordered pairs i != j.
inline Matrix<double> expected_edge_counts(const Labeling& e, const Labeling& z,
                                           const Matrix<double>& prob) {
  check_pair(e, z);
  const std::size_t k = e.k();
  Matrix<double> out(k, k);
  const std::size_t n = e.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) out(e[i], e[j]) += prob(z[i], z[j]);
  return out;
}

inline Matrix<double> expected_edge_counts(const Labeling& e, const Labeling& z,
                                           const SbmParams& params) {
  return expected_edge_counts(e, z, params.probability_matrix());
}

}  // namespace sbmcd
