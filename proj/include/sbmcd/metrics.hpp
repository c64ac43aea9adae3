#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sbmcd/graph.hpp"

namespace sbmcd {

/// Normalized mutual information 2 I(e;z) / (H(e) + H(z)), plug-in estimates
/// in nats. The two labelings may use different numbers of communities.
/// Both single-cluster: 1. Exactly one single-cluster: 0.
inline double nmi(std::span<const Label> e, std::span<const Label> z) {
  if (e.size() != z.size()) throw std::invalid_argument("nmi: labelings differ in length");
  if (e.empty()) throw std::invalid_argument("nmi: empty labelings");
  std::map<Label, double> pe, pz;
  std::map<std::pair<Label, Label>, double> joint;
  for (std::size_t i = 0; i < e.size(); ++i) {
    ++pe[e[i]];
    ++pz[z[i]];
    ++joint[{e[i], z[i]}];
  }
  const bool e_single = pe.size() == 1, z_single = pz.size() == 1;
  if (e_single && z_single) return 1.0;
  if (e_single || z_single) return 0.0;

  const double n = static_cast<double>(e.size());
  auto entropy = [n](const std::map<Label, double>& m) {
    double h = 0.0;
    for (const auto& [_, c] : m) h -= (c / n) * std::log(c / n);
    return h;
  };
  double mi = 0.0;
  for (const auto& [key, c] : joint) mi += (c / n) * std::log(c * n / (pe[key.first] * pz[key.second]));
  const double denom = entropy(pe) + entropy(pz);
  return std::clamp(2.0 * mi / denom, 0.0, 1.0);
}

inline double nmi(const Labeling& e, const Labeling& z) { return nmi(e.labels(), z.labels()); }

/// Ranks starting at 1, ties get the average rank.
inline std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[idx[t]] = avg;
    i = j + 1;
  }
  return rank;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("pearson: need two equal series of length >= 2");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

/// Spearman rank correlation (Pearson on average ranks).
inline double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

}  // namespace sbmcd
