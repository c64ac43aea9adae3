#pragma once

// Self-check suite run by `sbmcd verify`: every identity and bound the
// library relies on, evaluated on seeded random instances.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sbmcd/estimators.hpp"
#include "sbmcd/experiments.hpp"
#include "sbmcd/graph.hpp"
#include "sbmcd/modularity.hpp"
#include "sbmcd/random_instances.hpp"
#include "sbmcd/rng.hpp"
#include "sbmcd/sampler.hpp"
#include "sbmcd/theory.hpp"

namespace sbmcd {

struct VerifyOptions {
  /// Mutation fixture: evaluate Q_ML with tau shifted by +1 in the gap check.
  bool corrupt_tau = false;
};

struct PropertyResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::optional<std::uint64_t> failing_seed;  // first instance that failed
  std::string detail;

  bool ok() const { return failures == 0; }
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;

  bool ok() const {
    for (const auto& p : properties)
      if (!p.ok()) return false;
    return true;
  }
};

inline void write_report(std::ostream& out, const VerifyReport& rep) {
  std::size_t passed = 0;
  for (const auto& p : rep.properties) {
    out << (p.ok() ? "PASS " : "FAIL ") << p.name << " checked=" << p.checked
        << " failures=" << p.failures;
    if (p.failing_seed) out << " seed=" << *p.failing_seed;
    if (!p.detail.empty()) out << " (" << p.detail << ')';
    out << '\n';
    passed += p.ok() ? 1 : 0;
  }
  out << "verify seed=" << rep.seed << ": " << passed << "/" << rep.properties.size()
      << " properties passed\n";
}

namespace detail {

// Runs `count` instances; instance i gets rng seeded with
// derive_seed(derive_seed(seed, id), i). check returns true on success.
inline PropertyResult run_property(const std::string& name, std::uint64_t seed, std::uint64_t id,
                                   std::size_t count,
                                   const std::function<bool(Xoshiro256&)>& check) {
  PropertyResult res;
  res.name = name;
  const std::uint64_t base = derive_seed(seed, id);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(base, i);
    Xoshiro256 rng(s);
    bool ok = false;
    try {
      ok = check(rng);
    } catch (const std::exception&) {
      ok = false;
    }
    ++res.checked;
    if (!ok) {
      ++res.failures;
      if (!res.failing_seed) res.failing_seed = s;
    }
  }
  return res;
}

inline std::size_t rand_between(Xoshiro256& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

}  // namespace detail

inline VerifyReport verify_all(std::uint64_t seed, const VerifyOptions& opts = {}) {
  using detail::rand_between;
  using detail::run_property;
  VerifyReport rep;
  rep.seed = seed;

  rep.properties.push_back(run_property("icl_ml_gap_bound", seed, 1, 1000, [&](Xoshiro256& rng) {
    const std::size_t n = rand_between(rng, 2, 50);
    const std::size_t k = rand_between(rng, 1, 4);
    const Graph g = random_graph(n, rng.uniform(), rng);
    const Labeling z = random_labeling(n, k, rng);
    const auto c = block_counters(g, z);
    const double qml = opts.corrupt_tau
                           ? detail::q_ml_with(c, n, [](double x) { return tau(x) + 1.0; })
                           : q_ml(c, n);
    const double gap = qml - q_icl(c, n);
    return gap >= 0.0 && gap <= icl_ml_bound(k, n);
  }));

  rep.properties.push_back(run_property("misclassification_l1_identity", seed, 2, 1000, [](Xoshiro256& rng) {
    const std::size_t n = rand_between(rng, 1, 60);
    const std::size_t k = rand_between(rng, 1, 6);
    const Labeling e = random_labeling(n, k, rng), z = random_labeling(n, k, rng);
    Count hamming = 0;
    for (std::size_t i = 0; i < n; ++i) hamming += e[i] != z[i] ? 1 : 0;
    return hamming_via_confusion(confusion(e, z)) == hamming &&
           misclassification_l1(e, z) == static_cast<double>(hamming) / static_cast<double>(n);
  }));

  rep.properties.push_back(run_property("misclassification_enumeration_vs_assignment", seed, 3, 300,
                                        [](Xoshiro256& rng) {
    const std::size_t n = rand_between(rng, 1, 40);
    const std::size_t k = rand_between(rng, 1, 6);
    const Labeling e = random_labeling(n, k, rng), z = random_labeling(n, k, rng);
    const auto c = confusion(e, z);
    return detail::max_agreement_enumerate(c.counts) == detail::max_agreement_assignment(c.counts);
  }));

  rep.properties.push_back(run_property("expectation_identity", seed, 4, 200, [](Xoshiro256& rng) {
    const std::size_t k = rand_between(rng, 1, 4);
    const std::size_t n = rand_between(rng, 2 * k, 40);
    const Labeling e = random_labeling(n, k, rng, 2), z = random_labeling(n, k, rng);
    const auto prob = random_symmetric(k, 0.01, 0.99, rng);
    const auto direct = expected_edge_counts(e, z, prob);
    const auto pr = mixture_probability(confusion(e, z), prob, n);
    const auto pairs = block_counters(Graph(n), e).pair_counts;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        const double via = static_cast<double>(pairs(a, b)) * pr(a, b);
        if (std::abs(via - direct(a, b)) > 1e-10 * std::abs(direct(a, b))) return false;
      }
    return true;
  }));

  rep.properties.push_back(run_property("x_decomposition", seed, 5, 500, [](Xoshiro256& rng) {
    const std::size_t k = rand_between(rng, 1, 4);
    const std::size_t n = rand_between(rng, 2 * k, 40);
    SbmParams params;
    params.pi = random_simplex(k, rng);
    params.shape = random_symmetric(k, 0.05, 0.95, rng);
    params.rho = 1.0;
    const Labeling z = random_labeling(n, k, rng);
    const Labeling e = random_labeling(n, k, rng, 2);
    const Graph g = sample_graph(params, z, rng());
    const double x = x_statistic(g, e, z, params);
    const double via = q_ml(g, e) - h_pn(confusion(e, z), params, n);
    return std::abs(x - via) < 1e-10;
  }));

  rep.properties.push_back(run_property("balanced_closed_forms", seed, 6, 20, [](Xoshiro256& rng) {
    const double s1 = 10.0 * (1.0 - rng.uniform());  // (0, 10]
    const double s2 = 10.0 * (1.0 - rng.uniform());
    const double target2 = 0.5 * separation_of(s1, s2);
    if (std::abs(ch_constant(SbmParams::balanced(2, s1, s2, 1.0)).value - target2) > 1e-9) return false;
    for (std::size_t k = 2; k <= 5; ++k) {
      const double target = separation_of(s1, s2) / static_cast<double>(k);
      if (std::abs(ch_constant(SbmParams::balanced(k, s1, s2, 1.0)).value - target) > 1e-9) return false;
    }
    return true;
  }));

  {
    // Exact optimum bounds every greedy value; greedy must reach it in >= 95%.
    std::size_t attained = 0, total = 0;
    auto res = run_property("greedy_vs_exact", seed, 7, 40, [&](Xoshiro256& rng) {
      const auto params = SbmParams::balanced(2, 0.9, 0.05, 1.0);
      const auto [truth, g] = sample(params, 10, rng());
      bool ok = true;
      for (Objective obj : {Objective::kML, Objective::kICL}) {
        SearchConfig cfg;
        cfg.objective = obj;
        cfg.alpha = 0.2;
        cfg.restarts = 20;
        cfg.seed = rng();
        const auto exact = exact_argmax(g, 2, cfg);
        const auto greedy = greedy_argmax(g, 2, cfg);
        ++total;
        if (greedy.objective_value >= exact.objective_value - 1e-9) ++attained;
        ok = ok && greedy.objective_value <= exact.objective_value + 1e-9 && greedy.feasible;
      }
      return ok;
    });
    if (attained * 100 < 95 * total) {
      ++res.failures;
      res.detail = "attained exact optimum in " + std::to_string(attained) + "/" + std::to_string(total);
    } else {
      res.detail = "attained " + std::to_string(attained) + "/" + std::to_string(total);
    }
    rep.properties.push_back(res);
  }

  rep.properties.push_back(run_property("incremental_vs_recompute", seed, 8, 100, [](Xoshiro256& rng) {
    const std::size_t n = rand_between(rng, 6, 40);
    const std::size_t k = rand_between(rng, 2, 4);
    const Graph g = random_graph(n, 0.05 + 0.5 * rng.uniform(), rng);
    bool ok = true;
    for (Objective obj : {Objective::kML, Objective::kICL}) {
      SearchConfig cfg;
      cfg.objective = obj;
      cfg.alpha = 1.0 / static_cast<double>(4 * k);
      cfg.restarts = 2;
      cfg.seed = rng();
      double last = -1e300;
      std::size_t last_restart = 0;
      greedy_argmax(g, k, cfg, [&](std::size_t restart, Node, Label, const BlockState& st) {
        const double full = evaluate(obj, g, st.labeling());
        if (std::abs(full - st.value()) >= 1e-9) ok = false;
        if (restart == last_restart && st.value() <= last) ok = false;
        last = st.value();
        last_restart = restart;
      });
    }
    return ok;
  }));

  return rep;
}

}  // namespace sbmcd
