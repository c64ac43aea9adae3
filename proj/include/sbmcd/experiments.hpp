#pragma once

// Simulation harness: separation and sparsity sweeps measured by NMI, the
// block-frequency concentration diagnostic, and CSV / SVG writers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sbmcd/estimators.hpp"
#include "sbmcd/graph.hpp"
#include "sbmcd/metrics.hpp"
#include "sbmcd/parallel.hpp"
#include "sbmcd/rng.hpp"
#include "sbmcd/sampler.hpp"
#include "sbmcd/theory.hpp"

namespace sbmcd {

/// Formats with 12 significant digits, the precision used in every report.
inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct SweepRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double s1 = 0.0;
  double s2 = 0.0;
  double separation = 0.0;
  double rho = 0.0;
  std::uint64_t replicate_seed = 0;
  Objective objective = Objective::kML;
  double nmi = 0.0;
  Count misclassified = 0;
  double runtime_ms = 0.0;

  // Filled only when labelings are kept.
  std::vector<Label> truth;
  std::vector<Label> estimate;
};

inline constexpr const char* kSweepCsvHeader =
    "n,k,s1,s2,separation,rho,replicate_seed,objective,nmi,misclassified,runtime_ms";

inline void write_csv_row(std::ostream& out, const SweepRow& r) {
  out << r.n << ',' << r.k << ',' << fmt12(r.s1) << ',' << fmt12(r.s2) << ','
      << fmt12(r.separation) << ',' << fmt12(r.rho) << ',' << r.replicate_seed << ','
      << to_string(r.objective) << ',' << fmt12(r.nmi) << ',' << r.misclassified << ','
      << fmt12(r.runtime_ms) << '\n';
}

inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) write_csv_row(out, r);
}

struct SweepConfig {
  std::size_t n = 200;
  std::size_t k = 2;
  std::size_t reps = 50;
  std::uint64_t base_seed = 1;
  double s2 = 1.0;
  double alpha = 0.05;
  std::size_t restarts = 20;
  std::size_t max_sweeps = 100;
  std::size_t threads = 1;
  bool record_timing = false;
  bool keep_labelings = false;
};

/// One point of a sweep grid: the x-axis value and the model it induces.
struct GridPoint {
  double x = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double rho = 0.0;
};

struct GridSummary {
  double x = 0.0;
  std::size_t replicates = 0;
  double mean_nmi_ml = 0.0, se_nmi_ml = 0.0;
  double mean_nmi_icl = 0.0, se_nmi_icl = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<GridSummary> summary;
  std::vector<std::string> warnings;
};

/// s1 such that (sqrt(s1) - sqrt(s2))^2 = separation, with s1 >= s2.
inline double s1_for_separation(double separation, double s2) {
  const double r = std::sqrt(s2) + std::sqrt(separation);
  return r * r;
}

inline double separation_of(double s1, double s2) {
  const double d = std::sqrt(s1) - std::sqrt(s2);
  return d * d;
}

/// `count` evenly spaced values from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

inline std::vector<GridSummary> summarize(const std::vector<SweepRow>& rows,
                                          const std::vector<GridPoint>& grid,
                                          bool x_is_separation) {
  std::vector<GridSummary> out;
  for (const auto& gp : grid) {
    std::vector<double> ml, icl;
    for (const auto& r : rows) {
      const double x = x_is_separation ? r.separation : r.rho;
      if (x != (x_is_separation ? separation_of(gp.s1, gp.s2) : gp.rho)) continue;
      (r.objective == Objective::kML ? ml : icl).push_back(r.nmi);
    }
    if (ml.empty() && icl.empty()) continue;
    auto mean_se = [](const std::vector<double>& v) -> std::pair<double, double> {
      if (v.empty()) return {0.0, 0.0};
      double m = 0.0;
      for (double x : v) m += x;
      m /= static_cast<double>(v.size());
      if (v.size() < 2) return {m, 0.0};
      double ss = 0.0;
      for (double x : v) ss += (x - m) * (x - m);
      const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
      return {m, sd / std::sqrt(static_cast<double>(v.size()))};
    };
    GridSummary s;
    s.x = gp.x;
    s.replicates = std::max(ml.size(), icl.size());
    std::tie(s.mean_nmi_ml, s.se_nmi_ml) = mean_se(ml);
    std::tie(s.mean_nmi_icl, s.se_nmi_icl) = mean_se(icl);
    out.push_back(s);
  }
  return out;
}

/// Core sweep: for every grid point and replicate, sample a balanced SBM and
/// fit it with both greedy estimators. Replicate r of grid point g uses
/// seed derive_seed(base_seed, g * reps + r); the ML and ICL fits use
/// derive_seed(replicate_seed, 2) and derive_seed(replicate_seed, 3).
inline SweepResult run_sweep(const std::vector<GridPoint>& grid, const SweepConfig& cfg,
                             bool x_is_separation) {
  SweepResult result;
  std::vector<bool> valid(grid.size(), true);
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const auto params = SbmParams::balanced(cfg.k, grid[gi].s1, grid[gi].s2, grid[gi].rho);
    try {
      params.validate();
    } catch (const ParameterError& e) {
      valid[gi] = false;
      result.warnings.push_back("skipped grid point x=" + fmt12(grid[gi].x) + ": " + e.what());
    }
  }

  const std::size_t tasks = grid.size() * cfg.reps;
  std::vector<std::vector<SweepRow>> per_task(tasks);
  parallel_for(tasks, cfg.threads, [&](std::size_t task) {
    const std::size_t gi = task / cfg.reps;
    if (!valid[gi]) return;
    const auto& gp = grid[gi];
    const auto params = SbmParams::balanced(cfg.k, gp.s1, gp.s2, gp.rho);
    const std::uint64_t rep_seed = derive_seed(cfg.base_seed, task);
    const auto [truth, g] = sample(params, cfg.n, rep_seed);
    for (Objective obj : {Objective::kML, Objective::kICL}) {
      SearchConfig sc;
      sc.objective = obj;
      sc.alpha = cfg.alpha;
      sc.restarts = cfg.restarts;
      sc.max_sweeps = cfg.max_sweeps;
      sc.seed = derive_seed(rep_seed, obj == Objective::kML ? 2 : 3);
      const auto t0 = std::chrono::steady_clock::now();
      const auto fit = greedy_argmax(g, cfg.k, sc);
      const auto t1 = std::chrono::steady_clock::now();
      SweepRow row;
      row.n = cfg.n;
      row.k = cfg.k;
      row.s1 = gp.s1;
      row.s2 = gp.s2;
      row.separation = separation_of(gp.s1, gp.s2);
      row.rho = gp.rho;
      row.replicate_seed = rep_seed;
      row.objective = obj;
      row.nmi = nmi(fit.labeling, truth);
      row.misclassified = misclassification(fit.labeling, truth);
      if (cfg.record_timing)
        row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      if (cfg.keep_labelings) {
        row.truth.assign(truth.labels().begin(), truth.labels().end());
        row.estimate.assign(fit.labeling.labels().begin(), fit.labeling.labels().end());
      }
      per_task[task].push_back(std::move(row));
    }
  });
  for (auto& rows : per_task)
    for (auto& r : rows) result.rows.push_back(std::move(r));
  result.summary = summarize(result.rows, grid, x_is_separation);
  return result;
}

/// NMI against (sqrt(s1) - sqrt(s2))^2 at rho = log n / n with s2 fixed.
inline SweepResult sweep_separation(const std::vector<double>& separations, const SweepConfig& cfg) {
  std::vector<GridPoint> grid;
  const double rho = resolve_rho(RhoMode::kLogNOverN, cfg.n);
  for (double sep : separations) {
    if (sep < 0.0) throw std::invalid_argument("separation must be nonnegative");
    grid.push_back({sep, s1_for_separation(sep, cfg.s2), cfg.s2, rho});
  }
  return run_sweep(grid, cfg, true);
}

inline constexpr double kSparsitySweepSeparation = 2.10;

/// NMI against rho at a fixed separation (default 2.10).
inline SweepResult sweep_sparsity(const std::vector<double>& rhos, const SweepConfig& cfg,
                                  double separation = kSparsitySweepSeparation) {
  std::vector<GridPoint> grid;
  const double s1 = s1_for_separation(separation, cfg.s2);
  for (double rho : rhos) grid.push_back({rho, s1, cfg.s2, rho});
  return run_sweep(grid, cfg, false);
}

inline std::vector<double> default_separation_grid(std::size_t k, std::size_t points = 9) {
  return linspace(0.0, 2.0 * static_cast<double>(k), points);
}

inline std::vector<double> default_sparsity_grid(std::size_t n, std::size_t points = 9) {
  const double nd = static_cast<double>(n);
  return linspace(1.0 / nd, std::log(nd) / nd, points);
}

/// Human-readable per-grid-point summary, plus the ML/ICL agreement check.
inline void write_summary(std::ostream& out, const SweepResult& res, const std::string& x_name) {
  out << x_name << ",replicates,mean_nmi_ml,se_nmi_ml,mean_nmi_icl,se_nmi_icl\n";
  double worst = 0.0;
  for (const auto& s : res.summary) {
    out << fmt12(s.x) << ',' << s.replicates << ',' << fmt12(s.mean_nmi_ml) << ','
        << fmt12(s.se_nmi_ml) << ',' << fmt12(s.mean_nmi_icl) << ',' << fmt12(s.se_nmi_icl) << '\n';
    worst = std::max(worst, std::abs(s.mean_nmi_ml - s.mean_nmi_icl));
  }
  out << "# max |mean NMI ML - mean NMI ICL| = " << fmt12(worst)
      << (worst <= 0.1 ? " (within 0.1)" : " (exceeds 0.1)") << '\n';
  for (const auto& w : res.warnings) out << "# warning: " << w << '\n';
}

/// Line plot of mean NMI +/- one standard error for both estimators.
inline void write_svg_plot(std::ostream& out, const std::vector<GridSummary>& summary,
                           const std::string& x_label, const std::string& title,
                           std::optional<double> marker = {}) {
  const double w = 640, h = 420, ml = 60, mr = 20, mt = 40, mb = 50;
  double xmin = 0.0, xmax = 1.0;
  if (!summary.empty()) {
    xmin = summary.front().x;
    xmax = summary.front().x;
    for (const auto& s : summary) {
      xmin = std::min(xmin, s.x);
      xmax = std::max(xmax, s.x);
    }
  }
  if (marker) {
    xmin = std::min(xmin, *marker);
    xmax = std::max(xmax, *marker);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return mt + (1.0 - y) * (h - mt - mb); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << py(0) << "\" x2=\"" << w - mr << "\" y2=\"" << py(0)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << py(0) << "\" x2=\"" << ml << "\" y2=\"" << py(1)
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = i / 4.0;
    out << "<text x=\"" << ml - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
        << fmt12(y) << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double x = xmin + (xmax - xmin) * i / 4.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    out << "<text x=\"" << px(x) << "\" y=\"" << h - mb + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
        << buf << "</text>\n";
  }
  out << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << h / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << h / 2 << ")\">mean NMI</text>\n";
  if (marker)
    out << "<line x1=\"" << px(*marker) << "\" y1=\"" << py(0) << "\" x2=\"" << px(*marker) << "\" y2=\""
        << py(1) << "\" stroke=\"gray\" stroke-dasharray=\"5,4\"/>\n";

  auto series = [&](bool ml_series, const char* color) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& s : summary)
      out << px(s.x) << ',' << py(ml_series ? s.mean_nmi_ml : s.mean_nmi_icl) << ' ';
    out << "\"/>\n";
    for (const auto& s : summary) {
      const double m = ml_series ? s.mean_nmi_ml : s.mean_nmi_icl;
      const double se = ml_series ? s.se_nmi_ml : s.se_nmi_icl;
      out << "<line x1=\"" << px(s.x) << "\" y1=\"" << py(std::min(1.0, m + se)) << "\" x2=\"" << px(s.x)
          << "\" y2=\"" << py(std::max(0.0, m - se)) << "\" stroke=\"" << color << "\"/>\n";
    }
  };
  series(true, "#1f77b4");
  series(false, "#d62728");
  out << "<text x=\"" << w - mr - 80 << "\" y=\"" << mt + 14 << "\" font-size=\"12\" fill=\"#1f77b4\">ML</text>\n";
  out << "<text x=\"" << w - mr - 80 << "\" y=\"" << mt + 30 << "\" font-size=\"12\" fill=\"#d62728\">ICL</text>\n";
  out << "</svg>\n";
}

struct ConcentrationReport {
  std::size_t n = 0;
  double rho = 0.0;
  double delta = 0.0;
  double empirical_sup_deviation = 0.0;  // mean over replicates
  double theoretical_bound = 0.0;        // sqrt(delta rho log n) / n
  std::size_t replicates = 0;
  double violation_fraction = 0.0;
  std::size_t w_nonzero = 0;  // replicates where W(z,z) had a nonzero entry
};

/// sup_ab |o_ab / n_ab - rho S_ab| over blocks with n_ab > 0.
inline double sup_block_deviation(const Graph& g, const Labeling& z, const SbmParams& params) {
  const auto c = block_counters(g, z);
  const auto prob = params.probability_matrix();
  double sup = 0.0;
  for (std::size_t a = 0; a < c.k(); ++a)
    for (std::size_t b = 0; b < c.k(); ++b) {
      if (c.pair_counts(a, b) == 0) continue;
      const double phat =
          static_cast<double>(c.edge_counts(a, b)) / static_cast<double>(c.pair_counts(a, b));
      sup = std::max(sup, std::abs(phat - prob(a, b)));
    }
  return sup;
}

/// Samples `reps` networks and counts how often the sup block deviation at
/// the true labeling reaches sqrt(delta rho log n) / n. Replicate r uses
/// seed derive_seed(base_seed, r).
inline ConcentrationReport concentration_experiment(const SbmParams& params, std::size_t n,
                                                    std::size_t reps, double delta,
                                                    std::uint64_t base_seed = 1,
                                                    std::size_t threads = 1) {
  if (reps < 100) throw std::invalid_argument("concentration needs reps >= 100");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  params.validate();
  const double nd = static_cast<double>(n);
  ConcentrationReport rep;
  rep.n = n;
  rep.rho = params.rho;
  rep.delta = delta;
  rep.replicates = reps;
  rep.theoretical_bound = std::sqrt(delta * params.rho * std::log(nd)) / nd;

  std::vector<double> sup(reps);
  std::vector<char> w_nonzero(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const auto [z, g] = sample(params, n, derive_seed(base_seed, r));
    sup[r] = sup_block_deviation(g, z, params);
    const auto w = w_deviation(g, z, z, params);
    for (double v : w.data())
      if (v != 0.0) w_nonzero[r] = 1;
  });
  std::size_t violations = 0;
  double total = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    total += sup[r];
    if (!(sup[r] < rep.theoretical_bound)) ++violations;
    rep.w_nonzero += static_cast<std::size_t>(w_nonzero[r]);
  }
  rep.empirical_sup_deviation = total / static_cast<double>(reps);
  rep.violation_fraction = static_cast<double>(violations) / static_cast<double>(reps);
  return rep;
}

inline constexpr const char* kConcentrationCsvHeader =
    "n,rho,delta,empirical_sup_deviation,theoretical_bound,replicates,violation_fraction,w_nonzero";

inline void write_csv_row(std::ostream& out, const ConcentrationReport& r) {
  out << r.n << ',' << fmt12(r.rho) << ',' << fmt12(r.delta) << ',' << fmt12(r.empirical_sup_deviation)
      << ',' << fmt12(r.theoretical_bound) << ',' << r.replicates << ',' << fmt12(r.violation_fraction)
      << ',' << r.w_nonzero << '\n';
}

}  // namespace sbmcd
