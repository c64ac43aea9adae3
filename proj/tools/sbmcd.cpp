// sbmcd: command-line front end for sampling, fitting, evaluating and the
// simulation sweeps. Exit codes: 0 success, 1 property failure, 2 usage or
// input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sbmcd.hpp"

namespace {

using json = nlohmann::json;
using namespace sbmcd;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;

// Writes to the file at `path`, or stdout when the path is empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  auto out = io::open_out(path);
  fn(out);
}

struct SampleOpts {
  std::string params;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string graph_out;
  std::string labels_out;
};

int run_sample(const SampleOpts& o) {
  const auto params = io::read_params(o.params).resolve(o.n);
  for (const auto& w : params.warnings()) std::cerr << "warning: " << w << '\n';
  const auto [z, g] = sample(params, o.n, o.seed);
  with_output(o.graph_out, [&](std::ostream& out) { io::write_edge_list(out, g, params.k()); });
  if (!o.labels_out.empty())
    with_output(o.labels_out, [&](std::ostream& out) { io::write_labeling(out, z); });
  std::cerr << "sampled n=" << o.n << " edges=" << g.num_edges() << " rho=" << fmt12(params.rho) << '\n';
  return kExitOk;
}

struct FitOpts {
  std::string input;
  std::string objective = "ml";
  std::optional<std::size_t> k;
  double alpha = 0.05;
  std::size_t restarts = 10;
  std::size_t max_sweeps = 100;
  std::uint64_t seed = 1;
  bool exact = false;
  std::string out;
  std::string meta;
};

int run_fit(const FitOpts& o) {
  const auto el = io::read_edge_list(o.input);
  const std::size_t k = o.k ? *o.k : el.k.value_or(0);
  if (k == 0) throw CLI::ValidationError("--k", "k not given and the edge list has no header");
  SearchConfig cfg;
  cfg.objective = parse_objective(o.objective);
  cfg.alpha = o.alpha;
  cfg.restarts = o.restarts;
  cfg.max_sweeps = o.max_sweeps;
  cfg.seed = o.seed;
  const auto fit = o.exact ? exact_argmax(el.graph, k, cfg) : greedy_argmax(el.graph, k, cfg);
  if (!o.out.empty()) with_output(o.out, [&](std::ostream& out) { io::write_labeling(out, fit.labeling); });

  json rec;
  rec["input"] = o.input;
  rec["n"] = el.graph.num_nodes();
  rec["k"] = k;
  rec["objective"] = std::string(to_string(fit.objective));
  rec["method"] = o.exact ? "exact" : "greedy";
  rec["objective_value"] = fit.objective_value;
  rec["sweeps"] = fit.sweeps_used;
  rec["moves"] = fit.moves;
  rec["restarts"] = o.exact ? 0 : o.restarts;
  rec["restart_index"] = fit.restart_index;
  rec["alpha"] = o.alpha;
  rec["seed"] = o.seed;
  rec["feasible"] = fit.feasible;
  const std::string line = rec.dump();
  std::cout << line << '\n';
  if (!o.meta.empty()) {
    std::ofstream meta(o.meta, std::ios::app);
    if (!meta) throw std::runtime_error("cannot open '" + o.meta + "' for appending");
    meta << line << '\n';
  }
  return kExitOk;
}

struct EvalOpts {
  std::string truth;
  std::string estimate;
};

int run_eval(const EvalOpts& o) {
  auto a = io::read_labeling(o.truth);
  auto b = io::read_labeling(o.estimate);
  const std::size_t k = std::max(a.k(), b.k());
  a = Labeling(std::vector<Label>(a.labels().begin(), a.labels().end()), k);
  b = Labeling(std::vector<Label>(b.labels().begin(), b.labels().end()), k);
  json rec;
  rec["n"] = a.size();
  rec["nmi"] = nmi(a, b);
  rec["misclassified"] = misclassification(a, b);
  rec["hamming_fraction"] = misclassification_l1(a, b);
  std::cout << rec.dump() << '\n';
  return kExitOk;
}

struct ConstantOpts {
  std::string params;
  std::size_t k = 2;
  double s1 = 0.0;
  double s2 = 0.0;
};

int run_constant(const ConstantOpts& o) {
  SbmParams p;
  if (!o.params.empty()) {
    const auto spec = io::read_params(o.params);
    p.pi = spec.pi;
    p.shape = spec.shape;
  } else {
    p = SbmParams::balanced(o.k, o.s1, o.s2, 1.0);
  }
  for (const auto& w : p.warnings()) std::cerr << "warning: " << w << '\n';
  const auto c = ch_constant(p);
  const std::size_t k = p.k();
  std::cout << "C(pi,S) = " << fmt12(c.value) << '\n'
            << "argmax t = " << fmt12(c.argmax_t) << '\n'
            << "argmin pair = (" << c.argmin_pair.first + 1 << ", " << c.argmin_pair.second + 1 << ")\n"
            << "ML exact recovery at rho = log n/n (C >= 1): " << (c.ml_threshold_met() ? "yes" : "no") << '\n'
            << "ICL exact recovery at rho = log n/n (C >= 1 + k^2 = " << 1 + k * k
            << "): " << (c.icl_threshold_met(k) ? "yes" : "no") << '\n';
  return kExitOk;
}

struct SweepOpts {
  SweepConfig cfg;
  std::vector<double> grid;
  std::size_t points = 9;
  double separation = kSparsitySweepSeparation;
  std::string out;
  std::string summary;
  std::string plot;
  std::string keep_labelings;
};

void emit_sweep(const SweepOpts& o, const SweepResult& res, const std::string& x_name,
                const std::string& title, std::optional<double> marker) {
  with_output(o.out, [&](std::ostream& out) { write_csv(out, res.rows); });
  if (!o.summary.empty()) with_output(o.summary, [&](std::ostream& out) { write_summary(out, res, x_name); });
  else write_summary(std::cerr, res, x_name);
  if (!o.plot.empty())
    with_output(o.plot, [&](std::ostream& out) { write_svg_plot(out, res.summary, x_name, title, marker); });
  if (!o.keep_labelings.empty())
    with_output(o.keep_labelings, [&](std::ostream& out) {
      for (std::size_t i = 0; i < res.rows.size(); ++i) {
        json rec;
        rec["row"] = i;
        rec["objective"] = std::string(to_string(res.rows[i].objective));
        rec["replicate_seed"] = res.rows[i].replicate_seed;
        rec["truth"] = res.rows[i].truth;
        rec["estimate"] = res.rows[i].estimate;
        out << rec.dump() << '\n';
      }
    });
}

int run_sweep_separation(SweepOpts o) {
  o.cfg.keep_labelings = !o.keep_labelings.empty();
  const auto grid = o.grid.empty() ? default_separation_grid(o.cfg.k, o.points) : o.grid;
  const auto res = sweep_separation(grid, o.cfg);
  emit_sweep(o, res, "separation", "NMI vs (sqrt(s1)-sqrt(s2))^2, n=" + std::to_string(o.cfg.n) +
                                       ", k=" + std::to_string(o.cfg.k),
             static_cast<double>(o.cfg.k));
  return kExitOk;
}

int run_sweep_sparsity(SweepOpts o) {
  o.cfg.keep_labelings = !o.keep_labelings.empty();
  const auto grid = o.grid.empty() ? default_sparsity_grid(o.cfg.n, o.points) : o.grid;
  const auto res = sweep_sparsity(grid, o.cfg, o.separation);
  const double nd = static_cast<double>(o.cfg.n);
  emit_sweep(o, res, "rho", "NMI vs rho, n=" + std::to_string(o.cfg.n) + ", separation=" + fmt12(o.separation),
             std::log(nd) / nd);
  return kExitOk;
}

struct ConcentrationOpts {
  std::string params;
  std::vector<std::size_t> ns{100, 200, 400};
  std::size_t reps = 200;
  double delta = 4.0;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string out;
};

/// Balanced two-community model at separation 2.10 with rho = log n / n.
io::ParamsSpec default_concentration_params() {
  io::ParamsSpec spec;
  spec.pi = {0.5, 0.5};
  const double s1 = s1_for_separation(kSparsitySweepSeparation, 1.0);
  spec.shape = Matrix<double>{{s1, 1.0}, {1.0, s1}};
  spec.rho_mode = RhoMode::kLogNOverN;
  return spec;
}

int run_concentration(const ConcentrationOpts& o) {
  const auto spec = o.params.empty() ? default_concentration_params() : io::read_params(o.params);
  bool w_ok = true;
  with_output(o.out, [&](std::ostream& out) {
    out << kConcentrationCsvHeader << '\n';
    for (std::size_t i = 0; i < o.ns.size(); ++i) {
      const auto rep = concentration_experiment(spec.resolve(o.ns[i]), o.ns[i], o.reps, o.delta,
                                                derive_seed(o.seed, i), o.threads);
      write_csv_row(out, rep);
      w_ok = w_ok && rep.w_nonzero == 0;
    }
  });
  return w_ok ? kExitOk : kExitPropertyFailure;
}

struct VerifyCliOpts {
  std::uint64_t seed = 1;
  std::string out;
  bool corrupt_tau = false;
};

int run_verify(const VerifyCliOpts& o) {
  VerifyOptions vo;
  vo.corrupt_tau = o.corrupt_tau;
  const auto rep = verify_all(o.seed, vo);
  with_output(o.out, [&](std::ostream& out) { write_report(out, rep); });
  return rep.ok() ? kExitOk : kExitPropertyFailure;
}

void add_sweep_options(CLI::App* cmd, SweepOpts& o, const std::string& grid_name,
                       const std::string& grid_help) {
  cmd->add_option("--n", o.cfg.n, "Number of nodes")->capture_default_str();
  cmd->add_option("--k", o.cfg.k, "Number of communities")->capture_default_str();
  cmd->add_option("--reps", o.cfg.reps, "Replicates per grid point")->capture_default_str();
  cmd->add_option("--seed", o.cfg.base_seed, "Base seed")->capture_default_str();
  cmd->add_option("--s2", o.cfg.s2, "Between-community shape value s2")->capture_default_str();
  cmd->add_option("--alpha", o.cfg.alpha, "Minimum community fraction")->capture_default_str();
  cmd->add_option("--restarts", o.cfg.restarts, "Greedy restarts per fit")->capture_default_str();
  cmd->add_option("--max-sweeps", o.cfg.max_sweeps, "Sweep cap per restart")->capture_default_str();
  cmd->add_option("--threads", o.cfg.threads, "Worker threads for replicates")->capture_default_str();
  cmd->add_option(grid_name, o.grid, grid_help)->delimiter(',');
  cmd->add_option("--points", o.points, "Grid size when no explicit grid is given")->capture_default_str();
  cmd->add_option("--out", o.out, "CSV output path (default stdout)");
  cmd->add_option("--summary", o.summary, "Summary output path (default stderr)");
  cmd->add_option("--plot", o.plot, "SVG plot output path");
  cmd->add_option("--keep-labelings", o.keep_labelings, "JSON-lines file with truth/estimate per row");
  cmd->add_flag("--record-timing", o.cfg.record_timing, "Fill runtime_ms (makes output nondeterministic)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-likelihood and ICL community detection for the stochastic block model"};
  app.set_config("--config", "", "Key-value config file (key = value, [subcommand] sections)");
  app.require_subcommand(1);

  SampleOpts sample_o;
  auto* sample_cmd = app.add_subcommand("sample", "Sample (labels, graph) from an SBM params file");
  sample_cmd->add_option("--params", sample_o.params, "Params file")->required()->check(CLI::ExistingFile);
  sample_cmd->add_option("--n", sample_o.n, "Number of nodes")->required()->check(CLI::Range(2, 1 << 30));
  sample_cmd->add_option("--seed", sample_o.seed, "Seed")->capture_default_str();
  sample_cmd->add_option("--graph", sample_o.graph_out, "Edge list output (default stdout)");
  sample_cmd->add_option("--labels", sample_o.labels_out, "Planted labeling output");

  FitOpts fit_o;
  auto* fit_cmd = app.add_subcommand("fit", "Estimate communities by maximizing Q_ML or Q_ICL");
  fit_cmd->add_option("input", fit_o.input, "Edge list")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--objective", fit_o.objective, "ml or icl")
      ->check(CLI::IsMember({"ml", "icl"}))
      ->capture_default_str();
  fit_cmd->add_option("--k", fit_o.k, "Number of communities (default: edge list header)");
  fit_cmd->add_option("--alpha", fit_o.alpha, "Minimum community fraction")->capture_default_str();
  fit_cmd->add_option("--restarts", fit_o.restarts, "Greedy restarts")->capture_default_str();
  fit_cmd->add_option("--max-sweeps", fit_o.max_sweeps, "Sweep cap per restart")->capture_default_str();
  fit_cmd->add_option("--seed", fit_o.seed, "Seed")->capture_default_str();
  fit_cmd->add_flag("--exact", fit_o.exact, "Exhaustive enumeration (k^n <= 2e7)");
  fit_cmd->add_option("--out", fit_o.out, "Labeling output path");
  fit_cmd->add_option("--meta", fit_o.meta, "Append the JSON metadata record to this file");

  EvalOpts eval_o;
  auto* eval_cmd = app.add_subcommand("eval", "NMI and misclassification between two labelings");
  eval_cmd->add_option("truth", eval_o.truth, "Reference labeling")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("estimate", eval_o.estimate, "Estimated labeling")->required()->check(CLI::ExistingFile);

  ConstantOpts const_o;
  auto* const_cmd = app.add_subcommand("constant", "Chernoff-Hellinger constant C(pi,S) and threshold verdicts");
  auto* params_opt = const_cmd->add_option("--params", const_o.params, "Params file")->check(CLI::ExistingFile);
  const_cmd->add_option("--k", const_o.k, "Balanced model: communities")->excludes(params_opt);
  auto* s1_opt = const_cmd->add_option("--s1", const_o.s1, "Balanced model: within shape")->excludes(params_opt);
  auto* s2_opt = const_cmd->add_option("--s2", const_o.s2, "Balanced model: between shape")->excludes(params_opt);
  s1_opt->needs(s2_opt);
  s2_opt->needs(s1_opt);

  SweepOpts sep_o;
  auto* sep_cmd = app.add_subcommand("sweep-separation", "Mean NMI against (sqrt(s1)-sqrt(s2))^2 at rho = log n/n");
  add_sweep_options(sep_cmd, sep_o, "--seps", "Comma-separated separation grid (default 0..2k, 9 points)");

  SweepOpts spa_o;
  auto* spa_cmd = app.add_subcommand("sweep-sparsity", "Mean NMI against rho at fixed separation");
  add_sweep_options(spa_cmd, spa_o, "--rhos", "Comma-separated rho grid (default 1/n..log n/n, 9 points)");
  spa_cmd->add_option("--separation", spa_o.separation, "Fixed (sqrt(s1)-sqrt(s2))^2")->capture_default_str();

  ConcentrationOpts conc_o;
  auto* conc_cmd = app.add_subcommand("concentration", "Block-frequency concentration diagnostic");
  conc_cmd->add_option("--params", conc_o.params, "Params file (default: balanced k=2, separation 2.10, rho=log n/n)")
      ->check(CLI::ExistingFile);
  conc_cmd->add_option("--n", conc_o.ns, "Comma-separated node counts")->delimiter(',');
  conc_cmd->add_option("--reps", conc_o.reps, "Replicates per n (at least 100)")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{100}, std::numeric_limits<std::size_t>::max()));
  conc_cmd->add_option("--delta", conc_o.delta, "Radius parameter delta")->capture_default_str();
  conc_cmd->add_option("--seed", conc_o.seed, "Base seed")->capture_default_str();
  conc_cmd->add_option("--threads", conc_o.threads, "Worker threads")->capture_default_str();
  conc_cmd->add_option("--out", conc_o.out, "CSV output path (default stdout)");

  VerifyCliOpts ver_o;
  auto* ver_cmd = app.add_subcommand("verify", "Run the property and oracle suite");
  ver_cmd->add_option("--seed", ver_o.seed, "Seed")->capture_default_str();
  ver_cmd->add_option("--out", ver_o.out, "Report path (default stdout)");
  ver_cmd->add_flag("--corrupt-tau", ver_o.corrupt_tau, "Mutation fixture: perturb tau in the gap check")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sample_cmd) return run_sample(sample_o);
    if (*fit_cmd) return run_fit(fit_o);
    if (*eval_cmd) return run_eval(eval_o);
    if (*const_cmd) {
      if (const_o.params.empty() && s1_opt->count() == 0)
        throw CLI::ValidationError("constant", "give --params or --s1/--s2");
      return run_constant(const_o);
    }
    if (*sep_cmd) return run_sweep_separation(sep_o);
    if (*spa_cmd) return run_sweep_sparsity(spa_o);
    if (*conc_cmd) return run_concentration(conc_o);
    if (*ver_cmd) return run_verify(ver_o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
