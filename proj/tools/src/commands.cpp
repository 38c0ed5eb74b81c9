#include "ruinalloc_cli/commands.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "figures.hpp"
#include "ruinalloc/allocation_engine.hpp"
#include "ruinalloc/errors.hpp"
#include "ruinalloc/model_json.hpp"
#include "ruinalloc/ruin_engine.hpp"
#include "util.hpp"
#include "verify.hpp"

namespace ruinalloc::cli {

namespace {

RiskModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json_text(ss.str());
}

Horizon parse_horizon(const std::string& text) {
  if (text == "inf" || text == "infinite" || text == "infinity") {
    return Horizon::infinite();
  }
  try {
    std::size_t pos = 0;
    const double t = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return Horizon::finite(t);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("horizon must be 'inf' or a positive number, got '" +
                          text + "'");
  }
}

// Output goes to --out when given, otherwise to the tool's standard output.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw ValidationError("cannot open output file: " + path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

struct SimFlags {
  std::uint64_t paths = SimConfig{}.paths;
  std::uint64_t seed = SimConfig{}.seed;
  int steps = SimConfig{}.steps_per_unit_time;
  int workers = 0;
  double bandwidth = 0.0;
  bool no_bridge = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--paths", paths, "Monte Carlo path count");
    cmd->add_option("--seed", seed, "Monte Carlo seed");
    cmd->add_option("--steps", steps, "Brownian grid steps per unit time");
    cmd->add_option("--workers", workers, "worker threads (0 = hardware)");
    cmd->add_option("--bandwidth", bandwidth,
                    "conditioning window half-width (0 = 0.05*u)");
    cmd->add_flag("--no-bridge", no_bridge,
                  "disable the Brownian bridge crossing correction");
  }

  SimConfig config() const {
    SimConfig cfg;
    cfg.paths = paths;
    cfg.seed = seed;
    cfg.steps_per_unit_time = steps;
    cfg.workers = workers;
    cfg.bandwidth = bandwidth;
    cfg.bridge_correction = !no_bridge;
    return cfg;
  }
};

void write_ruin_csv(std::ostream& os, const RiskModel& model, double u,
                    const Horizon& h, const RuinResult& res,
                    const SimConfig& cfg) {
  write_preamble(os, "ruin", &model);
  const bool mc = res.method == RuinMethod::monte_carlo;
  if (mc) os << "# seed: " << cfg.seed << "\n";
  os << "u,horizon,probability,method,std_error,paths\n";
  os << fmt(u) << ',' << h.str() << ',' << fmt(res.probability) << ','
     << to_string(res.method) << ',' << (mc ? fmt(res.std_error) : "") << ','
     << (mc ? std::to_string(res.paths) : "") << '\n';
}

int cmd_ruin(const std::string& model_path, double u, const std::string& horizon,
             bool force_mc, const SimFlags& sim, const std::string& out_path,
             std::ostream& out) {
  const RiskModel model = load_model(model_path);
  const Horizon h = parse_horizon(horizon);
  const SimConfig cfg = sim.config();
  RuinResult res;
  if (force_mc) {
    if (!h.is_finite()) {
      throw ValidationError("--mc requires a finite --horizon");
    }
    const SimEstimate est = simulate_ruin_prob(model, u, h.time(), cfg);
    res = {est.value, RuinMethod::monte_carlo, est.std_error, cfg.paths};
  } else {
    res = ruin_prob(model, {u, h}, cfg);
  }
  Sink sink(out_path, out);
  write_ruin_csv(sink.stream(), model, u, h, res, cfg);
  return 0;
}

int cmd_var(const std::string& model_path, double alpha,
            const std::string& horizon, const std::string& out_path,
            std::ostream& out) {
  const RiskModel model = load_model(model_path);
  const Horizon h = parse_horizon(horizon);
  const double var = dynamic_var(model, alpha, h);
  Sink sink(out_path, out);
  write_preamble(sink.stream(), "var", &model);
  sink.stream() << "alpha,horizon,var\n"
                << fmt(alpha) << ',' << h.str() << ',' << fmt(var) << '\n';
  return 0;
}

int cmd_allocate(const std::string& model_path, const std::string& method,
                 std::optional<double> u, std::optional<double> alpha,
                 const std::string& horizon, const SimFlags& sim,
                 const std::string& out_path, std::ostream& out) {
  const RiskModel model = load_model(model_path);
  const Horizon h = parse_horizon(horizon);
  const SimConfig cfg = sim.config();

  AllocationReport rep;
  if (method == "k") {
    if (!u) throw ValidationError("--method k requires --u");
    rep = allocate_time_of_ruin(model, *u, h, cfg);
  } else if (method == "kbar") {
    if (!u) throw ValidationError("--method kbar requires --u");
    rep = allocate_sup_location(model, *u, h, cfg);
  } else if (method == "gvar") {
    if (!alpha) throw ValidationError("--method gvar requires --alpha");
    rep = allocate_gradient(model, *alpha, h);
  } else if (method == "asymptotic") {
    rep = allocate_asymptotic(model, u);
  } else {
    throw ValidationError("--method must be one of k, kbar, gvar, asymptotic");
  }

  Sink sink(out_path, out);
  std::ostream& os = sink.stream();
  write_preamble(os, "allocate", &model);
  os << "# method: " << to_string(rep.method) << "\n";
  os << "# backend: " << to_string(rep.backend) << "\n";
  os << "# horizon: " << rep.horizon.str() << "\n";
  if (rep.u > 0.0) os << "# u: " << fmt(rep.u) << "\n";
  if (rep.backend == Backend::monte_carlo) {
    os << "# seed: " << cfg.seed << "\n# paths: " << cfg.paths << "\n";
  }
  const auto& d = rep.diagnostics;
  if (d.expected_ruin_time) {
    os << "# expected_ruin_time: " << fmt(*d.expected_ruin_time) << "\n";
  }
  if (d.expected_argmax_time) {
    os << "# expected_argmax_time: " << fmt(*d.expected_argmax_time) << "\n";
  }
  if (d.var) os << "# var: " << fmt(*d.var) << "\n";
  for (const auto& note : d.notes) os << "# note: " << note << "\n";

  os << "component,fraction,amount\n";
  for (Eigen::Index i = 0; i < rep.fractions.size(); ++i) {
    os << (i + 1) << ',' << fmt(rep.fractions[i]) << ','
       << (rep.amounts.size() ? fmt(rep.amounts[i]) : "") << '\n';
  }
  return 0;
}

int cmd_sweep(const std::string& model_path, const std::string& quantity,
              const std::string& vary, double from, double to, int points,
              bool log_grid, std::optional<double> u,
              std::optional<double> alpha, const std::string& horizon,
              const SimFlags& sim, const std::string& out_path,
              std::ostream& out) {
  const RiskModel model = load_model(model_path);
  const SimConfig cfg = sim.config();
  if (points < 1) throw ValidationError("--points must be at least 1");
  if (log_grid && !(from > 0.0 && to > 0.0)) {
    throw ValidationError("--log requires positive --from/--to");
  }
  const std::vector<double> grid =
      log_grid ? logspace(std::log10(from), std::log10(to), points)
               : linspace(from, to, points);

  const bool vary_u = vary == "u";
  const bool vary_T = vary == "horizon";
  const bool vary_alpha = vary == "alpha";
  if (!vary_u && !vary_T && !vary_alpha) {
    throw ValidationError("--vary must be one of u, horizon, alpha");
  }

  Sink sink(out_path, out);
  std::ostream& os = sink.stream();
  write_preamble(os, "sweep " + quantity + " over " + vary, &model);
  os << "# seed: " << cfg.seed << "\n";

  const int d = dimension(model);
  const auto horizon_at = [&](double x) {
    return vary_T ? Horizon::finite(x) : parse_horizon(horizon);
  };

  if (quantity == "ruin") {
    if (vary_alpha) throw ValidationError("quantity 'ruin' cannot vary alpha");
    if (vary_T && !u) throw ValidationError("varying horizon requires --u");
    os << "u,horizon,probability\n";
    for (double x : grid) {
      const double uu = vary_u ? x : *u;
      const Horizon h = horizon_at(x);
      const RuinResult res = ruin_prob(model, {uu, h}, cfg);
      os << fmt(uu) << ',' << h.str() << ',' << fmt(res.probability) << '\n';
    }
  } else if (quantity == "var") {
    if (vary_u) throw ValidationError("quantity 'var' cannot vary u");
    if (vary_T && !alpha) throw ValidationError("varying horizon requires --alpha");
    os << "alpha,horizon,var\n";
    for (double x : grid) {
      const double a = vary_alpha ? x : *alpha;
      const Horizon h = horizon_at(x);
      os << fmt(a) << ',' << h.str() << ',' << fmt(dynamic_var(model, a, h))
         << '\n';
    }
  } else if (quantity == "k" || quantity == "kbar") {
    if (vary_alpha) throw ValidationError("quantity '" + quantity +
                                          "' cannot vary alpha");
    if (vary_T && !u) throw ValidationError("varying horizon requires --u");
    os << "u,horizon";
    for (int i = 1; i <= d; ++i) os << ",c" << i;
    os << '\n';
    for (double x : grid) {
      const double uu = vary_u ? x : *u;
      const Horizon h = horizon_at(x);
      const AllocationReport rep = quantity == "k"
                                       ? allocate_time_of_ruin(model, uu, h, cfg)
                                       : allocate_sup_location(model, uu, h, cfg);
      os << fmt(uu) << ',' << h.str();
      for (Eigen::Index i = 0; i < rep.fractions.size(); ++i) {
        os << ',' << fmt(rep.fractions[i]);
      }
      os << '\n';
    }
  } else {
    throw ValidationError("--quantity must be one of ruin, var, k, kbar");
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"ruin-based capital allocation toolkit"};
  app.require_subcommand(1);

  // ruin ------------------------------------------------------------------
  auto* ruin = app.add_subcommand("ruin", "ruin probability psi(u, T)");
  std::string ruin_model, ruin_horizon = "inf", ruin_out;
  double ruin_u = 0.0;
  bool ruin_mc = false;
  SimFlags ruin_sim;
  ruin->add_option("--model", ruin_model, "model JSON file")->required();
  ruin->add_option("--u", ruin_u, "capital level")->required();
  ruin->add_option("--horizon", ruin_horizon, "'inf' or a time horizon T");
  ruin->add_flag("--mc", ruin_mc,
                 "force the Monte Carlo estimator even when a closed form "
                 "exists (finite horizon only)");
  ruin->add_option("--out", ruin_out, "output CSV path (default: stdout)");
  ruin_sim.attach(ruin);

  // var -------------------------------------------------------------------
  auto* var = app.add_subcommand("var", "dynamic value-at-risk");
  std::string var_model, var_horizon = "inf", var_out;
  double var_alpha = 0.0;
  var->add_option("--model", var_model, "model JSON file")->required();
  var->add_option("--alpha", var_alpha, "ruin probability target in (0,1)")
      ->required();
  var->add_option("--horizon", var_horizon, "'inf' or a time horizon T");
  var->add_option("--out", var_out, "output CSV path (default: stdout)");

  // allocate ----------------------------------------------------------------
  auto* alloc = app.add_subcommand("allocate", "capital allocation");
  std::string alloc_model, alloc_method, alloc_horizon = "inf", alloc_out;
  double alloc_u_val = 0.0, alloc_alpha_val = 0.0;
  SimFlags alloc_sim;
  alloc->add_option("--model", alloc_model, "model JSON file")->required();
  alloc
      ->add_option("--method", alloc_method,
                   "allocation rule: k (time of ruin), kbar (supremum "
                   "location), gvar (gradient), asymptotic")
      ->required();
  auto* alloc_u_opt = alloc->add_option("--u", alloc_u_val, "capital level");
  auto* alloc_alpha_opt =
      alloc->add_option("--alpha", alloc_alpha_val, "VaR level for gvar");
  alloc->add_option("--horizon", alloc_horizon, "'inf' or a time horizon T");
  alloc->add_option("--out", alloc_out, "output CSV path (default: stdout)");
  alloc_sim.attach(alloc);

  // sweep -------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "evaluate a quantity over a grid");
  std::string sweep_model, sweep_quantity, sweep_vary, sweep_horizon = "inf",
                           sweep_out;
  double sweep_from = 0.0, sweep_to = 0.0;
  double sweep_u_val = 0.0, sweep_alpha_val = 0.0;
  int sweep_points = 0;
  bool sweep_log = false;
  SimFlags sweep_sim;
  sweep->add_option("--model", sweep_model, "model JSON file")->required();
  sweep
      ->add_option("--quantity", sweep_quantity,
                   "what to compute: ruin, var, k, kbar")
      ->required();
  sweep->add_option("--vary", sweep_vary, "grid variable: u, horizon, alpha")
      ->required();
  sweep->add_option("--from", sweep_from, "grid start")->required();
  sweep->add_option("--to", sweep_to, "grid end")->required();
  sweep->add_option("--points", sweep_points, "grid size")->required();
  sweep->add_flag("--log", sweep_log, "logarithmic grid spacing");
  auto* sweep_u_opt = sweep->add_option("--u", sweep_u_val, "fixed capital");
  auto* sweep_alpha_opt =
      sweep->add_option("--alpha", sweep_alpha_val, "fixed VaR level");
  sweep->add_option("--horizon", sweep_horizon, "fixed horizon");
  sweep->add_option("--out", sweep_out, "output CSV path (default: stdout)");
  sweep_sim.attach(sweep);

  // figures -----------------------------------------------------------------
  auto* figures = app.add_subcommand(
      "figures", "emit the worked-example figure data as CSV files");
  std::string fig_dir = ".";
  figures->add_option("--out-dir", fig_dir, "output directory (default: .)");

  // verify ------------------------------------------------------------------
  auto* verify =
      app.add_subcommand("verify", "run the oracle cross-check suite");
  std::uint64_t verify_paths = 100000;
  verify->add_option("--paths", verify_paths,
                     "Monte Carlo paths for the sampling checks");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("ruinalloc");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    // CLI11 returns 0 for --help/--version; anything else is a usage error.
    return code == 0 ? 0 : 1;
  }

  try {
    if (ruin->parsed()) {
      return cmd_ruin(ruin_model, ruin_u, ruin_horizon, ruin_mc, ruin_sim,
                      ruin_out, out);
    }
    if (var->parsed()) {
      return cmd_var(var_model, var_alpha, var_horizon, var_out, out);
    }
    if (alloc->parsed()) {
      return cmd_allocate(
          alloc_model, alloc_method,
          alloc_u_opt->count() ? std::optional<double>(alloc_u_val) : std::nullopt,
          alloc_alpha_opt->count() ? std::optional<double>(alloc_alpha_val)
                                   : std::nullopt,
          alloc_horizon, alloc_sim, alloc_out, out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(
          sweep_model, sweep_quantity, sweep_vary, sweep_from, sweep_to,
          sweep_points, sweep_log,
          sweep_u_opt->count() ? std::optional<double>(sweep_u_val) : std::nullopt,
          sweep_alpha_opt->count() ? std::optional<double>(sweep_alpha_val)
                                   : std::nullopt,
          sweep_horizon, sweep_sim, sweep_out, out);
    }
    if (figures->parsed()) {
      return figures_command(fig_dir, err);
    }
    if (verify->parsed()) {
      return verify_command(verify_paths, out);
    }
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "error: validation: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    // Numerical / model-regime failures: NoCramerRoot, InfeasibleCondition,
    // UndefinedAllocation, NotSupported, ZeroRuinedPaths, ...
    err << "error: numerical: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace ruinalloc::cli
