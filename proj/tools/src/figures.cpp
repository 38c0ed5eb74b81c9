#include "figures.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ruinalloc/allocation_engine.hpp"
#include "ruinalloc/errors.hpp"
#include "ruinalloc/model.hpp"
#include "ruinalloc/ruin_engine.hpp"
#include "util.hpp"

namespace ruinalloc::cli {

namespace {

// Worked example models; all figure columns are closed-form, so the files are
// reproducible bit-exactly.

RiskModel brownian_example(double sign) {
  BrownianModel bm;
  bm.drift = sign * Eigen::Vector2d(-2.0, -1.0);
  bm.cov.resize(2, 2);
  bm.cov << 1.0, 0.5, 0.5, 1.0;
  return bm;
}

RiskModel cp_example(double r1, double r2, double beta1, double beta2) {
  CompoundPoissonExpModel cp;
  cp.premium = Eigen::Vector2d(r1, r2);
  cp.intensity = Eigen::Vector2d(beta1, beta2);
  cp.claim_rate = 1.0;
  return cp;
}

std::ofstream open_csv(const std::filesystem::path& dir,
                       const std::string& name) {
  std::ofstream os(dir / name);
  if (!os) {
    throw ValidationError("cannot open output file: " + (dir / name).string());
  }
  return os;
}

// First-component fractions under both conditional rules; a cell is empty
// when its conditioning event has numerically vanishing probability. The two
// rules fail independently, so each cell gets its own guard.
struct FractionPair {
  std::optional<double> c1;
  std::optional<double> cbar1;
};

FractionPair fraction_pair(const RiskModel& model, double u, const Horizon& h) {
  FractionPair fp;
  try {
    fp.c1 = allocate_time_of_ruin(model, u, h).fractions[0];
  } catch (const InfeasibleCondition&) {
  }
  try {
    fp.cbar1 = allocate_sup_location(model, u, h).fractions[0];
  } catch (const InfeasibleCondition&) {
  }
  return fp;
}

std::string cell(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

void brownian_var_fractions_vs_horizon(const std::filesystem::path& dir) {
  const RiskModel model = brownian_example(1.0);
  auto os = open_csv(dir, "brownian_var_fractions_vs_horizon.csv");
  write_preamble(os, "figures brownian_var_fractions_vs_horizon", &model);
  os << "# first-component allocation fractions at u = VaR_alpha(T), "
        "against the horizon\n";
  os << "T,alpha,var,c1,cbar1\n";
  const std::vector<double> alphas{0.001, 0.01, 0.1, 0.3};
  for (double T : logspace(-2.0, 2.0, 60)) {
    const Horizon h = Horizon::finite(T);
    for (double alpha : alphas) {
      const double var = dynamic_var(model, alpha, h);
      const FractionPair fp = fraction_pair(model, var, h);
      os << fmt(T) << ',' << fmt(alpha) << ',' << fmt(var) << ','
         << cell(fp.c1) << ',' << cell(fp.cbar1) << '\n';
    }
  }
}

void brownian_fractions_vs_capital(const std::filesystem::path& dir) {
  const RiskModel model = brownian_example(1.0);
  auto os = open_csv(dir, "brownian_fractions_vs_capital.csv");
  write_preamble(os, "figures brownian_fractions_vs_capital", &model);
  os << "# first-component allocation fractions against the capital level\n";
  os << "u,T,c1,cbar1\n";
  const std::vector<double> horizons{0.5, 1.0, 5.0};
  for (double u : linspace(0.1, 30.0, 60)) {
    for (double T : horizons) {
      const FractionPair fp = fraction_pair(model, u, Horizon::finite(T));
      os << fmt(u) << ',' << fmt(T) << ',' << cell(fp.c1) << ','
         << cell(fp.cbar1) << '\n';
    }
  }
}

void brownian_positive_drift_fractions(const std::filesystem::path& dir) {
  const RiskModel model = brownian_example(-1.0);  // positive drift (2, 1)
  auto os = open_csv(dir, "brownian_positive_drift_fractions.csv");
  write_preamble(os, "figures brownian_positive_drift_fractions", &model);
  os << "# positive-drift variant: fractions against the horizon; empty "
        "cells where the conditioning probability underflows\n";
  os << "T,u,c1,cbar1\n";
  const std::vector<double> levels{1.0, 5.0, 10.0};
  for (double T : logspace(-2.0, 2.0, 60)) {
    for (double u : levels) {
      const FractionPair fp = fraction_pair(model, u, Horizon::finite(T));
      os << fmt(T) << ',' << fmt(u) << ',' << cell(fp.c1) << ','
         << cell(fp.cbar1) << '\n';
    }
  }
}

void alpha_figure(const std::filesystem::path& dir, const char* stem,
                  const RiskModel& model) {
  auto os = open_csv(dir, std::string(stem) + ".csv");
  write_preamble(os, std::string("figures ") + stem, &model);
  os << "# first-component fractions of the infinite-horizon dynamic VaR\n";
  os << "alpha,var,frac_gradient,frac_time_of_ruin,frac_sup_location\n";
  for (double alpha : logspace(-3.0, -0.3, 40)) {
    const double var = dynamic_var(model, alpha, Horizon::infinite());
    const double g = allocate_gradient(model, alpha, Horizon::infinite()).fractions[0];
    const double c1 =
        allocate_time_of_ruin(model, var, Horizon::infinite()).fractions[0];
    const double cbar1 =
        allocate_sup_location(model, var, Horizon::infinite()).fractions[0];
    os << fmt(alpha) << ',' << fmt(var) << ',' << fmt(g) << ',' << fmt(c1)
       << ',' << fmt(cbar1) << '\n';
  }
}

void cp_fractions_vs_capital(const std::filesystem::path& dir) {
  const RiskModel model = cp_example(1.0, 1.0, 0.85, 0.95);
  auto os = open_csv(dir, "cp_fractions_vs_capital.csv");
  write_preamble(os, "figures cp_fractions_vs_capital", &model);
  os << "# infinite-horizon fractions against the capital level\n";
  os << "u,c1,cbar1\n";
  for (double u : linspace(0.1, 30.0, 60)) {
    const double c1 =
        allocate_time_of_ruin(model, u, Horizon::infinite()).fractions[0];
    const double cbar1 =
        allocate_sup_location(model, u, Horizon::infinite()).fractions[0];
    os << fmt(u) << ',' << fmt(c1) << ',' << fmt(cbar1) << '\n';
  }
}

}  // namespace

int figures_command(const std::string& out_dir, std::ostream& err) {
  const std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "error: validation: cannot create output directory: " << dir
        << "\n";
    return 1;
  }
  brownian_var_fractions_vs_horizon(dir);
  brownian_fractions_vs_capital(dir);
  brownian_positive_drift_fractions(dir);
  alpha_figure(dir, "cp_var_fractions_vs_alpha",
               cp_example(1.0, 1.0, 0.85, 0.95));
  cp_fractions_vs_capital(dir);
  alpha_figure(dir, "cp_var_fractions_vs_alpha_higher_premium",
               cp_example(1.5, 1.5, 0.85, 0.95));
  alpha_figure(dir, "cp_var_fractions_vs_alpha_skewed_intensity",
               cp_example(1.0, 1.0, 0.8, 1.0));
  return 0;
}

}  // namespace ruinalloc::cli
