#include "ruinalloc/simulator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "parallel.hpp"
#include "philox.hpp"
#include "ruinalloc/errors.hpp"
#include "ruinalloc/levy_analytics.hpp"

namespace ruinalloc {

namespace {

using detail::PathRng;
using detail::pairwise_reduce;
using detail::run_blocks;

// Skip the bridge acceptance draw when the crossing probability is below
// exp(-45) ~ 2.9e-20; no estimator at feasible path counts can see it.
constexpr double kBridgeExponentCutoff = 45.0;

void require_config(const SimConfig& cfg) {
  if (cfg.paths == 0) throw ValidationError("paths must be positive");
  if (cfg.steps_per_unit_time < 1) {
    throw ValidationError("steps_per_unit_time must be at least 1");
  }
  if (!(cfg.bandwidth >= 0.0) || !std::isfinite(cfg.bandwidth)) {
    throw ValidationError("bandwidth must be finite and nonnegative");
  }
  if (cfg.workers < 0) throw ValidationError("workers must be nonnegative");
}

void require_horizon(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ValidationError("simulation horizon must be positive and finite");
  }
}

void require_positive_capital(double u) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw ValidationError("simulation requires a positive finite barrier u");
  }
}

// ---------------------------------------------------------------------------
// Grid setup

struct AggregateGrid {
  std::int64_t ncells = 0;
  double dt = 0.0;
  double drift_dt = 0.0;      // aggregate drift per cell
  double sd_dt = 0.0;         // aggregate standard deviation per cell
  double bridge_coeff = 0.0;  // 2 / (sigma^2 dt)
  double s2 = 0.0;            // aggregate variance rate
};

AggregateGrid make_aggregate_grid(const BrownianModel& bm, double T,
                                  const SimConfig& cfg) {
  AggregateGrid g;
  g.ncells = static_cast<std::int64_t>(
      std::ceil(T * static_cast<double>(cfg.steps_per_unit_time)));
  g.ncells = std::max<std::int64_t>(g.ncells, 1);
  g.dt = T / static_cast<double>(g.ncells);
  const double r = bm.drift.sum();
  g.s2 = bm.cov.sum();
  g.drift_dt = r * g.dt;
  g.sd_dt = std::sqrt(g.s2 * g.dt);
  g.bridge_coeff = 2.0 / (g.s2 * g.dt);
  return g;
}

struct ComponentGrid {
  AggregateGrid agg;
  int d = 0;
  std::vector<double> drift_dt;  // per component
  std::vector<double> factor;    // row-major d x d, F F^T = Sigma dt
  std::vector<double> w;         // regression weights (Sigma 1)_i / sigma^2
};

ComponentGrid make_component_grid(const BrownianModel& bm, double T,
                                  const SimConfig& cfg) {
  ComponentGrid g;
  g.agg = make_aggregate_grid(bm, T, cfg);
  g.d = bm.dimension();
  g.drift_dt.resize(static_cast<std::size_t>(g.d));
  for (int i = 0; i < g.d; ++i) g.drift_dt[static_cast<std::size_t>(i)] = bm.drift[i] * g.agg.dt;

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bm.cov);
  const Eigen::VectorXd scale =
      (es.eigenvalues().cwiseMax(0.0) * g.agg.dt).cwiseSqrt();
  const Eigen::MatrixXd F = es.eigenvectors() * scale.asDiagonal();
  g.factor.resize(static_cast<std::size_t>(g.d) * static_cast<std::size_t>(g.d));
  for (int i = 0; i < g.d; ++i) {
    for (int j = 0; j < g.d; ++j) {
      g.factor[static_cast<std::size_t>(i * g.d + j)] = F(i, j);
    }
  }

  const Eigen::VectorXd row_sums = bm.cov.rowwise().sum();
  g.w.resize(static_cast<std::size_t>(g.d));
  for (int i = 0; i < g.d; ++i) g.w[static_cast<std::size_t>(i)] = row_sums[i] / g.agg.s2;
  return g;
}

// ---------------------------------------------------------------------------
// Accumulator blocks

struct CountBlock {
  std::uint64_t ruined = 0;
};

struct AllocBlock {
  std::uint64_t ruined = 0;
  double sum_tau = 0.0, sum_tau2 = 0.0;
  double sum_y = 0.0, sum_y2 = 0.0;
  std::vector<double> sum_x, sum_x2, sum_xy;

  AllocBlock() = default;
  explicit AllocBlock(int d)
      : sum_x(static_cast<std::size_t>(d), 0.0),
        sum_x2(static_cast<std::size_t>(d), 0.0),
        sum_xy(static_cast<std::size_t>(d), 0.0) {}

  void add_crossing(double tau, const double* x, int d, double y) {
    ++ruined;
    sum_tau += tau;
    sum_tau2 += tau * tau;
    sum_y += y;
    sum_y2 += y * y;
    for (int i = 0; i < d; ++i) {
      const auto k = static_cast<std::size_t>(i);
      sum_x[k] += x[k];
      sum_x2[k] += x[k] * x[k];
      sum_xy[k] += x[k] * y;
    }
  }
};

void combine(AllocBlock& a, const AllocBlock& b) {
  a.ruined += b.ruined;
  a.sum_tau += b.sum_tau;
  a.sum_tau2 += b.sum_tau2;
  a.sum_y += b.sum_y;
  a.sum_y2 += b.sum_y2;
  for (std::size_t i = 0; i < a.sum_x.size(); ++i) {
    a.sum_x[i] += b.sum_x[i];
    a.sum_x2[i] += b.sum_x2[i];
    a.sum_xy[i] += b.sum_xy[i];
  }
}

struct SupBlock {
  std::uint64_t window = 0;
  double sum_t = 0.0, sum_t2 = 0.0;
  std::vector<double> sum_x, sum_x2;

  SupBlock() = default;
  explicit SupBlock(int d)
      : sum_x(static_cast<std::size_t>(d), 0.0),
        sum_x2(static_cast<std::size_t>(d), 0.0) {}

  void add(double t, const double* x, int d) {
    ++window;
    sum_t += t;
    sum_t2 += t * t;
    for (int i = 0; i < d; ++i) {
      const auto k = static_cast<std::size_t>(i);
      sum_x[k] += x[k];
      sum_x2[k] += x[k] * x[k];
    }
  }
};

void combine(SupBlock& a, const SupBlock& b) {
  a.window += b.window;
  a.sum_t += b.sum_t;
  a.sum_t2 += b.sum_t2;
  for (std::size_t i = 0; i < a.sum_x.size(); ++i) {
    a.sum_x[i] += b.sum_x[i];
    a.sum_x2[i] += b.sum_x2[i];
  }
}

struct MeanBlock {
  std::vector<double> sum, sum2;

  MeanBlock() = default;
  explicit MeanBlock(int d)
      : sum(static_cast<std::size_t>(d), 0.0),
        sum2(static_cast<std::size_t>(d), 0.0) {}
};

void combine(MeanBlock& a, const MeanBlock& b) {
  for (std::size_t i = 0; i < a.sum.size(); ++i) {
    a.sum[i] += b.sum[i];
    a.sum2[i] += b.sum2[i];
  }
}

SimEstimate mean_estimate(double sum, double sum2, std::uint64_t n,
                          std::uint64_t seed) {
  SimEstimate est;
  est.n_effective = n;
  est.seed = seed;
  if (n == 0) return est;
  const double nn = static_cast<double>(n);
  est.value = sum / nn;
  const double var = std::max(0.0, sum2 / nn - est.value * est.value);
  est.std_error = std::sqrt(var / nn);
  return est;
}

// Standard error of the ratio X/Y by the delta method, from raw sums over n
// joint samples.
SimEstimate ratio_estimate(double sum_x, double sum_x2, double sum_xy,
                           double sum_y, double sum_y2, std::uint64_t n,
                           std::uint64_t seed) {
  SimEstimate est;
  est.n_effective = n;
  est.seed = seed;
  const double nn = static_cast<double>(n);
  const double mx = sum_x / nn;
  const double my = sum_y / nn;
  const double vx = std::max(0.0, sum_x2 / nn - mx * mx);
  const double vy = std::max(0.0, sum_y2 / nn - my * my);
  const double cxy = sum_xy / nn - mx * my;
  const double ratio = mx / my;
  est.value = ratio;
  const double var = std::max(0.0, vx - 2.0 * ratio * cxy + ratio * ratio * vy);
  est.std_error = std::sqrt(var / nn) / std::abs(my);
  return est;
}

// ---------------------------------------------------------------------------
// Compound Poisson helpers

struct CpSetup {
  int d = 0;
  double lambda = 0.0;
  double theta = 0.0;
  double r = 0.0;                // aggregate premium rate
  std::vector<double> premium;   // per component
  std::vector<double> cum_prob;  // cumulative claim-arrival probabilities
};

CpSetup make_cp_setup(const CompoundPoissonExpModel& cp) {
  CpSetup s;
  s.d = cp.dimension();
  s.lambda = cp.total_intensity();
  s.theta = cp.claim_rate;
  s.r = cp.premium.sum();
  s.premium.resize(static_cast<std::size_t>(s.d));
  s.cum_prob.resize(static_cast<std::size_t>(s.d));
  double acc = 0.0;
  for (int i = 0; i < s.d; ++i) {
    s.premium[static_cast<std::size_t>(i)] = cp.premium[i];
    acc += cp.intensity[i] / s.lambda;
    s.cum_prob[static_cast<std::size_t>(i)] = acc;
  }
  s.cum_prob.back() = 1.0;  // guard against rounding in the running sum
  return s;
}

int pick_component(const CpSetup& s, double unit) {
  int c = 0;
  while (c + 1 < s.d && unit >= s.cum_prob[static_cast<std::size_t>(c)]) ++c;
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ruin probability

SimEstimate simulate_ruin_prob(const RiskModel& model, double u, double T,
                               const SimConfig& cfg) {
  require_valid(model);
  require_config(cfg);
  require_horizon(T);
  if (!std::isfinite(u)) throw ValidationError("barrier u must be finite");

  if (u <= 0.0) {
    // The process starts at 0, so the barrier is hit at time zero.
    return {1.0, 0.0, cfg.paths, cfg.seed};
  }

  std::vector<CountBlock> blocks;
  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    const AggregateGrid g = make_aggregate_grid(*bm, T, cfg);
    blocks = run_blocks<CountBlock>(
        cfg.paths, cfg.workers,
        [&](std::uint64_t first, std::uint64_t count) {
          CountBlock block;
          for (std::uint64_t p = first; p < first + count; ++p) {
            PathRng rng(cfg.seed, p);
            double a = 0.0;
            for (std::int64_t k = 0; k < g.ncells; ++k) {
              const double b = a + g.drift_dt + g.sd_dt * rng.next_normal();
              if (b >= u) {
                ++block.ruined;
                break;
              }
              if (cfg.bridge_correction) {
                const double expo = g.bridge_coeff * (u - a) * (u - b);
                if (expo < kBridgeExponentCutoff &&
                    rng.next_unit_co() < std::exp(-expo)) {
                  ++block.ruined;
                  break;
                }
              }
              a = b;
            }
          }
          return block;
        });
  } else {
    const CpSetup s = make_cp_setup(std::get<CompoundPoissonExpModel>(model));
    blocks = run_blocks<CountBlock>(
        cfg.paths, cfg.workers,
        [&](std::uint64_t first, std::uint64_t count) {
          CountBlock block;
          for (std::uint64_t p = first; p < first + count; ++p) {
            PathRng rng(cfg.seed, p);
            double t = 0.0;
            double jumps = 0.0;
            for (;;) {
              t += rng.next_exponential(s.lambda);
              if (t > T) break;
              jumps += rng.next_exponential(s.theta);
              if (jumps - s.r * t >= u) {
                ++block.ruined;
                break;
              }
            }
          }
          return block;
        });
  }

  const CountBlock total = pairwise_reduce(std::move(blocks),
                                           [](CountBlock& a, const CountBlock& b) {
                                             a.ruined += b.ruined;
                                           });
  const double n = static_cast<double>(cfg.paths);
  const double p = static_cast<double>(total.ruined) / n;
  return {p, std::sqrt(std::max(0.0, p * (1.0 - p)) / n), cfg.paths, cfg.seed};
}

// ---------------------------------------------------------------------------
// Time-of-ruin allocation

RuinAllocationSim simulate_allocation_time_of_ruin(const RiskModel& model,
                                                   double u, double T,
                                                   const SimConfig& cfg) {
  require_valid(model);
  require_config(cfg);
  require_horizon(T);
  require_positive_capital(u);

  const int d = dimension(model);
  std::vector<AllocBlock> blocks;

  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    const ComponentGrid g = make_component_grid(*bm, T, cfg);
    blocks = run_blocks<AllocBlock>(
        cfg.paths, cfg.workers,
        [&](std::uint64_t first, std::uint64_t count) {
          AllocBlock block(d);
          std::vector<double> state(static_cast<std::size_t>(d));
          std::vector<double> inc(static_cast<std::size_t>(d));
          std::vector<double> z(static_cast<std::size_t>(d));
          std::vector<double> x(static_cast<std::size_t>(d));
          for (std::uint64_t p = first; p < first + count; ++p) {
            PathRng rng(cfg.seed, p);
            std::fill(state.begin(), state.end(), 0.0);
            double a = 0.0;
            for (std::int64_t k = 0; k < g.agg.ncells; ++k) {
              for (int j = 0; j < d; ++j) z[static_cast<std::size_t>(j)] = rng.next_normal();
              double binc = 0.0;
              for (int i = 0; i < d; ++i) {
                double v = g.drift_dt[static_cast<std::size_t>(i)];
                const double* row = g.factor.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(d);
                for (int j = 0; j < d; ++j) v += row[j] * z[static_cast<std::size_t>(j)];
                inc[static_cast<std::size_t>(i)] = v;
                binc += v;
              }
              const double b = a + binc;

              double f = -1.0;
              if (b >= u) {
                f = (u - a) / (b - a);
              } else if (cfg.bridge_correction) {
                const double expo = g.agg.bridge_coeff * (u - a) * (u - b);
                if (expo < kBridgeExponentCutoff &&
                    rng.next_unit_co() < std::exp(-expo)) {
                  // Apex of the tent path through (a, u, b).
                  f = (u - a) / ((u - a) + (u - b));
                }
              }
              if (f >= 0.0) {
                const double tau = (static_cast<double>(k) + f) * g.agg.dt;
                const double lift = u - a - f * binc;
                double y = 0.0;
                for (int i = 0; i < d; ++i) {
                  const auto idx = static_cast<std::size_t>(i);
                  x[idx] = state[idx] + f * inc[idx] + g.w[idx] * lift;
                  y += x[idx];
                }
                block.add_crossing(tau, x.data(), d, y);
                break;
              }
              for (int i = 0; i < d; ++i) state[static_cast<std::size_t>(i)] += inc[static_cast<std::size_t>(i)];
              a = b;
            }
          }
          return block;
        });
  } else {
    const CpSetup s = make_cp_setup(std::get<CompoundPoissonExpModel>(model));
    blocks = run_blocks<AllocBlock>(
        cfg.paths, cfg.workers,
        [&](std::uint64_t first, std::uint64_t count) {
          AllocBlock block(d);
          std::vector<double> jumps(static_cast<std::size_t>(d));
          std::vector<double> x(static_cast<std::size_t>(d));
          for (std::uint64_t p = first; p < first + count; ++p) {
            PathRng rng(cfg.seed, p);
            std::fill(jumps.begin(), jumps.end(), 0.0);
            double total_jumps = 0.0;
            double t = 0.0;
            for (;;) {
              t += rng.next_exponential(s.lambda);
              if (t > T) break;
              const int c = pick_component(s, rng.next_unit_co());
              const double j = rng.next_exponential(s.theta);
              jumps[static_cast<std::size_t>(c)] += j;
              total_jumps += j;
              const double agg = total_jumps - s.r * t;
              if (agg >= u) {
                for (int i = 0; i < d; ++i) {
                  const auto idx = static_cast<std::size_t>(i);
                  x[idx] = jumps[idx] - s.premium[idx] * t;
                }
                block.add_crossing(t, x.data(), d, agg);
                break;
              }
            }
          }
          return block;
        });
  }

  AllocBlock total = pairwise_reduce(std::move(blocks),
                                     [](AllocBlock& a, const AllocBlock& b) {
                                       combine(a, b);
                                     });
  if (total.ruined == 0) {
    throw ZeroRuinedPaths("no ruined paths at this (u, T); estimator undefined");
  }

  RuinAllocationSim out;
  const double n = static_cast<double>(total.ruined);
  out.aggregate_at_ruin = total.sum_y / n;
  out.fractions.reserve(static_cast<std::size_t>(d));
  out.component_at_ruin.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out.component_at_ruin.push_back(total.sum_x[idx] / n);
    out.fractions.push_back(ratio_estimate(total.sum_x[idx], total.sum_x2[idx],
                                           total.sum_xy[idx], total.sum_y,
                                           total.sum_y2, total.ruined, cfg.seed));
  }
  out.ruin_time = mean_estimate(total.sum_tau, total.sum_tau2, total.ruined, cfg.seed);

  const double np = static_cast<double>(cfg.paths);
  const double prob = n / np;
  out.ruin_prob = {prob, std::sqrt(std::max(0.0, prob * (1.0 - prob)) / np),
                   total.ruined, cfg.seed};
  return out;
}

// ---------------------------------------------------------------------------
// Supremum-location allocation

SupLocationSim simulate_allocation_sup_location(const RiskModel& model, double u,
                                                double T, const SimConfig& cfg) {
  require_valid(model);
  require_config(cfg);
  require_horizon(T);
  require_positive_capital(u);

  const double bw = cfg.bandwidth > 0.0 ? cfg.bandwidth : 0.05 * u;
  const int d = dimension(model);
  std::vector<SupBlock> blocks;

  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    const ComponentGrid g = make_component_grid(*bm, T, cfg);
    blocks = run_blocks<SupBlock>(
        cfg.paths, cfg.workers,
        [&](std::uint64_t first, std::uint64_t count) {
          SupBlock block(d);
          std::vector<double> state(static_cast<std::size_t>(d));
          std::vector<double> best_state(static_cast<std::size_t>(d));
          std::vector<double> z(static_cast<std::size_t>(d));
          for (std::uint64_t p = first; p < first + count; ++p) {
            PathRng rng(cfg.seed, p);
            std::fill(state.begin(), state.end(), 0.0);
            std::fill(best_state.begin(), best_state.end(), 0.0);
            double a = 0.0;
            double best = 0.0;
            double best_t = 0.0;
            for (std::int64_t k = 0; k < g.agg.ncells; ++k) {
              for (int j = 0; j < d; ++j) z[static_cast<std::size_t>(j)] = rng.next_normal();
              double binc = 0.0;
              for (int i = 0; i < d; ++i) {
                double v = g.drift_dt[static_cast<std::size_t>(i)];
                const double* row = g.factor.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(d);
                for (int j = 0; j < d; ++j) v += row[j] * z[static_cast<std::size_t>(j)];
                state[static_cast<std::size_t>(i)] += v;
                binc += v;
              }
              const double b = a + binc;
              if (b > best) {
                best = b;
                best_t = static_cast<double>(k + 1) * g.agg.dt;
                std::copy(state.begin(), state.end(), best_state.begin());
              }
              a = b;
            }
            if (std::abs(best - u) <= bw) {
              block.add(best_t, best_state.data(), d);
            }
          }
          return block;
        });
  } else {
    const CpSetup s = make_cp_setup(std::get<CompoundPoissonExpModel>(model));
    blocks = run_blocks<SupBlock>(
        cfg.paths, cfg.workers,
        [&](std::uint64_t first, std::uint64_t count) {
          SupBlock block(d);
          std::vector<double> jumps(static_cast<std::size_t>(d));
          std::vector<double> best_jumps(static_cast<std::size_t>(d));
          std::vector<double> x(static_cast<std::size_t>(d));
          for (std::uint64_t p = first; p < first + count; ++p) {
            PathRng rng(cfg.seed, p);
            std::fill(jumps.begin(), jumps.end(), 0.0);
            std::fill(best_jumps.begin(), best_jumps.end(), 0.0);
            double total_jumps = 0.0;
            double t = 0.0;
            double best = 0.0;
            double best_t = 0.0;
            for (;;) {
              t += rng.next_exponential(s.lambda);
              if (t > T) break;
              const int c = pick_component(s, rng.next_unit_co());
              const double j = rng.next_exponential(s.theta);
              jumps[static_cast<std::size_t>(c)] += j;
              total_jumps += j;
              const double agg = total_jumps - s.r * t;
              if (agg > best) {
                best = agg;
                best_t = t;
                std::copy(jumps.begin(), jumps.end(), best_jumps.begin());
              }
            }
            if (std::abs(best - u) <= bw) {
              for (int i = 0; i < d; ++i) {
                const auto idx = static_cast<std::size_t>(i);
                x[idx] = best_jumps[idx] - s.premium[idx] * best_t;
              }
              block.add(best_t, x.data(), d);
            }
          }
          return block;
        });
  }

  SupBlock total = pairwise_reduce(std::move(blocks),
                                   [](SupBlock& a, const SupBlock& b) {
                                     combine(a, b);
                                   });
  if (total.window == 0) {
    throw ZeroConditioningPaths(
        "no paths with running maximum inside the conditioning window");
  }

  SupLocationSim out;
  out.window_paths = total.window;
  out.argmax_time = mean_estimate(total.sum_t, total.sum_t2, total.window, cfg.seed);
  out.component_at_argmax.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out.component_at_argmax.push_back(
        mean_estimate(total.sum_x[idx], total.sum_x2[idx], total.window, cfg.seed));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tilted means

std::vector<SimEstimate> simulate_tilted_mean(const RiskModel& model,
                                              const SimConfig& cfg) {
  require_valid(model);
  require_config(cfg);

  const TiltedParams tp = tilt(model);
  const int d = dimension(model);
  std::vector<MeanBlock> blocks;

  if (const auto* bm = std::get_if<BrownianModel>(&tp.q_model)) {
    SimConfig unit = cfg;
    unit.steps_per_unit_time = 1;
    const ComponentGrid g = make_component_grid(*bm, 1.0, unit);
    blocks = run_blocks<MeanBlock>(
        cfg.paths, cfg.workers,
        [&](std::uint64_t first, std::uint64_t count) {
          MeanBlock block(d);
          std::vector<double> z(static_cast<std::size_t>(d));
          for (std::uint64_t p = first; p < first + count; ++p) {
            PathRng rng(cfg.seed, p);
            for (int j = 0; j < d; ++j) z[static_cast<std::size_t>(j)] = rng.next_normal();
            for (int i = 0; i < d; ++i) {
              const auto idx = static_cast<std::size_t>(i);
              double v = g.drift_dt[idx];
              const double* row = g.factor.data() + idx * static_cast<std::size_t>(d);
              for (int j = 0; j < d; ++j) v += row[j] * z[static_cast<std::size_t>(j)];
              block.sum[idx] += v;
              block.sum2[idx] += v * v;
            }
          }
          return block;
        });
  } else {
    const CpSetup s = make_cp_setup(std::get<CompoundPoissonExpModel>(tp.q_model));
    blocks = run_blocks<MeanBlock>(
        cfg.paths, cfg.workers,
        [&](std::uint64_t first, std::uint64_t count) {
          MeanBlock block(d);
          std::vector<double> jumps(static_cast<std::size_t>(d));
          for (std::uint64_t p = first; p < first + count; ++p) {
            PathRng rng(cfg.seed, p);
            std::fill(jumps.begin(), jumps.end(), 0.0);
            double t = 0.0;
            for (;;) {
              t += rng.next_exponential(s.lambda);
              if (t > 1.0) break;
              const int c = pick_component(s, rng.next_unit_co());
              jumps[static_cast<std::size_t>(c)] += rng.next_exponential(s.theta);
            }
            for (int i = 0; i < d; ++i) {
              const auto idx = static_cast<std::size_t>(i);
              const double v = jumps[idx] - s.premium[idx];
              block.sum[idx] += v;
              block.sum2[idx] += v * v;
            }
          }
          return block;
        });
  }

  MeanBlock total = pairwise_reduce(std::move(blocks),
                                    [](MeanBlock& a, const MeanBlock& b) {
                                      combine(a, b);
                                    });
  std::vector<SimEstimate> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out.push_back(mean_estimate(total.sum[idx], total.sum2[idx], cfg.paths, cfg.seed));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Law-check samplers

std::vector<double> simulate_brownian_supremum(const BrownianModel& model,
                                               double T, const SimConfig& cfg) {
  require_valid(RiskModel(model));
  require_config(cfg);
  require_horizon(T);

  const AggregateGrid g = make_aggregate_grid(model, T, cfg);
  struct VecBlock {
    std::vector<double> values;
  };
  auto blocks = run_blocks<VecBlock>(
      cfg.paths, cfg.workers,
      [&](std::uint64_t first, std::uint64_t count) {
        VecBlock block;
        block.values.reserve(count);
        for (std::uint64_t p = first; p < first + count; ++p) {
          PathRng rng(cfg.seed, p);
          double a = 0.0;
          double best = 0.0;
          for (std::int64_t k = 0; k < g.ncells; ++k) {
            const double b = a + g.drift_dt + g.sd_dt * rng.next_normal();
            // Exact cell maximum: invert the bridge-maximum law given the
            // endpoints, M = ((a+b) + sqrt((b-a)^2 - 2 sigma^2 dt log U)) / 2.
            const double log_u = std::log(rng.next_unit());
            const double disc = (b - a) * (b - a) - 2.0 * g.s2 * g.dt * log_u;
            const double cell_max = 0.5 * ((a + b) + std::sqrt(disc));
            if (cell_max > best) best = cell_max;
            a = b;
          }
          block.values.push_back(best);
        }
        return block;
      });

  VecBlock total = pairwise_reduce(std::move(blocks),
                                   [](VecBlock& a, const VecBlock& b) {
                                     a.values.insert(a.values.end(),
                                                     b.values.begin(),
                                                     b.values.end());
                                   });
  return std::move(total.values);
}

std::vector<RuinRecord> simulate_ruin_records(const CompoundPoissonExpModel& model,
                                              double u, double T,
                                              const SimConfig& cfg) {
  require_valid(RiskModel(model));
  require_config(cfg);
  require_horizon(T);
  require_positive_capital(u);

  const CpSetup s = make_cp_setup(model);
  struct RecBlock {
    std::vector<RuinRecord> records;
  };
  auto blocks = run_blocks<RecBlock>(
      cfg.paths, cfg.workers,
      [&](std::uint64_t first, std::uint64_t count) {
        RecBlock block;
        for (std::uint64_t p = first; p < first + count; ++p) {
          PathRng rng(cfg.seed, p);
          double t = 0.0;
          double jumps = 0.0;
          for (;;) {
            t += rng.next_exponential(s.lambda);
            if (t > T) break;
            jumps += rng.next_exponential(s.theta);
            const double agg = jumps - s.r * t;
            if (agg >= u) {
              block.records.push_back({t, agg - u});
              break;
            }
          }
        }
        return block;
      });

  RecBlock total = pairwise_reduce(std::move(blocks),
                                   [](RecBlock& a, const RecBlock& b) {
                                     a.records.insert(a.records.end(),
                                                      b.records.begin(),
                                                      b.records.end());
                                   });
  return std::move(total.records);
}

}  // namespace ruinalloc
