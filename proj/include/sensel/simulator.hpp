#pragma once

#include "sensel/controller.hpp"
#include "sensel/model.hpp"
#include "sensel/scheduler.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sensel {

/// How the filter's initial estimate relates to the true initial deviation.
enum class PriorMode {
  exact,    // x_hat_0 = dx_0
  sampled,  // x_hat_0 = dx_0 + e, e ~ N(0, P0); the filter is then consistent from k = 0
  zero,     // x_hat_0 = 0
};

struct SlotRecord {
  int k = 0;
  Vector x;      // true deviation dx_k
  Vector x_hat;  // posterior estimate
  Vector u;      // u_k = -L_k x_hat_k
  int sensor = 0;
  double stage_cost = 0.0;
  double cumulative_cost = 0.0;
  double trace_P = 0.0;
  double estimation_error = 0.0;  // |dx_k - x_hat_k|
};

struct EpisodeRecord {
  std::vector<SlotRecord> slots;  // k = 1..K

  double total_cost() const { return slots.empty() ? 0.0 : slots.back().cumulative_cost; }
};

struct EpisodeOptions {
  PriorMode prior = PriorMode::exact;
};

/// Seed of run `run` under `base_seed`. Episodes only depend on this value,
/// so Monte Carlo results do not depend on scheduling or worker count.
std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t run);

/// Closed loop over k = 1..K: truth dx_k = A dx_{k-1} + B u_{k-1} + w
/// (u_0 = 0), measurement from schedule.sequence[k-1], Kalman predict/update,
/// u_k = -L_k x_hat_k, stage cost dx_k'D dx_k + u_k'E u_k.
///
/// Process noise, measurement noise and the prior perturbation come from
/// independent streams derived from `seed`, and every slot draws the same
/// number of measurement normals whatever sensor is scheduled. Two schedules
/// run with one seed therefore see identical process noise.
/// Throws DimensionError if schedule or gain horizons differ from K.
EpisodeRecord run_episode(const Scenario& s, const Schedule& schedule, const GainSchedule& gains,
                          std::uint64_t seed, const EpisodeOptions& options = {});

struct MethodSummary {
  std::string name;
  std::vector<int> sequence;
  std::vector<double> mean_cumulative_cost;  // per slot
  std::vector<double> mean_estimation_error; // per slot
  std::vector<Vector> mean_abs_x;            // per slot, componentwise mean |dx_k|
  std::vector<double> mean_state_norm;       // per slot, mean |dx_k|
  double mean_total_cost = 0.0;
  double stddev_total_cost = 0.0;
  EpisodeRecord first_episode;               // run 0, for trace output
};

struct MonteCarloSummary {
  int runs = 0;
  std::vector<MethodSummary> methods;

  /// mean total cost of method a over that of method b.
  double cost_ratio(std::size_t a, std::size_t b) const;
};

struct MonteCarloOptions {
  EpisodeOptions episode;
  unsigned workers = 0;  // 0 = hardware concurrency
};

/// Runs every schedule on the same seeds episode_seed(base_seed, r),
/// r = 0..runs-1 (common random numbers), and averages per slot.
MonteCarloSummary run_monte_carlo(const Scenario& s, const std::vector<Schedule>& schedules,
                                  int runs, std::uint64_t base_seed,
                                  const MonteCarloOptions& options = {});

struct ErrorSeries {
  std::vector<double> mean_error;         // per slot mean |dx_k - x_hat_k|
  std::vector<Matrix> error_covariance;   // per slot E[e e'], e = dx_k - x_hat_k
};

/// Throws DimensionError on empty input or unequal record lengths.
ErrorSeries estimation_error_series(const std::vector<EpisodeRecord>& records);

}  // namespace sensel
