#include "sensel/simulator.hpp"

#include "sensel/errors.hpp"
#include "sensel/estimator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace sensel {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum Stream : std::uint64_t { kProcess = 1, kMeasurement = 2, kPrior = 3 };

class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, Stream stream)
      : engine_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)))) {}

  Vector standard(Eigen::Index size) {
    Vector z(size);
    for (Eigen::Index i = 0; i < size; ++i) z(i) = normal_(engine_);
    return z;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace

std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t run) {
  return splitmix64(splitmix64(base_seed) ^ run);
}

EpisodeRecord run_episode(const Scenario& s, const Schedule& schedule, const GainSchedule& gains,
                          std::uint64_t seed, const EpisodeOptions& options) {
  const int K = s.horizon;
  if (static_cast<int>(schedule.sequence.size()) != K) {
    throw DimensionError(fmt::format("schedule has {} slots but the scenario horizon is {}",
                                     schedule.sequence.size(), K));
  }
  if (gains.horizon() != K) {
    throw DimensionError(fmt::format("gain schedule horizon {} differs from scenario horizon {}",
                                     gains.horizon(), K));
  }
  const Eigen::Index n = s.plant.state_dim();
  const Eigen::Index m = s.plant.control_dim();
  if (s.x0.size() != n) throw DimensionError("initial deviation length differs from state dim");

  const Matrix process_factor = psd_factor(s.plant.Q);
  std::vector<Matrix> noise_factors;
  noise_factors.reserve(s.sensors.sensors.size());
  for (const auto& sensor : s.sensors.sensors) noise_factors.push_back(psd_factor(sensor.R));
  const Eigen::Index draws_per_slot = s.sensors.max_measurement_dim();

  GaussianStream process(seed, kProcess);
  GaussianStream measurement(seed, kMeasurement);

  Vector x = s.x0;
  BeliefState belief{s.x0, s.P0, 0};
  switch (options.prior) {
    case PriorMode::exact: break;
    case PriorMode::sampled: {
      GaussianStream prior(seed, kPrior);
      belief.x_hat = s.x0 + psd_factor(s.P0) * prior.standard(n);
      break;
    }
    case PriorMode::zero: belief.x_hat = Vector::Zero(n); break;
  }

  EpisodeRecord record;
  record.slots.reserve(static_cast<std::size_t>(K));
  Vector u = Vector::Zero(m);
  double cumulative = 0.0;
  for (int k = 1; k <= K; ++k) {
    x = s.plant.A * x + s.plant.B * u + process_factor * process.standard(n);

    const int index = schedule.sequence[static_cast<std::size_t>(k - 1)];
    const Sensor& sensor = s.sensors.at(index);
    const Eigen::Index p = sensor.measurement_dim();
    const Vector z = measurement.standard(draws_per_slot);
    const Vector y =
        sensor.H * x + noise_factors[static_cast<std::size_t>(index - 1)] * z.head(p);

    belief = update(predict(belief, u, s.plant), y, sensor);
    belief.k = k;
    u = control_input(gains, k, belief.x_hat);

    const double stage = x.dot(s.costs.D * x) + u.dot(s.costs.E * u);
    cumulative += stage;
    SlotRecord row;
    row.k = k;
    row.x = x;
    row.x_hat = belief.x_hat;
    row.u = u;
    row.sensor = index;
    row.stage_cost = stage;
    row.cumulative_cost = cumulative;
    row.trace_P = belief.P.trace();
    row.estimation_error = (x - belief.x_hat).norm();
    record.slots.push_back(std::move(row));
  }
  return record;
}

double MonteCarloSummary::cost_ratio(std::size_t a, std::size_t b) const {
  return methods.at(a).mean_total_cost / methods.at(b).mean_total_cost;
}

namespace {

// Per-run, per-slot quantities kept for the ordered reduction.
struct RunRow {
  std::vector<double> cumulative_cost;
  std::vector<double> estimation_error;
  std::vector<double> state_norm;
  std::vector<Vector> abs_x;
};

RunRow summarize_run(const EpisodeRecord& rec) {
  RunRow row;
  for (const auto& slot : rec.slots) {
    row.cumulative_cost.push_back(slot.cumulative_cost);
    row.estimation_error.push_back(slot.estimation_error);
    row.state_norm.push_back(slot.x.norm());
    row.abs_x.push_back(slot.x.cwiseAbs());
  }
  return row;
}

}  // namespace

MonteCarloSummary run_monte_carlo(const Scenario& s, const std::vector<Schedule>& schedules,
                                  int runs, std::uint64_t base_seed,
                                  const MonteCarloOptions& options) {
  if (runs < 1) throw DimensionError(fmt::format("runs must be >= 1, got {}", runs));
  const GainSchedule gains = riccati_backward(s.plant, s.costs, s.horizon);
  const auto n_methods = schedules.size();
  const auto n_runs = static_cast<std::size_t>(runs);
  const auto K = static_cast<std::size_t>(s.horizon);

  // results[method][run]
  std::vector<std::vector<RunRow>> results(n_methods, std::vector<RunRow>(n_runs));
  std::vector<EpisodeRecord> first(n_methods);

  unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_runs)));

  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::size_t r = w; r < n_runs; r += workers) {
        const std::uint64_t seed = episode_seed(base_seed, r);
        for (std::size_t j = 0; j < n_methods; ++j) {
          EpisodeRecord rec = run_episode(s, schedules[j], gains, seed, options.episode);
          results[j][r] = summarize_run(rec);
          if (r == 0) first[j] = std::move(rec);
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MonteCarloSummary summary;
  summary.runs = runs;
  const Eigen::Index n = s.plant.state_dim();
  for (std::size_t j = 0; j < n_methods; ++j) {
    MethodSummary ms;
    ms.name = std::string(method_name(schedules[j].method));
    ms.sequence = schedules[j].sequence;
    ms.mean_cumulative_cost.assign(K, 0.0);
    ms.mean_estimation_error.assign(K, 0.0);
    ms.mean_state_norm.assign(K, 0.0);
    ms.mean_abs_x.assign(K, Vector::Zero(n));
    double sum_total = 0.0;
    double sum_total_sq = 0.0;
    for (std::size_t r = 0; r < n_runs; ++r) {
      const RunRow& row = results[j][r];
      for (std::size_t k = 0; k < K; ++k) {
        ms.mean_cumulative_cost[k] += row.cumulative_cost[k];
        ms.mean_estimation_error[k] += row.estimation_error[k];
        ms.mean_state_norm[k] += row.state_norm[k];
        ms.mean_abs_x[k] += row.abs_x[k];
      }
      const double total = row.cumulative_cost.back();
      sum_total += total;
      sum_total_sq += total * total;
    }
    const double inv = 1.0 / static_cast<double>(n_runs);
    for (std::size_t k = 0; k < K; ++k) {
      ms.mean_cumulative_cost[k] *= inv;
      ms.mean_estimation_error[k] *= inv;
      ms.mean_state_norm[k] *= inv;
      ms.mean_abs_x[k] *= inv;
    }
    ms.mean_total_cost = sum_total * inv;
    const double var = std::max(0.0, sum_total_sq * inv - ms.mean_total_cost * ms.mean_total_cost);
    ms.stddev_total_cost = std::sqrt(var);
    ms.first_episode = std::move(first[j]);
    summary.methods.push_back(std::move(ms));
  }
  return summary;
}

ErrorSeries estimation_error_series(const std::vector<EpisodeRecord>& records) {
  if (records.empty()) throw DimensionError("estimation_error_series: no records");
  const std::size_t K = records.front().slots.size();
  if (K == 0) throw DimensionError("estimation_error_series: empty episode");
  const Eigen::Index n = records.front().slots.front().x.size();
  ErrorSeries out;
  out.mean_error.assign(K, 0.0);
  out.error_covariance.assign(K, Matrix::Zero(n, n));
  for (const auto& rec : records) {
    if (rec.slots.size() != K) {
      throw DimensionError(fmt::format("records have unequal lengths ({} vs {})",
                                       rec.slots.size(), K));
    }
    for (std::size_t k = 0; k < K; ++k) {
      const Vector e = rec.slots[k].x - rec.slots[k].x_hat;
      out.mean_error[k] += e.norm();
      out.error_covariance[k] += e * e.transpose();
    }
  }
  const double inv = 1.0 / static_cast<double>(records.size());
  for (std::size_t k = 0; k < K; ++k) {
    out.mean_error[k] *= inv;
    out.error_covariance[k] *= inv;
  }
  return out;
}

}  // namespace sensel
