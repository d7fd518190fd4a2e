// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "generators.hpp"
#include "oracles.hpp"

#include "sensel/controller.hpp"
#include "sensel/estimator.hpp"
#include "sensel/report.hpp"
#include "sensel/scenario_io.hpp"
#include "sensel/scheduler.hpp"
#include "sensel/simulator.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cstring>
#include <functional>
#include <numeric>

using namespace sensel;

namespace {

constexpr int kRuns = 1000;
constexpr std::uint64_t kSeed = 0;

int failures = 0;

void report(bool ok, std::string_view name, const std::string& detail) {
  fmt::print("[{}] {}: {}\n", ok ? "PASS" : "FAIL", name, detail);
  if (!ok) ++failures;
}

// Runs `body`; an exception counts as a failure of that criterion.
void criterion(std::string_view name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(ok, name, detail);
  } catch (const std::exception& e) {
    report(false, name, fmt::format("threw: {}", e.what()));
  }
}

Scenario paper() { return load_scenario(std::string(SENSEL_DATA_DIR) + "/paper_sec4.json"); }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

bool same_bits(const EpisodeRecord& a, const EpisodeRecord& b) {
  if (a.slots.size() != b.slots.size()) return false;
  for (std::size_t k = 0; k < a.slots.size(); ++k) {
    const auto& p = a.slots[k];
    const auto& q = b.slots[k];
    auto eq = [](const Vector& x, const Vector& y) {
      return x.size() == y.size() &&
             std::memcmp(x.data(), y.data(), sizeof(double) * std::size_t(x.size())) == 0;
    };
    if (!eq(p.x, q.x) || !eq(p.x_hat, q.x_hat) || !eq(p.u, q.u) ||
        std::memcmp(&p.cumulative_cost, &q.cumulative_cost, sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  const Scenario s = paper();
  const Schedule window = sliding_window_schedule(s);
  const Schedule rr = round_robin_schedule(s);

  const auto t0 = std::chrono::steady_clock::now();
  const MonteCarloSummary mc = run_monte_carlo(s, {window, rr}, kRuns, kSeed);
  const double mc_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const MethodSummary& w = mc.methods[0];
  const MethodSummary& b = mc.methods[1];

  criterion("cost reduction (25-55%, >=1000 runs, <60 s)", [&] {
    const double reduction = 100.0 * (1.0 - mc.cost_ratio(0, 1));
    const bool ok = reduction >= 25.0 && reduction <= 55.0 && mc_seconds < 60.0;
    return std::pair{ok, fmt::format("reduction {:.3f}% (window {:.3f} +- {:.3f}, round-robin "
                                     "{:.3f} +- {:.3f}, {} runs, {:.2f} s)",
                                     reduction, w.mean_total_cost, w.stddev_total_cost,
                                     b.mean_total_cost, b.stddev_total_cost, mc.runs, mc_seconds)};
  });

  criterion("channel allocation (S3 > S1 > S2, S3 >= 40%, S2 <= 25%)", [&] {
    const auto c = allocation(window.sequence, 3);
    const double K = static_cast<double>(window.sequence.size());
    const bool ok = c[2] > c[0] && c[0] > c[1] && c[2] >= 0.40 * K && c[1] <= 0.25 * K;
    return std::pair{ok, fmt::format("S1/S2/S3 = {}/{}/{} of {} (published 14/8/18); sequence {}",
                                     c[0], c[1], c[2], window.sequence.size(),
                                     format_sequence(window.sequence))};
  });

  criterion("oracle equivalence (d=K window == brute force; brute <= round robin)", [&] {
    int instances = 0, equal = 0, bounded = 0, strict = 0, oracle_agree = 0;
    auto check = [&](const Scenario& sc) {
      Scenario full = sc;
      full.window = full.horizon;
      const Schedule bf = brute_force_schedule(full);
      const Schedule sw = sliding_window_schedule(full);
      const double robin = round_robin_schedule(full).objective;
      ++instances;
      if (sw.sequence == bf.sequence && sw.objective == bf.objective) ++equal;
      if (bf.objective <= robin) ++bounded;
      if (bf.objective < robin) ++strict;
      if (bf.sequence == oracle::brute_force(full)) ++oracle_agree;
    };
    for (int K : {4, 5, 6}) {
      Scenario t = s;
      t.horizon = K;
      check(t);
    }
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 50; ++i) check(gen::scenario(rng, 6, 2, true));
    const bool ok = equal == instances && bounded == instances && oracle_agree == instances &&
                    strict >= 0.9 * instances;
    return std::pair{ok, fmt::format("{} instances: window==brute {}, brute==odometer {}, "
                                     "brute<=rr {}, strict {} ({:.0f}%)",
                                     instances, equal, oracle_agree, bounded, strict,
                                     100.0 * strict / instances)};
  });

  criterion("convergence (both < 5% |dx0| at k=40; window < 10% at k=30)", [&] {
    const double x0 = s.x0.norm();
    const bool ok = w.mean_state_norm[39] < 0.05 * x0 && b.mean_state_norm[39] < 0.05 * x0 &&
                    w.mean_state_norm[29] < 0.10 * x0;
    return std::pair{ok, fmt::format("|dx0| = {:.4f}; window k=30 {:.4f}, k=40 {:.4f}; "
                                     "round-robin k=30 {:.4f}, k=40 {:.4f}",
                                     x0, w.mean_state_norm[29], w.mean_state_norm[39],
                                     b.mean_state_norm[29], b.mean_state_norm[39])};
  });

  criterion("estimation quality (summed mean error: window < round robin)", [&] {
    const double ew = sum(w.mean_estimation_error), er = sum(b.mean_estimation_error);
    return std::pair{ew < er, fmt::format("window {:.4f}, round-robin {:.4f}", ew, er)};
  });

  criterion("filter consistency (empirical trace within 10% of trace(P_k), 1e4 runs)", [&] {
    const GainSchedule g = riccati_backward(s.plant, s.costs, s.horizon);
    std::vector<EpisodeRecord> recs;
    recs.reserve(10000);
    for (std::uint64_t r = 0; r < 10000; ++r) {
      recs.push_back(run_episode(s, window, g, episode_seed(7, r), {PriorMode::sampled}));
    }
    const ErrorSeries es = estimation_error_series(recs);
    double worst = 0.0;
    int worst_k = 0;
    for (std::size_t k = 0; k < es.error_covariance.size(); ++k) {
      const double predicted = recs.front().slots[k].trace_P;
      const double rel = std::abs(es.error_covariance[k].trace() - predicted) / predicted;
      if (rel > worst) {
        worst = rel;
        worst_k = static_cast<int>(k) + 1;
      }
    }
    return std::pair{worst <= 0.10,
                     fmt::format("worst relative deviation {:.4f} at k={}", worst, worst_k)};
  });

  criterion("numerical invariants (>=100 randomized cases each)", [&] {
    std::mt19937_64 rng(99);
    constexpr int kCases = 100;
    int psd = 0, trace = 0, terminal = 0, no_actuation = 0, m_psd = 0, seeds = 0, reuse = 0;
    for (int i = 0; i < kCases; ++i) {
      const Scenario r = gen::scenario(rng, 8);
      const Eigen::Index n = r.plant.state_dim();

      bool ok_psd = true, ok_trace = true;
      BeliefState belief{Vector::Zero(n), r.P0, 0};
      for (int k = 0; k < r.horizon; ++k) {
        const Sensor& sensor = r.sensors.at(k % r.sensors.size() + 1);
        const Prediction pred = predict(belief, Vector::Zero(r.plant.control_dim()), r.plant);
        belief = update(pred, Vector::Zero(sensor.measurement_dim()), sensor);
        ok_psd = ok_psd && asymmetry(belief.P) <= kSymmetryTol &&
                 min_eigenvalue(belief.P) >= -kPsdTol;
        ok_trace = ok_trace && belief.P.trace() <= pred.P_minus.trace() + 1e-9;
      }
      psd += ok_psd;
      trace += ok_trace;

      const GainSchedule g = riccati_backward(r.plant, r.costs, r.horizon);
      terminal += g.cost_to_go(r.horizon) == r.costs.D;
      bool ok_m = true;
      for (int k = 0; k <= r.horizon; ++k) {
        ok_m = ok_m && asymmetry(g.cost_to_go(k)) <= kSymmetryTol &&
               min_eigenvalue(g.cost_to_go(k)) >= -kPsdTol;
      }
      m_psd += ok_m;

      Scenario idle = r;
      idle.plant.B.setZero();
      const GainSchedule g0 = riccati_backward(idle.plant, idle.costs, idle.horizon);
      bool zero = true;
      for (int k = 1; k <= idle.horizon; ++k) zero = zero && g0.gain(k).isZero(0.0);
      no_actuation += zero;

      const Schedule sched = round_robin_schedule(r);
      const std::uint64_t seed = rng();
      seeds += same_bits(run_episode(r, sched, g, seed), run_episode(r, sched, g, seed));

      Scenario wr = gen::scenario(rng, 8, 2);
      wr.horizon = std::max(wr.horizon, 2);
      wr.window = std::uniform_int_distribution<int>(2, wr.horizon)(rng);
      SearchStats with, without;
      const Schedule a = sliding_window_schedule(wr, &with, true);
      const Schedule c = sliding_window_schedule(wr, &without, false);
      reuse += a.sequence == c.sequence && a.objective == c.objective &&
               with.covariance_steps < without.covariance_steps;
    }
    const bool ok = psd == kCases && trace == kCases && terminal == kCases &&
                    no_actuation == kCases && m_psd == kCases && seeds == kCases &&
                    reuse == kCases;
    return std::pair{ok, fmt::format("P PSD {}/{}, trace non-increase {}/{}, M_K=D {}/{}, "
                                     "M PSD {}/{}, B=0=>L=0 {}/{}, seed determinism {}/{}, "
                                     "window reuse {}/{}",
                                     psd, kCases, trace, kCases, terminal, kCases, m_psd, kCases,
                                     no_actuation, kCases, seeds, kCases, reuse, kCases)};
  });

  // Context for the cost criterion, not gated.
  for (PriorMode prior : {PriorMode::sampled, PriorMode::zero}) {
    MonteCarloOptions o;
    o.episode.prior = prior;
    const MonteCarloSummary alt = run_monte_carlo(s, {window, rr}, kRuns, kSeed, o);
    fmt::print("[INFO] cost reduction with {} initial estimate: {:.3f}%\n",
               prior == PriorMode::sampled ? "sampled" : "zero",
               100.0 * (1.0 - alt.cost_ratio(0, 1)));
  }
  fmt::print("[INFO] trace objective: window {:.6f}, round-robin {:.6f}\n", window.objective,
             rr.objective);

  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
