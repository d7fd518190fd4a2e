#include "sensel/cli.hpp"

#include "sensel/controller.hpp"
#include "sensel/errors.hpp"
#include "sensel/report.hpp"
#include "sensel/scenario_io.hpp"
#include "sensel/scheduler.hpp"
#include "sensel/simulator.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#ifndef SENSEL_VERSION
#define SENSEL_VERSION "0.0.0"
#endif

namespace sensel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raised after violations have been printed, to unwind with exit code 1.
struct ValidationFailure {};

class Manifest {
 public:
  Manifest(std::string command, fs::path out_dir) : out_dir_(std::move(out_dir)) {
    doc_["tool"] = "sensel";
    doc_["version"] = SENSEL_VERSION;
    doc_["command"] = std::move(command);
    doc_["output_directory"] = out_dir_.string();
    doc_["timings_ms"] = json::object();
  }

  json& operator[](const char* key) { return doc_[key]; }

  template <class F>
  auto timed(const char* phase, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&] {
      const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
      doc_["timings_ms"][phase] = ms.count();
    };
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      finish();
    } else {
      auto result = f();
      finish();
      return result;
    }
  }

  void write(const std::string& name, std::string_view contents) {
    write_text_file(out_dir_ / name, contents);
    files_.push_back(name);
  }

  void commit() {
    files_.push_back("manifest.json");
    doc_["files"] = files_;
    write_text_file(out_dir_ / "manifest.json", doc_.dump(2) + "\n");
  }

 private:
  fs::path out_dir_;
  json doc_;
  std::vector<std::string> files_;
};

Scenario load_valid(const std::string& path, std::optional<int> window, std::ostream& err) {
  Scenario s;
  try {
    s = load_scenario(path);
  } catch (const FormatError& e) {
    err << "invalid scenario: " << e.what() << '\n';
    throw ValidationFailure{};
  }
  if (window) s.window = *window;
  const auto violations = validate_scenario(s);
  if (!violations.empty()) {
    err << "invalid scenario '" << path << "':\n";
    for (const auto& v : violations) err << "  " << v.path << ": " << v.message << '\n';
    throw ValidationFailure{};
  }
  return s;
}

Schedule compute_schedule(const Scenario& s, const std::string& method) {
  if (method == "brute") return brute_force_schedule(s);
  if (method == "window") return sliding_window_schedule(s);
  return round_robin_schedule(s);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(),
                                    ec.message()));
}

PriorMode parse_prior(const std::string& name) {
  if (name == "sampled") return PriorMode::sampled;
  if (name == "zero") return PriorMode::zero;
  return PriorMode::exact;
}

std::string episode_csv(const EpisodeRecord& rec) {
  std::ostringstream os;
  write_episode_csv(os, rec);
  return os.str();
}

struct Options {
  std::string scenario;
  std::string out = ".";
  std::string method = "window";
  std::string baseline = "roundrobin";
  std::string schedule_file;
  std::string prior = "exact";
  std::optional<int> window;
  int runs = 1000;
  std::uint64_t seed = 0;
};

int cmd_schedule(const Options& o, std::ostream& out, std::ostream& err) {
  Manifest manifest("schedule", o.out);
  const Scenario s = manifest.timed("load", [&] { return load_valid(o.scenario, o.window, err); });
  const Schedule sched = manifest.timed("schedule", [&] { return compute_schedule(s, o.method); });
  ensure_dir(o.out);
  manifest["scenario"] = o.scenario;
  manifest["methods"] = json::array({o.method});
  manifest["window"] = s.window;
  manifest.timed("write", [&] {
    manifest.write("schedule.txt", format_sequence(sched.sequence) + "\n");
    manifest.write("schedule.json", schedule_sidecar(sched, s.sensors.size()).dump(2) + "\n");
  });
  manifest.commit();
  out << "sequence: " << format_sequence(sched.sequence) << '\n';
  out << fmt::format("allocation: {}\n", fmt::join(allocation(sched.sequence, s.sensors.size()), " "));
  out << fmt::format("objective: {:.17g}\n", sched.objective);
  return kOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.runs < 1) {
    err << "--runs must be >= 1\n";
    return kInvalid;
  }
  Manifest manifest("compare", o.out);
  const Scenario s = manifest.timed("load", [&] { return load_valid(o.scenario, o.window, err); });
  std::vector<Schedule> schedules = manifest.timed("schedule", [&] {
    return std::vector<Schedule>{compute_schedule(s, o.method), compute_schedule(s, o.baseline)};
  });

  MonteCarloOptions mc;
  mc.episode.prior = parse_prior(o.prior);
  MonteCarloSummary summary = manifest.timed(
      "simulate", [&] { return run_monte_carlo(s, schedules, o.runs, o.seed, mc); });
  summary.methods[0].name = o.method;
  summary.methods[1].name = o.baseline == o.method ? o.baseline + "_baseline" : o.baseline;

  ensure_dir(o.out);
  manifest["scenario"] = o.scenario;
  manifest["methods"] = json::array({summary.methods[0].name, summary.methods[1].name});
  manifest["seeds"] = {{"base_seed", o.seed}, {"runs", o.runs}};
  manifest["window"] = s.window;
  manifest["prior"] = o.prior;
  manifest.timed("write", [&] {
    std::ostringstream os;
    write_summary_csv(os, summary);
    manifest.write("summary.csv", os.str());
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& ms = summary.methods[j];
      manifest.write("schedule_" + ms.name + ".txt", format_sequence(ms.sequence) + "\n");
      manifest.write("episode_" + ms.name + ".csv", episode_csv(ms.first_episode));
    }
  });
  manifest.commit();

  for (std::size_t j = 0; j < 2; ++j) {
    const auto& ms = summary.methods[j];
    out << fmt::format("{}: mean total cost {:.6f} (sd {:.6f}) over {} runs, allocation {}\n",
                       ms.name, ms.mean_total_cost, ms.stddev_total_cost, summary.runs,
                       fmt::join(allocation(ms.sequence, s.sensors.size()), "/"));
  }
  const double reduction = 100.0 * (1.0 - summary.cost_ratio(0, 1));
  out << fmt::format("cost reduction: {:.2f}%\n", reduction);
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  Manifest manifest("simulate", o.out);
  const Scenario s = manifest.timed("load", [&] { return load_valid(o.scenario, o.window, err); });
  Schedule sched;
  try {
    sched.sequence = read_schedule_file(o.schedule_file);
  } catch (const FormatError& e) {
    err << "invalid schedule: " << e.what() << '\n';
    return kInvalid;
  }
  if (static_cast<int>(sched.sequence.size()) != s.horizon) {
    err << fmt::format("schedule has {} entries but the scenario horizon K is {}\n",
                       sched.sequence.size(), s.horizon);
    return kInvalid;
  }
  for (int i : sched.sequence) {
    if (i < 1 || i > s.sensors.size()) {
      err << fmt::format("schedule entry {} outside sensor range [1, {}]\n", i, s.sensors.size());
      return kInvalid;
    }
  }
  const GainSchedule gains =
      manifest.timed("gains", [&] { return riccati_backward(s.plant, s.costs, s.horizon); });
  EpisodeOptions eo;
  eo.prior = parse_prior(o.prior);
  const EpisodeRecord rec = manifest.timed(
      "simulate", [&] { return run_episode(s, sched, gains, episode_seed(o.seed, 0), eo); });

  ensure_dir(o.out);
  manifest["scenario"] = o.scenario;
  manifest["schedule"] = o.schedule_file;
  manifest["seeds"] = {{"base_seed", o.seed}, {"runs", 1}};
  manifest["prior"] = o.prior;
  manifest.timed("write", [&] { manifest.write("episode.csv", episode_csv(rec)); });
  manifest.commit();
  out << fmt::format("total cost: {:.17g}\n", rec.total_cost());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sensor scheduling, Kalman estimation and LQR voltage regulation"};
  app.set_version_flag("--version", SENSEL_VERSION);
  app.require_subcommand(1);
  Options o;

  const std::vector<std::string> methods{"brute", "window", "roundrobin"};
  const std::vector<std::string> priors{"exact", "sampled", "zero"};
  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--d", o.window, "Sliding window size (overrides the scenario)")
        ->check(CLI::PositiveNumber);
  };

  auto* schedule = app.add_subcommand("schedule", "Compute a sensor querying sequence");
  common(schedule);
  schedule->add_option("--method", o.method, "brute | window | roundrobin")
      ->check(CLI::IsMember(methods));

  auto* compare = app.add_subcommand("compare", "Paired Monte Carlo comparison of two methods");
  common(compare);
  compare->add_option("--method", o.method, "Candidate method")->check(CLI::IsMember(methods));
  compare->add_option("--baseline", o.baseline, "Baseline method")->check(CLI::IsMember(methods));
  compare->add_option("--runs", o.runs, "Monte Carlo episodes");
  compare->add_option("--seed", o.seed, "Base seed");
  compare->add_option("--prior", o.prior, "Initial estimate: exact | sampled | zero")
      ->check(CLI::IsMember(priors));

  auto* simulate = app.add_subcommand("simulate", "Simulate one closed-loop episode");
  common(simulate);
  simulate->add_option("--schedule", o.schedule_file, "Schedule text file")->required();
  simulate->add_option("--seed", o.seed, "Seed");
  simulate->add_option("--prior", o.prior, "Initial estimate: exact | sampled | zero")
      ->check(CLI::IsMember(priors));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << SENSEL_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInvalid;
  }

  try {
    if (schedule->parsed()) return cmd_schedule(o, out, err);
    if (compare->parsed()) return cmd_compare(o, out, err);
    return cmd_simulate(o, out, err);
  } catch (const ValidationFailure&) {
    return kInvalid;
  } catch (const SearchSpaceError& e) {
    err << e.what() << '\n';
    return kGuard;
  } catch (const IoError& e) {
    err << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
}

}  // namespace sensel::cli
