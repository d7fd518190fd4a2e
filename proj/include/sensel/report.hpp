#pragma once

#include "sensel/scheduler.hpp"
#include "sensel/simulator.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sensel {

/// "2 3 1 2 3 1" -- one line, single spaces, no trailing newline.
std::string format_sequence(const std::vector<int>& seq);

/// Whitespace-separated positive integers. Throws FormatError otherwise.
std::vector<int> parse_sequence(std::string_view text);

std::vector<int> read_schedule_file(const std::filesystem::path& path);

/// Sidecar: method, K, sequence, per-step traces, objective, slot counts.
nlohmann::json schedule_sidecar(const Schedule& schedule, int sensors);

/// Slots given to each sensor, index 0 = sensor 1.
std::vector<int> allocation(const std::vector<int>& seq, int sensors);

// CSV writers. Headers are always written; numbers use 17 significant digits.
// episode: k,x1..xn,xhat1..xhatn,u1..um,sensor,stage_cost,cum_cost,traceP,est_err
// summary: k,method,mean_cum_cost,mean_est_err,mean_abs_x1..xn
void write_episode_csv(std::ostream& out, const EpisodeRecord& rec);
void write_summary_csv(std::ostream& out, const MonteCarloSummary& summary);

/// Writes `contents` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace sensel
