#include "sensel/report.hpp"

#include "sensel/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace sensel {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::string format_sequence(const std::vector<int>& seq) {
  return fmt::format("{}", fmt::join(seq, " "));
}

std::vector<int> parse_sequence(std::string_view text) {
  std::vector<int> seq;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\n' &&
           text[j] != '\r') {
      ++j;
    }
    const std::string_view token = text.substr(i, j - i);
    int value = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size() || value < 1) {
      throw FormatError(fmt::format("schedule entry '{}' is not a positive sensor index", token));
    }
    seq.push_back(value);
    i = j;
  }
  if (seq.empty()) throw FormatError("schedule file contains no sensor indices");
  return seq;
}

std::vector<int> read_schedule_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open schedule file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sequence(buf.str());
}

std::vector<int> allocation(const std::vector<int>& seq, int sensors) {
  std::vector<int> counts(static_cast<std::size_t>(sensors), 0);
  for (int s : seq) {
    if (s >= 1 && s <= sensors) ++counts[static_cast<std::size_t>(s - 1)];
  }
  return counts;
}

nlohmann::json schedule_sidecar(const Schedule& schedule, int sensors) {
  nlohmann::json doc;
  doc["method"] = method_name(schedule.method);
  doc["K"] = schedule.sequence.size();
  doc["sequence"] = schedule.sequence;
  doc["traces"] = schedule.traces;
  doc["objective"] = schedule.objective;
  doc["allocation"] = allocation(schedule.sequence, sensors);
  return doc;
}

void write_episode_csv(std::ostream& out, const EpisodeRecord& rec) {
  const Eigen::Index n = rec.slots.empty() ? 0 : rec.slots.front().x.size();
  const Eigen::Index m = rec.slots.empty() ? 0 : rec.slots.front().u.size();
  out << 'k';
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x" << i;
  for (Eigen::Index i = 1; i <= n; ++i) out << ",xhat" << i;
  for (Eigen::Index i = 1; i <= m; ++i) out << ",u" << i;
  out << ",sensor,stage_cost,cum_cost,traceP,est_err\n";
  for (const auto& row : rec.slots) {
    out << row.k;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << num(row.x(i));
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << num(row.x_hat(i));
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << num(row.u(i));
    out << ',' << row.sensor << ',' << num(row.stage_cost) << ',' << num(row.cumulative_cost)
        << ',' << num(row.trace_P) << ',' << num(row.estimation_error) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const MonteCarloSummary& summary) {
  const Eigen::Index n = (summary.methods.empty() || summary.methods.front().mean_abs_x.empty())
                             ? 0
                             : summary.methods.front().mean_abs_x.front().size();
  out << "k,method,mean_cum_cost,mean_est_err";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",mean_abs_x" << i;
  out << '\n';
  for (const auto& ms : summary.methods) {
    for (std::size_t k = 0; k < ms.mean_cumulative_cost.size(); ++k) {
      out << (k + 1) << ',' << ms.name << ',' << num(ms.mean_cumulative_cost[k]) << ','
          << num(ms.mean_estimation_error[k]);
      for (Eigen::Index i = 0; i < n; ++i) out << ',' << num(ms.mean_abs_x[k](i));
      out << '\n';
    }
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << contents;
  out.close();
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace sensel
