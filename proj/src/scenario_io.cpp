#include "sensel/scenario_io.hpp"

#include "sensel/errors.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace sensel {

using nlohmann::json;

namespace {

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw FormatError(path + ": expected a number");
  return v.get<double>();
}

Matrix matrix_from_json(const json& v, const std::string& path) {
  if (!v.is_array()) throw FormatError(path + ": expected an array of row arrays");
  const auto rows = static_cast<Eigen::Index>(v.size());
  if (rows == 0) return Matrix(0, 0);
  if (!v[0].is_array()) throw FormatError(path + "[0]: expected a row array");
  const auto cols = static_cast<Eigen::Index>(v[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    const std::string row_path = fmt::format("{}[{}]", path, i);
    if (!row.is_array()) throw FormatError(row_path + ": expected a row array");
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw FormatError(fmt::format("{}: ragged row, expected {} entries, got {}", row_path, cols,
                                    row.size()));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = number_at(row[static_cast<std::size_t>(j)], fmt::format("{}[{}]", row_path, j));
    }
  }
  return m;
}

Vector vector_from_json(const json& v, const std::string& path) {
  if (!v.is_array()) throw FormatError(path + ": expected an array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number_at(v[i], fmt::format("{}[{}]", path, i));
  }
  return out;
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw FormatError(fmt::format("missing required key '{}'", key));
  return *it;
}

int integer_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw FormatError(path + ": expected an integer");
  return v.get<int>();
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw FormatError("scenario document must be a JSON object");
  Scenario s;
  s.plant.A = matrix_from_json(require(doc, "A"), "A");
  s.plant.B = matrix_from_json(require(doc, "B"), "B");
  s.plant.Q = matrix_from_json(require(doc, "Q"), "Q");

  const json& sensors = require(doc, "sensors");
  if (!sensors.is_array()) throw FormatError("sensors: expected an array of {H, R} objects");
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const std::string base = fmt::format("sensors[{}]", i);
    const json& entry = sensors[i];
    if (!entry.is_object() || !entry.contains("H") || !entry.contains("R")) {
      throw FormatError(base + ": expected an object with keys H and R");
    }
    s.sensors.sensors.push_back(
        {matrix_from_json(entry["H"], base + ".H"), matrix_from_json(entry["R"], base + ".R")});
  }

  s.costs.D = matrix_from_json(require(doc, "D"), "D");
  s.costs.E = matrix_from_json(require(doc, "E"), "E");
  s.x0 = vector_from_json(require(doc, "x0"), "x0");

  if (auto it = doc.find("P0"); it != doc.end()) {
    s.P0 = matrix_from_json(*it, "P0");
  } else {
    s.P0 = Matrix::Identity(s.plant.A.rows(), s.plant.A.rows());
  }
  s.horizon = doc.contains("K") ? integer_at(doc["K"], "K") : kDefaultHorizon;
  s.window = integer_at(require(doc, "d"), "d");
  s.round_robin_start = doc.contains("round_robin_start")
                            ? integer_at(doc["round_robin_start"], "round_robin_start")
                            : kDefaultRoundRobinStart;
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["A"] = matrix_to_json(s.plant.A);
  doc["B"] = matrix_to_json(s.plant.B);
  doc["Q"] = matrix_to_json(s.plant.Q);
  json sensors = json::array();
  for (const auto& sensor : s.sensors.sensors) {
    sensors.push_back({{"H", matrix_to_json(sensor.H)}, {"R", matrix_to_json(sensor.R)}});
  }
  doc["sensors"] = std::move(sensors);
  doc["D"] = matrix_to_json(s.costs.D);
  doc["E"] = matrix_to_json(s.costs.E);
  doc["x0"] = vector_to_json(s.x0);
  doc["P0"] = matrix_to_json(s.P0);
  doc["K"] = s.horizon;
  doc["d"] = s.window;
  doc["round_robin_start"] = s.round_robin_start;
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open scenario file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("failed reading scenario file '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw FormatError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return scenario_from_json(doc);
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write scenario file '{}'", path.string()));
  out << scenario_to_json(s).dump(2) << '\n';
  if (!out) throw IoError(fmt::format("failed writing scenario file '{}'", path.string()));
}

}  // namespace sensel
