#pragma once

#include "sensel/model.hpp"

#include <json.hpp>

#include <filesystem>

namespace sensel {

// Scenario files are one JSON object with keys A, B, Q, sensors ([{H, R}]),
// D, E, x0, P0, K, d, round_robin_start. Matrices are arrays of row arrays.
// P0 defaults to the identity, K to 40, round_robin_start to 2.

/// Throws FormatError on missing keys, ragged rows, or non-numeric entries.
/// Does not validate invariants; call validate_scenario for that.
Scenario scenario_from_json(const nlohmann::json& doc);

nlohmann::json scenario_to_json(const Scenario& s);

/// Throws IoError if the file cannot be read, FormatError if it is not a
/// well-formed scenario document.
Scenario load_scenario(const std::filesystem::path& path);

void save_scenario(const Scenario& s, const std::filesystem::path& path);

nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json vector_to_json(const Vector& v);

}  // namespace sensel
