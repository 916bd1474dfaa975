#pragma once

#include <json.hpp>

#include <string>

namespace bohr {

// Fills defaults and validates shared fields; throws INVALID_INPUT on unknown
// commands or malformed values. The normalized form is what gets hashed and
// echoed into results.
nlohmann::json normalize_config(const nlohmann::json& config);

// Hash over the normalized config minus process-local fields
// (out, csv, checkpoint, workers, max_shards).
std::string config_hash(const nlohmann::json& normalized);

// Executes a run configuration and returns the result document. Reads/writes
// the checkpoint named in the config, writes "out"/"csv" files when named.
nlohmann::json run_config(const nlohmann::json& config);

// String-in/string-out wrapper used by the C API.
std::string run_config_json(const std::string& config_text);

// 0 = success, 2 = search ended without a result (budget/candidates/interrupt),
// 3 = input error. Matches the CLI exit code contract.
int exit_code_for_status(const std::string& status);

} // namespace bohr
