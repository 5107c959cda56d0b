#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace corrard::cli {

/// Provenance record written next to every command's outputs.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json config = nlohmann::json::object();  // resolved option values
  std::string config_text;  // the same, as a loadable --config file
  std::uint64_t master_seed = 0;
  std::string seed_source;  // "flag", "env" or "default"
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  nlohmann::json details = nlohmann::json::object();
  std::string started_utc;
  std::string finished_utc;
  int exit_code = 0;
  std::string error;
};

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

/// Current time as an ISO-8601 UTC timestamp with millisecond precision.
std::string utc_now();

nlohmann::json manifest_to_json(const RunManifest& m);
void write_manifest(const RunManifest& m, const std::string& path);

}  // namespace corrard::cli
