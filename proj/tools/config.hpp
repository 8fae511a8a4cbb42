#pragma once

// Run configuration shared by every subcommand. A run is described by one
// flat JSON object; a --config file supplies it and command-line flags
// override individual keys. Each subcommand accepts a fixed key set, and
// anything else is rejected before work starts.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankfield/pointproc.hpp"
#include "rankfield/rankspace.hpp"

namespace rankfield::cli {

using Json = nlohmann::ordered_json;

/// Invalid configuration; the CLI exits with status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { String, Uint, Int, Number, Strings, Dims, Window, Process, Processes };

struct KeySpec {
  std::string key;
  ValueType type;
  std::string help;
};

const std::vector<std::string>& command_names();
const std::vector<KeySpec>& command_keys(const std::string& command);
/// Keys of a "process" object, with the flags `simulate` maps onto them.
const std::vector<KeySpec>& process_keys();

/// Converts a flag's text to the JSON value stored under its key.
Json parse_flag_value(const KeySpec& spec, const std::string& text);

Json load_config_file(const std::filesystem::path& path);

/// Merged, validated settings of one run.
class Settings {
 public:
  /// `file` comes from --config (may be null), `flags` from the command line.
  Settings(std::string command, const Json& file, const Json& flags);

  const std::string& command() const noexcept { return command_; }
  /// Effective configuration, replayable through --config.
  Json to_json() const;

  bool has(const std::string& key) const { return values_.contains(key); }
  std::string string(const std::string& key) const;  ///< required
  std::string string_or(const std::string& key, const std::string& fallback) const;
  std::uint64_t uint_or(const std::string& key, std::uint64_t fallback) const;
  int int_or(const std::string& key, int fallback) const;
  double number_or(const std::string& key, double fallback) const;
  std::vector<std::string> strings(const std::string& key) const;  ///< required, non-empty
  std::vector<int> dims_or(const std::string& key, std::vector<int> fallback) const;
  Grid grid_or(const Grid& fallback) const;
  std::optional<WeightFunction> phi() const;
  int jobs() const;
  ProcessSpec process() const;
  std::vector<ProcessSpec> processes_or(std::vector<ProcessSpec> fallback) const;

 private:
  std::string command_;
  Json values_;
};

ProcessSpec process_from_json(const Json& j);

}  // namespace rankfield::cli
