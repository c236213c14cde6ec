#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fluxsim/harness.hpp"

namespace fluxsim::cli {

/// Serializable mirror of a Scenario plus run settings.
struct RunConfig {
  Scenario scenario{};
  std::uint64_t seed{1};
  std::string output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Malformed configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string key, const std::string& message);

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

/// Parses the YAML config text. `source` names the document in diagnostics.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");

RunConfig load_config(const std::filesystem::path& path);

/// Writes every field, numbers in shortest round-trip form, so that
/// parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Config describing a canned scenario.
RunConfig config_for(const Scenario& scenario, std::uint64_t seed = 1);

}  // namespace fluxsim::cli
