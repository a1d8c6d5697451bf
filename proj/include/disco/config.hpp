#pragma once
// Scenario ingestion: JSON (de)serialization with strict key checking and
// whole-config validation that reports every violated invariant at once.

#include <stdexcept>
#include <string>
#include <vector>

#include "disco/types.hpp"

namespace disco {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// Checks every type invariant and populates derived quantities (per-UE
// Q_avg = D_avg * A_avg expressed in slot units). Throws ConfigError listing
// all violations with their field paths.
ScenarioConfig validate_config(ScenarioConfig cfg);

ScenarioConfig config_from_json(const std::string& text);      // strict keys
ScenarioConfig load_config(const std::string& path);           // file + validate
std::string config_to_json(const ScenarioConfig& cfg, int indent = 2);

// Dotted-path override applied to the JSON document before parsing,
// e.g. "lyapunov.v=5e6" or "ues.0.arrival_rate=10".
std::string apply_override(const std::string& json_text, const std::string& assignment);

// FNV-1a over the canonical serialization; stable file-naming token.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace disco
