#pragma once
// Persistence: per-slot CSV, aggregate JSON, and run manifests.

#include <iosfwd>
#include <string>

#include "disco/sim.hpp"
#include "disco/types.hpp"

namespace disco {

void write_slot_csv(const MetricsLog& log, std::ostream& os);
std::string aggregates_json(const MetricsLog& log, const std::string& cfg_hash,
                            std::uint64_t seed);

struct RunManifest {
  std::string command;
  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string version;
};

std::string manifest_json(const RunManifest& m);

}  // namespace disco
