#pragma once
// Verification suites: brute-force oracle equivalence on small instances,
// randomized invariant checks, and the acceptance criteria. The enumeration
// oracles live here, deliberately outside the solver path they check.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "disco/rng.hpp"
#include "disco/solver.hpp"
#include "disco/types.hpp"

namespace disco::verify {

struct CheckResult {
  std::string id;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values vs thresholds
};

// Exhaustive search over {AP sleep} U {AP active x per-UE {sleep} U
// {active x (idle|feasible MCS) x (idle|feasible MCS)}}, scored with the
// shared radio objective.
struct RadioEnumeration {
  double objective = 0.0;
  Decision decision;
};
RadioEnumeration enumerate_radio(std::span<const UeSlotView> views,
                                 const ScenarioConfig& cfg, const SnrCache& snr);

// LP vertex enumeration at each candidate frequency: every (subset,
// permutation) greedy fill, scored with the shared CPU objective.
struct CpuEnumeration {
  double objective = 0.0;
  double f_c = 0.0;
  std::vector<double> f_k;
};
CpuEnumeration enumerate_cpu(std::span<const UeSlotView> views,
                             const ScenarioConfig& cfg);

// Small random instance for the oracle suites: K <= 2, |MCS| <= 3, |F| <= 4,
// queue counts <= 20, continuous virtual-queue values.
struct SmallInstance {
  ScenarioConfig cfg;
  std::vector<UeSlotView> views;
};
SmallInstance make_small_instance(Rng& rng, int max_ues = 2);

// Uniformly random member of the feasible decision set of the instance.
Decision random_feasible_decision(std::span<const UeSlotView> views,
                                  const ScenarioConfig& cfg, const SnrCache& snr,
                                  Rng& rng);

std::vector<CheckResult> oracle_suite(std::uint64_t seed, int n_instances);
std::vector<CheckResult> invariant_suite(std::uint64_t seed, std::int64_t steps);
std::vector<CheckResult> acceptance_suite(std::uint64_t seed, int jobs);

// Prints one pass/fail line per result; returns the number of failures.
int report(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace disco::verify
