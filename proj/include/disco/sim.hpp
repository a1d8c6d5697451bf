#pragma once
// The slot loop, arrival generation, metric collection, and Monte Carlo
// orchestration over independent realizations.

#include <cstdint>
#include <functional>
#include <vector>

#include "disco/rng.hpp"
#include "disco/solver.hpp"
#include "disco/types.hpp"

namespace disco {

struct SlotRecord {
  Count t = 0;
  double e_u = 0, e_a = 0, e_m = 0, e_tot = 0, e_w = 0;  // J
  bool ap_active = false;
  bool es_active = false;
  double f_c = 0;
  int active_ues = 0;
  Count arrivals = 0;
  Count delivered = 0;
  Count q_l = 0, q_m = 0, q_a = 0;  // sums over UEs, end of slot
  double z_sum = 0, y_sum = 0;
  double delta_mean = 0;
  Count oos_queue_events = 0;
};

struct EpisodeAggregates {
  Count horizon = 0;
  std::size_t n_ues = 0;
  // J per slot
  double mean_e_u = 0, mean_e_a = 0, mean_e_m = 0, mean_e_tot = 0, mean_e_w = 0;
  double duty_ap = 0, duty_es = 0, duty_ue_mean = 0;
  std::vector<double> duty_ue;
  std::vector<double> mean_delay_ts;      // s, timestamp-based, per UE
  std::vector<double> mean_delay_little;  // s, occupancy / arrival rate
  double mean_delay_ts_all = 0;           // s, across all delivered units
  std::vector<double> mean_q_tot;         // raw end-of-slot averages
  std::vector<double> oos_rate_queue;     // per-slot events / horizon
  std::vector<double> oos_rate_delay;     // delivered violations / delivered
  std::vector<double> final_z_over_t;
  std::vector<double> final_y_over_t;
  std::vector<double> delta_final;
  std::vector<Count> created, delivered, in_queue;
};

struct EpisodeOptions {
  bool per_slot_records = true;
  bool keep_delays = true;       // per-UE delivered delays (survivor function)
  bool track_delta = false;      // per-UE delta trajectory
};

struct MetricsLog {
  EpisodeOptions opt;
  std::vector<SlotRecord> slots;
  std::vector<std::vector<double>> delays;      // per UE, seconds
  std::vector<std::vector<double>> delta_traj;  // per UE per slot
  EpisodeAggregates agg;

  // 1 - CDF of delivered delays for UE k, evaluated at d seconds
  double survivor(std::size_t k, double d) const;
};

// Poisson draw with the given per-slot mean.
Count sample_arrivals(double rate, Rng& rng);

// One control-and-update cycle: channels, bandwidth shares, radio + CPU
// solvers under the strategy mask, queue and virtual-queue updates, delta
// adaptation, and energy accounting.
Decision run_slot(SlotState& st, const ScenarioConfig& cfg, const SnrCache& snr,
                  Rng& channel_rng, Rng& arrival_rng, MetricsLog* log);

MetricsLog run_episode(const ScenarioConfig& cfg, Count horizon,
                       std::uint64_t seed, const EpisodeOptions& opt = {});

// Draws per-UE positions and the randomized parameters of the spec.
ScenarioConfig randomize_scenario(ScenarioConfig base,
                                  const RandomizationSpec& spec, Rng& rng);

std::uint64_t realization_seed(std::uint64_t master_seed, int realization);

struct MonteCarloResult {
  std::vector<EpisodeAggregates> episodes;
  double mean_e_w = 0, ci_e_w = 0;
  double mean_e_tot = 0, ci_e_tot = 0;
  double mean_e_u = 0, mean_e_a = 0, mean_e_m = 0;
  double mean_delay = 0, ci_delay = 0;  // s, delivered-unit mean
  double duty_ap = 0, duty_es = 0, duty_ue = 0;
};

// Independent realizations (randomized per the config's randomization spec
// when present), fanned out over `jobs` workers; results do not depend on
// the parallelism degree.
MonteCarloResult run_monte_carlo(const ScenarioConfig& base, Count horizon,
                                 int n_realizations, int jobs,
                                 std::uint64_t master_seed,
                                 const EpisodeOptions& opt = {});

double mean_of(const std::vector<double>& xs);
double ci95_of(const std::vector<double>& xs);  // 1.96 sd / sqrt(n)

}  // namespace disco
