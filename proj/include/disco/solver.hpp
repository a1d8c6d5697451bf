#pragma once
// Per-slot optimizer: radio resource allocation (MCS, powers, sleep flags)
// and edge-server CPU scheduling, plus the objective evaluators used for
// oracle verification and diagnostics.

#include <optional>
#include <span>
#include <vector>

#include "disco/queueing.hpp"
#include "disco/types.hpp"

namespace disco {

// Everything the per-slot solvers need to know about one UE.
struct UeSlotView {
  QueueSnapshot q;
  double zy = 0.0;       // z + mu y
  double q_tilde = 0.0;  // 4(q_m - q_a) + zy
  double delta = 1.0;
  double bw_ul = 0.0;
  double bw_dl = 0.0;
  double gain_ul = 0.0;
  double gain_dl = 0.0;
};

std::vector<UeSlotView> make_views(const SlotState& st,
                                   const ScenarioConfig& cfg,
                                   const std::vector<double>& bw_ul,
                                   const std::vector<double>& bw_dl);

// Channel-independent SNR thresholds per UE per MCS (PER targets differ per
// UE and per direction). Honors the optional CSV table override.
struct SnrCache {
  std::vector<std::vector<double>> ul;  // [ue][mcs index]
  std::vector<std::vector<double>> dl;
  static SnrCache build(const ScenarioConfig& cfg);
};

struct LinkChoice {
  std::optional<int> mcs;  // nullopt: no transmission
  double power = 0.0;      // radiated (uplink) / AP transmit (downlink)
  Count n = 0;             // transferable data units
  double objective = 0.0;  // variable part of the per-direction objective
};

// Exhaustive search over the PER-feasible MCS subset at minimum power, plus
// the explicit idle option. Objective:
//   (4 q_m - 2 q_l) N_u + zy max(0, q_l - N_u) + V a1 tau p_u(p_tx)
LinkChoice solve_uplink(const UeSlotView& u, const UeProfile& prof,
                        const ScenarioConfig& cfg,
                        std::span<const double> gamma_ul);

//   -4 q_a N_d + zy max(0, q_a - N_d) + V a2 tau p_dl,  p_dl <= p_dl_max/K
LinkChoice solve_downlink(const UeSlotView& u, const UeProfile& prof,
                          const ScenarioConfig& cfg,
                          std::span<const double> gamma_dl);

struct UeRadio {
  bool active = false;
  LinkChoice ul;
  LinkChoice dl;
  double l_sleep = 0.0;   // L_k^s
  double l_active = 0.0;  // L_k^a
};

struct RadioSolution {
  std::vector<UeRadio> ues;
  bool ap_active = false;
  double l_sleep = 0.0;   // L^s, all-sleep value
  double l_active = 0.0;  // L^a, AP-active value with optimal per-UE flags
  double objective = 0.0;  // min of the two
};

RadioSolution solve_radio(std::span<const UeSlotView> views,
                          const ScenarioConfig& cfg, const SnrCache& snr);

struct CpuSolution {
  double f_c = 0.0;
  bool es_active = false;
  std::vector<double> f_k;
  double objective = 0.0;  // L_c at the chosen f_c
};

// Greedy fill in decreasing J_k * q_tilde_k (LP-optimal at fixed f_c),
// outer search over the frequency set. The strategy preset may force the ES
// on or replace the greedy with an equal split.
CpuSolution solve_cpu(std::span<const UeSlotView> views,
                      const ScenarioConfig& cfg);

Decision assemble_decision(const RadioSolution& radio, const CpuSolution& cpu,
                           const ScenarioConfig& cfg);

// Objective of an arbitrary radio assignment, organized exactly like the
// solver's internal bookkeeping so solver-vs-enumeration comparisons are
// bit-exact. Reads mcs/power/unit counts from the Decision's radio part.
double radio_objective(std::span<const UeSlotView> views,
                       const ScenarioConfig& cfg, const Decision& d);

// Objective of an arbitrary CPU assignment (Eq.-(26)-shaped L_c).
double cpu_objective(std::span<const UeSlotView> views,
                     const ScenarioConfig& cfg, double f_c,
                     std::span<const double> f_k);

// Approximate per-slot objective (the one the solvers minimize, with the
// true weighted energy in place of the per-part constants).
double eval_gamma_objective(std::span<const UeSlotView> views,
                            const ScenarioConfig& cfg, const Decision& d);

// Exact drift-plus-penalty upper-bound objective including the step term;
// diagnostics only. `arrivals` are this slot's A_k.
double eval_exact_objective(std::span<const UeSlotView> views,
                            const ScenarioConfig& cfg, const Decision& d,
                            std::span<const Count> arrivals);

// Per-UE capacity bounds used by the exact objective and by zeta.
struct UeCapacityBounds {
  Count n_ul_max = 0;
  Count n_dl_max = 0;
  Count n_comp_max = 0;
};
std::vector<UeCapacityBounds> capacity_bounds(const ScenarioConfig& cfg);

// Drift bound constant: sum over UEs of A_max^2 + 3 Nu_max^2 + 4 Nc_max^2 +
// 2 Nd_max^2 + Q_avg^2/2 + mu^2 (1-eps)^2 / 2. Requires arrival_max on every
// UE profile.
double compute_zeta(const ScenarioConfig& cfg);

}  // namespace disco
