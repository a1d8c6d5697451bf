#pragma once
// Per-slot energy accounting for the AP, the UEs and the edge server.

#include <array>

#include "disco/types.hpp"

namespace disco {

// tau (I_a (p_on + p_dl) + (1 - I_a) p_sleep) + tau_s p_on.
// Requires p_dl_total = 0 when the AP sleeps.
double ap_energy(bool ap_active, double p_dl_total, const ApPowerModel& m,
                 const SlotTiming& t);

// tau (I_k (p_on + curve(p_tx)) + (1 - I_k) p_sleep) + tau_s p_on, one UE.
// Requires p_tx = 0 when sleeping and p_tx <= p_tx_max.
double ue_energy(bool ue_active, double p_tx, const UeProfile& prof,
                 const SlotTiming& t);

// tau (I_m p_on + (1 - I_m) p_sleep + kappa f_c^3) + tau_s p_on, with
// I_m = 1{f_c > 0}. f_c must belong to the configured frequency set.
double es_energy(double f_c, const CpuModel& m, const SlotTiming& t);

struct WeightedEnergy {
  double weighted = 0.0;  // alpha1 E_u + alpha2 E_a + alpha3 E_m
  double total = 0.0;     // E_u + E_a + E_m
};

WeightedEnergy weighted_energy(double e_u, double e_a, double e_m,
                               const std::array<double, 3>& alphas);

}  // namespace disco
