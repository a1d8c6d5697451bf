#include "disco/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace disco {

double ap_energy(bool ap_active, double p_dl_total, const ApPowerModel& m,
                 const SlotTiming& t) {
  if (!ap_active && p_dl_total != 0.0)
    throw std::invalid_argument("ap_energy: downlink power while asleep");
  const double p = ap_active ? m.p_on + p_dl_total : m.p_sleep;
  return t.tau * p + t.tau_s * m.p_on;
}

double ue_energy(bool ue_active, double p_tx, const UeProfile& prof,
                 const SlotTiming& t) {
  if (!ue_active && p_tx != 0.0)
    throw std::invalid_argument("ue_energy: transmit power while asleep");
  if (p_tx > prof.p_tx_max * (1.0 + 1e-9))
    throw std::invalid_argument("ue_energy: p_tx above budget");
  const double p = ue_active ? prof.p_on + prof.tx_power_curve(p_tx) : prof.p_sleep;
  return t.tau * p + t.tau_s * prof.p_on;
}

double es_energy(double f_c, const CpuModel& m, const SlotTiming& t) {
  bool known = false;
  for (double g : m.freq_set)
    if (std::abs(f_c - g) <= 1e-9 * std::max(1.0, std::abs(g))) known = true;
  if (!known) throw std::invalid_argument("es_energy: f_c outside the frequency set");
  const double base = f_c > 0.0 ? m.p_on : m.p_sleep;
  return t.tau * (base + m.kappa * f_c * f_c * f_c) + t.tau_s * m.p_on;
}

WeightedEnergy weighted_energy(double e_u, double e_a, double e_m,
                               const std::array<double, 3>& alphas) {
  return {alphas[0] * e_u + alphas[1] * e_a + alphas[2] * e_m,
          e_u + e_a + e_m};
}

}  // namespace disco
