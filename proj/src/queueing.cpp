#include "disco/queueing.hpp"

#include <algorithm>
#include <cmath>

namespace disco {

QueueSnapshot snapshot(const UeState& ue) {
  QueueSnapshot s;
  s.q_l = static_cast<Count>(ue.q_local.size());
  s.q_m = static_cast<Count>(ue.q_compute.size());
  s.q_a = static_cast<Count>(ue.q_result.size());
  s.z = ue.z;
  s.y = ue.y;
  s.q_tot = s.q_l + s.q_m + s.q_a;
  return s;
}

PressureTerms pressure_terms(const QueueSnapshot& s, double mu) {
  const double zy = s.z + mu * s.y;
  PressureTerms p;
  p.q_tilde = 4.0 * static_cast<double>(s.q_m - s.q_a) + zy;
  p.q_tilde_ul = 4.0 * s.q_m - 2.0 * s.q_l + zy * s.q_l;
  p.q_tilde_dl = 4.0 * s.q_a + zy * s.q_a;
  return p;
}

Count compute_units(double f_k, double units_per_cycle, double tau) {
  return static_cast<Count>(std::floor(tau * f_k * units_per_cycle));
}

namespace {
// Pop min(queue, n) oldest units.
std::vector<DataUnit> pop_front_units(std::deque<DataUnit>& q, Count n) {
  const Count dep = std::min<Count>(static_cast<Count>(q.size()), std::max<Count>(0, n));
  std::vector<DataUnit> out(q.begin(), q.begin() + dep);
  q.erase(q.begin(), q.begin() + dep);
  return out;
}
}  // namespace

std::vector<DataUnit> serve_and_arrive_local(UeState& ue, Count n_ul,
                                             Count arrivals, Count t,
                                             std::int32_t owner) {
  auto transferred = pop_front_units(ue.q_local, n_ul);
  for (Count i = 0; i < arrivals; ++i) ue.q_local.push_back({owner, t});
  ue.created += std::max<Count>(0, arrivals);
  return transferred;
}

std::vector<DataUnit> serve_compute_queue(UeState& ue, Count n_c,
                                          std::vector<DataUnit> inbound) {
  auto forwarded = pop_front_units(ue.q_compute, n_c);
  for (const auto& u : inbound) ue.q_compute.push_back(u);
  return forwarded;
}

std::vector<DeliveredUnit> serve_result_queue(UeState& ue, Count n_dl,
                                              std::vector<DataUnit> inbound,
                                              Count t, double tau_l) {
  auto departing = pop_front_units(ue.q_result, n_dl);
  std::vector<DeliveredUnit> delivered;
  delivered.reserve(departing.size());
  for (const auto& u : departing)
    delivered.push_back({u, static_cast<double>(t + 1 - u.birth_slot) * tau_l});
  ue.delivered += static_cast<Count>(departing.size());
  for (const auto& u : inbound) ue.q_result.push_back(u);
  return delivered;
}

double update_virtual_z(double z, Count q_tot_next, double q_avg) {
  return std::max(0.0, z + static_cast<double>(q_tot_next) - q_avg);
}

double update_virtual_y(double y, Count q_tot_next, double delta, double q_avg,
                        double mu, double epsilon) {
  const double exceeded = static_cast<double>(q_tot_next) > delta * q_avg ? 1.0 : 0.0;
  return std::max(0.0, y + mu * (exceeded - epsilon));
}

}  // namespace disco
