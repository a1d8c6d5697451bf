#pragma once
// Real queue dynamics (local -> compute -> result), the virtual queues Z and
// Y, and the composite pressure terms used by the solvers.

#include <vector>

#include "disco/types.hpp"

namespace disco {

struct QueueSnapshot {
  Count q_l = 0;
  Count q_m = 0;
  Count q_a = 0;
  double z = 0.0;
  double y = 0.0;
  Count q_tot = 0;  // q_l + q_m + q_a
};

QueueSnapshot snapshot(const UeState& ue);

struct PressureTerms {
  double q_tilde = 0.0;     // 4(q_m - q_a) + z + mu y
  double q_tilde_ul = 0.0;  // 4 q_m - 2 q_l + (z + mu y) q_l
  double q_tilde_dl = 0.0;  // 4 q_a + (z + mu y) q_a
};

PressureTerms pressure_terms(const QueueSnapshot& s, double mu);

// floor(tau f_k J_k)
Count compute_units(double f_k, double units_per_cycle, double tau);

// Departs min(Q_l, n_ul) oldest units (returned as the transfer set), then
// appends `arrivals` fresh units stamped with slot t.
std::vector<DataUnit> serve_and_arrive_local(UeState& ue, Count n_ul,
                                             Count arrivals, Count t,
                                             std::int32_t owner);

// Departs min(Q_m, n_c) oldest units (returned, headed for the result
// queue), then appends the units transferred from the local queue.
std::vector<DataUnit> serve_compute_queue(UeState& ue, Count n_c,
                                          std::vector<DataUnit> inbound);

struct DeliveredUnit {
  DataUnit unit;
  double delay_s = 0.0;  // (t + 1 - birth_slot) * tau_l
};

// Departs min(Q_a, n_dl) oldest units and records each end-to-end delay,
// then appends the units forwarded from the compute queue.
std::vector<DeliveredUnit> serve_result_queue(UeState& ue, Count n_dl,
                                              std::vector<DataUnit> inbound,
                                              Count t, double tau_l);

// max(0, z + q_tot_next - q_avg)
double update_virtual_z(double z, Count q_tot_next, double q_avg);

// max(0, y + mu (1{q_tot_next > delta q_avg} - epsilon))
double update_virtual_y(double y, Count q_tot_next, double delta, double q_avg,
                        double mu, double epsilon);

}  // namespace disco
