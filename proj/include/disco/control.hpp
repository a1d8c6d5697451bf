#pragma once
// Outer-loop adaptation of the queue-threshold factor delta, out-of-service
// probability estimation, and bandwidth allocation policies.

#include <deque>
#include <vector>

#include "disco/queueing.hpp"
#include "disco/types.hpp"

namespace disco {

// Fraction of windowed delays exceeding d_max; empty window -> 0.
double estimate_oos_probability(const std::deque<double>& delay_window,
                                double d_max);

// Diminishing stepsize nu0 / t^beta, t >= 1.
double stepsize(double nu0, double beta, Count t);

// max(delta_prev - nu (p_hat - epsilon), 1)
double update_delta(double delta_prev, double nu_t, double p_hat,
                    double epsilon);

struct BandwidthShares {
  std::vector<double> ul;  // Hz per UE
  std::vector<double> dl;
};

// equal: B/K each. heuristic: proportional to the positive pressure terms,
// zero for UEs outside the positive set.
BandwidthShares allocate_bandwidth(const std::vector<PressureTerms>& pressures,
                                   BandwidthPolicy policy, double total_bw_ul,
                                   double total_bw_dl);

}  // namespace disco
