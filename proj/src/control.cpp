#include "disco/control.hpp"

#include <cmath>
#include <stdexcept>

namespace disco {

double estimate_oos_probability(const std::deque<double>& delay_window,
                                double d_max) {
  if (delay_window.empty()) return 0.0;
  std::size_t over = 0;
  for (double d : delay_window)
    if (d > d_max) ++over;
  return static_cast<double>(over) / static_cast<double>(delay_window.size());
}

double stepsize(double nu0, double beta, Count t) {
  if (t < 1) throw std::invalid_argument("stepsize: t starts at 1");
  return nu0 / std::pow(static_cast<double>(t), beta);
}

double update_delta(double delta_prev, double nu_t, double p_hat,
                    double epsilon) {
  return std::max(delta_prev - nu_t * (p_hat - epsilon), 1.0);
}

BandwidthShares allocate_bandwidth(const std::vector<PressureTerms>& pressures,
                                   BandwidthPolicy policy, double total_bw_ul,
                                   double total_bw_dl) {
  const std::size_t k_count = pressures.size();
  BandwidthShares out;
  out.ul.assign(k_count, 0.0);
  out.dl.assign(k_count, 0.0);
  if (k_count == 0) return out;

  if (policy == BandwidthPolicy::equal) {
    for (std::size_t k = 0; k < k_count; ++k) {
      out.ul[k] = total_bw_ul / static_cast<double>(k_count);
      out.dl[k] = total_bw_dl / static_cast<double>(k_count);
    }
    return out;
  }

  double sum_ul = 0.0, sum_dl = 0.0;
  for (const auto& p : pressures) {
    if (p.q_tilde_ul > 0.0) sum_ul += p.q_tilde_ul;
    if (p.q_tilde_dl > 0.0) sum_dl += p.q_tilde_dl;
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    if (pressures[k].q_tilde_ul > 0.0)
      out.ul[k] = total_bw_ul * pressures[k].q_tilde_ul / sum_ul;
    if (pressures[k].q_tilde_dl > 0.0)
      out.dl[k] = total_bw_dl * pressures[k].q_tilde_dl / sum_dl;
  }
  return out;
}

}  // namespace disco
