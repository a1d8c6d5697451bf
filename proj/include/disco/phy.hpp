#pragma once
// Channel realization, PER-driven link adaptation primitives, and per-slot
// transmittable data-unit counts.

#include <map>
#include <memory>
#include <string>

#include "disco/rng.hpp"
#include "disco/types.hpp"

namespace disco {

struct LinkBudget {
  double gain = 1.0;         // linear power gain h
  double bandwidth = 0.0;    // Hz
  double noise_power = 0.0;  // W, N0 * B * NF
};

// Receiver noise power over a bandwidth, noise figure included.
double noise_power(const PhyConfig& phy, double bandwidth);

// Close-in reference path loss PL(dB) = PL_ref + 10 n log10(d).
double path_loss_db(const PhyConfig& phy, double dist_m);

// Path loss as a linear power gain (the fading-free mean channel gain).
double mean_channel_gain(const PhyConfig& phy, double dist_m);

// Path loss x unit-mean exponential fading draw, i.i.d. across calls.
// When phy.fading is off the draw is fixed to 1. Zero distance rejected.
double sample_channel_gain(const Vec2& ue_pos, const Vec2& ap_pos,
                           const PhyConfig& phy, Rng& rng);

// Gray-mapped square M-QAM over AWGN with coding folded in as an SNR offset
// of 10*log10(1/Rc)*g dB; packet error 1-(1-BER)^Nb.
class PerModel {
 public:
  virtual ~PerModel() = default;
  virtual double per(const McsScheme& mcs, double snr, double packet_bits) const = 0;
};

class QamPerModel final : public PerModel {
 public:
  explicit QamPerModel(double coding_gain_exponent = 1.5)
      : g_(coding_gain_exponent) {}
  double per(const McsScheme& mcs, double snr, double packet_bits) const override;
  static double bit_error_rate(int modulation_order, double snr);

 private:
  double g_;
};

// Smallest SNR meeting the PER target, found by bisection on the model to
// 1e-3 relative tolerance. Monotone nondecreasing in M and Rc, nonincreasing
// in the target.
double required_snr(const PerModel& model, const McsScheme& mcs,
                    double target_per, double packet_bits);

// p_tx_min = gamma_bar * noise_power / gain
double min_tx_power(double gamma_bar, const LinkBudget& link);

// N_s = floor(tau B); N_p = floor(N_s log2(M) Rc / Nb); floor(N_p Nb / S).
Count uplink_units(const McsScheme& mcs, double bandwidth, double tau,
                   double unit_bits, double packet_bits);
Count downlink_units(const McsScheme& mcs, double bandwidth, double tau,
                     double unit_bits, double packet_bits);

// Optional CSV override of required_snr: rows "modulation,code_rate,gamma".
class SnrTable {
 public:
  static SnrTable from_csv(const std::string& path);
  static SnrTable from_string(const std::string& text);
  std::optional<double> lookup(const McsScheme& mcs) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<int, int>, double> entries_;  // (M, Rc*1e6) -> gamma
};

}  // namespace disco
