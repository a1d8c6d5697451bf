#include "disco/phy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace disco {

double noise_power(const PhyConfig& phy, double bandwidth) {
  const double nf = std::pow(10.0, phy.noise_figure_db / 10.0);
  return phy.noise_psd() * bandwidth * nf;
}

double path_loss_db(const PhyConfig& phy, double dist_m) {
  return phy.pathloss_ref_db + 10.0 * phy.pathloss_exponent * std::log10(dist_m);
}

double mean_channel_gain(const PhyConfig& phy, double dist_m) {
  return std::pow(10.0, -path_loss_db(phy, dist_m) / 10.0);
}

double sample_channel_gain(const Vec2& ue_pos, const Vec2& ap_pos,
                           const PhyConfig& phy, Rng& rng) {
  const double d = distance(ue_pos, ap_pos);
  if (d <= 0.0) throw std::invalid_argument("sample_channel_gain: zero distance");
  const double fade = phy.fading ? rng.exponential() : 1.0;
  return mean_channel_gain(phy, d) * fade;
}

double QamPerModel::bit_error_rate(int modulation_order, double snr) {
  const double m = static_cast<double>(modulation_order);
  const double bits = std::log2(m);
  const double arg = std::sqrt(3.0 * snr / (m - 1.0));
  const double q = 0.5 * std::erfc(arg / std::sqrt(2.0));
  const double ber = (4.0 / bits) * (1.0 - 1.0 / std::sqrt(m)) * q;
  return std::clamp(ber, 0.0, 1.0);
}

double QamPerModel::per(const McsScheme& mcs, double snr, double packet_bits) const {
  // coding gain as an SNR boost of 10*log10(1/Rc)*g dB
  const double boost = std::pow(1.0 / mcs.code_rate, g_);
  const double ber = bit_error_rate(mcs.modulation_order, snr * boost);
  if (ber >= 1.0) return 1.0;
  return -std::expm1(packet_bits * std::log1p(-ber));
}

double required_snr(const PerModel& model, const McsScheme& mcs,
                    double target_per, double packet_bits) {
  if (target_per <= 0.0 || target_per >= 1.0)
    throw std::invalid_argument("required_snr: target PER must be in (0,1)");
  if (model.per(mcs, 0.0, packet_bits) <= target_per) return 0.0;
  double hi = 1.0;
  while (model.per(mcs, hi, packet_bits) > target_per) {
    hi *= 2.0;
    if (hi > 1e12) return hi;  // unreachable under the default model
  }
  double lo = hi / 2.0;
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (model.per(mcs, mid, packet_bits) <= target_per)
      hi = mid;
    else
      lo = mid;
  }
  return hi;  // feasible endpoint: PER(hi) <= target
}

double min_tx_power(double gamma_bar, const LinkBudget& link) {
  if (link.gain <= 0.0) throw std::invalid_argument("min_tx_power: gain must be positive");
  return gamma_bar * link.noise_power / link.gain;
}

namespace {
Count transferable_units(const McsScheme& mcs, double bandwidth, double tau,
                         double unit_bits, double packet_bits) {
  if (bandwidth <= 0.0 || tau <= 0.0) return 0;
  const double n_symbols = std::floor(tau * bandwidth);
  const double coded_bits = n_symbols * std::log2(static_cast<double>(mcs.modulation_order)) * mcs.code_rate;
  const double n_packets = std::floor(coded_bits / packet_bits);
  return static_cast<Count>(std::floor(n_packets * packet_bits / unit_bits));
}
}  // namespace

Count uplink_units(const McsScheme& mcs, double bandwidth, double tau,
                   double unit_bits, double packet_bits) {
  return transferable_units(mcs, bandwidth, tau, unit_bits, packet_bits);
}

Count downlink_units(const McsScheme& mcs, double bandwidth, double tau,
                     double unit_bits, double packet_bits) {
  return transferable_units(mcs, bandwidth, tau, unit_bits, packet_bits);
}

SnrTable SnrTable::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("SnrTable: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

SnrTable SnrTable::from_string(const std::string& text) {
  SnrTable t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double m = 0, r = 0, gamma = 0;
    if (!(row >> m >> r >> gamma)) continue;
    if (m == 0) continue;  // header row
    t.entries_[{static_cast<int>(m), static_cast<int>(std::lround(r * 1e6))}] = gamma;
  }
  return t;
}

std::optional<double> SnrTable::lookup(const McsScheme& mcs) const {
  auto it = entries_.find({mcs.modulation_order, static_cast<int>(std::lround(mcs.code_rate * 1e6))});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

}  // namespace disco
