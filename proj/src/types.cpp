#include "disco/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace disco {

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double PhyConfig::noise_psd() const {
  return std::pow(10.0, (noise_psd_dbm_hz - 30.0) / 10.0);
}

std::vector<double> default_freq_set(double f_max, int steps) {
  std::vector<double> f;
  f.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i) f.push_back(f_max * i / steps);
  return f;
}

std::vector<McsScheme> default_mcs_set() {
  std::vector<McsScheme> set;
  for (int m : {4, 16, 64, 256})
    for (double r : {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9})
      set.push_back({m, r});
  return set;
}

const std::vector<std::string>& strategy_preset_names() {
  static const std::vector<std::string> names = {
      "holistic",  "ue_centric", "ap_centric", "es_centric",
      "no_sleep",  "radio_sleep", "es_sleep",  "equal_fk"};
  return names;
}

StrategyPreset strategy_preset(const std::string& name) {
  StrategyPreset p;
  p.name = name;
  if (name == "holistic") {
    // config alphas apply unchanged
  } else if (name == "ue_centric") {
    p.alphas = {{1.0, 0.0, 0.0}};
  } else if (name == "ap_centric") {
    p.alphas = {{0.0, 1.0, 0.0}};
  } else if (name == "es_centric") {
    p.alphas = {{0.0, 0.0, 1.0}};
  } else if (name == "no_sleep") {
    p.force_ap_on = p.force_ue_on = p.force_es_on = true;
  } else if (name == "radio_sleep") {
    p.force_es_on = true;  // only the ES stays awake
  } else if (name == "es_sleep") {
    p.force_ap_on = p.force_ue_on = true;
  } else if (name == "equal_fk") {
    p.equal_cpu_split = true;
  } else {
    std::string msg = "unknown strategy preset '" + name + "'; valid:";
    for (const auto& n : strategy_preset_names()) msg += " " + n;
    throw std::invalid_argument(msg);
  }
  return p;
}

SlotState make_initial_state(const ScenarioConfig& cfg) {
  SlotState st;
  st.ues.resize(cfg.n_ues());
  for (std::size_t k = 0; k < cfg.n_ues(); ++k) {
    auto& ue = st.ues[k];
    ue.delta = cfg.delta_init(k);
    ue.delay_window = DelayWindow(cfg.lyapunov.window_max,
                                  cfg.ues[k].constraints.d_max);
  }
  return st;
}

namespace {
constexpr double kRelTol = 1e-9;

bool in_freq_set(double f, const std::vector<double>& set) {
  for (double g : set)
    if (std::abs(f - g) <= kRelTol * std::max(1.0, std::abs(g))) return true;
  return false;
}

void fail(const std::string& what) { throw std::logic_error("decision invariant violated: " + what); }
}  // namespace

void check_decision(const Decision& d, const ScenarioConfig& cfg) {
  const std::size_t k_count = cfg.n_ues();
  if (d.ues.size() != k_count) fail("per-UE vector size mismatch");
  if (d.es_active != (d.f_c > 0.0)) fail("I_m must equal 1{f_c > 0}");
  if (!in_freq_set(d.f_c, cfg.cpu.freq_set)) fail("f_c outside the frequency set");

  double f_sum = 0.0;
  double p_dl_sum = 0.0;
  const double p_dl_cap = cfg.ap.p_dl_max / static_cast<double>(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto& u = d.ues[k];
    if (!d.ap_active) {
      if (u.active || u.n_ul != 0 || u.n_dl != 0 || u.p_tx != 0.0 || u.p_dl != 0.0)
        fail("AP asleep but UE " + std::to_string(k) + " has radio activity");
    }
    if (!u.active) {
      if (u.n_ul != 0 || u.n_dl != 0 || u.p_tx != 0.0 || u.p_dl != 0.0 ||
          u.mcs_ul || u.mcs_dl)
        fail("UE " + std::to_string(k) + " asleep but has radio variables set");
    }
    if (u.p_tx < 0.0 || u.p_tx > cfg.ues[k].p_tx_max * (1.0 + kRelTol))
      fail("p_tx out of range for UE " + std::to_string(k));
    if (u.p_dl < 0.0 || u.p_dl > p_dl_cap * (1.0 + kRelTol))
      fail("p_dl above per-UE budget for UE " + std::to_string(k));
    if (u.f_k < 0.0) fail("negative f_k for UE " + std::to_string(k));
    f_sum += u.f_k;
    p_dl_sum += u.p_dl;
  }
  if (f_sum > d.f_c * (1.0 + kRelTol) + 1e-12) fail("sum f_k exceeds f_c");
  if (p_dl_sum > cfg.ap.p_dl_max * (1.0 + kRelTol)) fail("total downlink power above budget");
}

}  // namespace disco
