#pragma once
// Domain types shared by every module: slot layout, power models, MCS,
// constraints, the per-slot state and the per-slot control decision.

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace disco {

using Count = std::int64_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

// tau_l = tau_s + tau; tau_s covers signaling and sleep/active transitions,
// tau is the portion available for offloading.
struct SlotTiming {
  double tau_l = 0.010;  // s
  double tau_s = 0.001;  // s
  double tau = 0.009;    // s
};

struct ApPowerModel {
  double p_on = 2.2;      // W, active baseline
  double p_sleep = 0.278;  // W
  double p_dl_max = 0.251;  // W, total downlink transmit budget
};

// Consumed power vs radiated power: two linear segments with a knee.
// Defaults give ~1.45 W consumed at 100 mW radiated.
struct TxPowerCurve {
  double slope_low = 10.0;
  double slope_high = 15.0;
  double knee = 0.010;  // W radiated

  double operator()(double p_tx) const {
    const double lo = p_tx < knee ? p_tx : knee;
    const double hi = p_tx > knee ? p_tx - knee : 0.0;
    return slope_low * lo + slope_high * hi;
  }
};

struct ConstraintSpec {
  double d_avg = 0.100;       // s, average end-to-end delay bound
  double d_max = 0.250;       // s, out-of-service delay threshold
  double epsilon = 1e-2;      // out-of-service probability target
  double mu = 10.0;           // Y-queue stepsize
  double per_target_ul = 1e-4;
  double per_target_dl = 1e-4;
  std::optional<double> delta_init;  // per-UE override of the global default
  std::optional<double> nu_init;
};

struct UeProfile {
  double p_on = 0.9;      // W
  double p_sleep = 0.346;  // W
  double p_tx_max = 0.1;   // W radiated
  TxPowerCurve tx_power_curve;
  double input_unit_bits = 1000.0;   // S^i
  double output_unit_bits = 100.0;   // S^o
  double units_per_cycle = 1e-4;     // J: data units processed per CPU cycle
  double arrival_rate = 5.0;         // units per slot
  std::optional<double> arrival_max;  // bound used by diagnostics
  Vec2 position;                      // m
  ConstraintSpec constraints;
};

struct McsScheme {
  int modulation_order = 4;  // M-QAM
  double code_rate = 0.5;    // in (0, 1]
};

struct CpuModel {
  std::vector<double> freq_set;  // cycles/s, ascending, must contain 0
  double kappa = 1e-27;          // W s^3 / cycle^3
  double p_on = 20.0;            // W
  double p_sleep = 10.0;         // W

  double f_max() const { return freq_set.empty() ? 0.0 : freq_set.back(); }
};

std::vector<double> default_freq_set(double f_max = 4.5e9, int steps = 10);

struct PhyConfig {
  double total_bw_ul = 5e6;   // Hz
  double total_bw_dl = 5e6;   // Hz
  double packet_bits = 12000.0;  // N_b
  double noise_psd_dbm_hz = -174.0;
  double noise_figure_db = 5.0;
  double carrier_freq = 28e9;       // Hz
  double pathloss_exponent = 2.0;
  double pathloss_ref_db = 61.34;   // dB at 1 m
  bool fading = true;               // Rayleigh block fading on/off

  double noise_psd() const;  // W/Hz including nothing but the PSD itself
};

struct LyapunovConfig {
  double v = 5e6;
  std::array<double, 3> alphas = {1.0 / 3, 1.0 / 3, 1.0 / 3};  // UE, AP, ES
  double delta_init = 1.0;
  double nu_init = 15.0;
  double beta = 0.5;             // in (0, 1]
  std::size_t window_max = 10000;
  bool adapt_delta = true;
};

enum class BandwidthPolicy { equal, heuristic };
enum class ArrivalProcess { poisson, constant };

struct StrategyPreset {
  std::string name = "holistic";
  std::optional<std::array<double, 3>> alphas;
  bool force_ap_on = false;
  bool force_ue_on = false;
  bool force_es_on = false;
  bool equal_cpu_split = false;
  BandwidthPolicy bandwidth_policy = BandwidthPolicy::equal;
};

// holistic, ue_centric, ap_centric, es_centric, no_sleep, radio_sleep,
// es_sleep, equal_fk. Throws std::invalid_argument on anything else.
StrategyPreset strategy_preset(const std::string& name);
const std::vector<std::string>& strategy_preset_names();

// Per-realization parameter draws for Monte Carlo runs.
struct RandomizationSpec {
  double area_side = 150.0;  // m, UE positions uniform in the square
  std::array<double, 2> input_bits_log10 = {2.0, 3.0};
  std::array<double, 2> output_bits_log10 = {1.0, 3.0};
  std::array<double, 2> units_per_cycle_log10 = {-5.0, -2.0};
  std::array<double, 2> arrival_rate = {5.0, 15.0};
};

struct ScenarioConfig {
  SlotTiming timing;
  ApPowerModel ap;
  CpuModel cpu;
  PhyConfig phy;
  std::vector<McsScheme> mcs_ul;
  std::vector<McsScheme> mcs_dl;
  double coding_gain_exponent = 1.5;  // SNR offset 10*log10(1/Rc)*g dB
  std::optional<std::string> snr_table_csv;  // (M, R, gamma) override
  Vec2 ap_position;
  std::vector<UeProfile> ues;
  LyapunovConfig lyapunov;
  StrategyPreset strategy;
  ArrivalProcess arrival_process = ArrivalProcess::poisson;
  std::optional<RandomizationSpec> randomization;

  // filled by validate_config
  std::vector<double> q_avg;  // per UE, units

  std::size_t n_ues() const { return ues.size(); }
  std::array<double, 3> effective_alphas() const {
    return strategy.alphas ? *strategy.alphas : lyapunov.alphas;
  }
  double delta_init(std::size_t k) const {
    return ues[k].constraints.delta_init.value_or(lyapunov.delta_init);
  }
  double nu_init(std::size_t k) const {
    return ues[k].constraints.nu_init.value_or(lyapunov.nu_init);
  }
};

std::vector<McsScheme> default_mcs_set();

// One offloaded unit of work, timestamped at creation.
struct DataUnit {
  std::int32_t owner = 0;
  Count birth_slot = 0;
};

// Ring buffer of delivered-unit delays with an incremental over-threshold
// count, so the out-of-service estimate stays O(1) per slot.
class DelayWindow {
 public:
  DelayWindow() = default;
  DelayWindow(std::size_t cap, double d_max) : cap_(cap), d_max_(d_max) {}

  void push(double delay_s) {
    vals_.push_back(delay_s);
    if (delay_s > d_max_) ++over_;
    if (vals_.size() > cap_) {
      if (vals_.front() > d_max_) --over_;
      vals_.pop_front();
    }
  }

  bool empty() const { return vals_.empty(); }
  std::size_t size() const { return vals_.size(); }
  double d_max() const { return d_max_; }
  const std::deque<double>& values() const { return vals_; }

  // fraction of windowed delays exceeding d_max; 0 with no evidence yet
  double oos_fraction() const {
    return vals_.empty() ? 0.0
                         : static_cast<double>(over_) / static_cast<double>(vals_.size());
  }

 private:
  std::deque<double> vals_;
  std::size_t cap_ = 10000;
  double d_max_ = 0.0;
  std::size_t over_ = 0;
};

struct UeState {
  std::deque<DataUnit> q_local;    // Q^l
  std::deque<DataUnit> q_compute;  // Q^m
  std::deque<DataUnit> q_result;   // Q^a
  double z = 0.0;
  double y = 0.0;
  double delta = 1.0;
  double gain_ul = 0.0;
  double gain_dl = 0.0;
  DelayWindow delay_window;
  Count created = 0;
  Count delivered = 0;
  Count oos_queue_slots = 0;   // slots with Q_tot(t+1) > delta*Q_avg
  Count oos_deliveries = 0;    // delivered units with delay > d_max
};

struct SlotState {
  Count t = 0;  // completed slots; the next slot executed is t+1 (1-based)
  std::vector<UeState> ues;
};

SlotState make_initial_state(const ScenarioConfig& cfg);

struct UeDecision {
  bool active = false;  // I_k
  std::optional<int> mcs_ul;  // index into ScenarioConfig::mcs_ul
  std::optional<int> mcs_dl;
  double p_tx = 0.0;  // W radiated
  double p_dl = 0.0;  // W
  Count n_ul = 0;
  Count n_dl = 0;
  double f_k = 0.0;   // cycles/s
  Count n_comp = 0;
};

struct Decision {
  bool ap_active = false;  // I_a
  bool es_active = false;  // I_m, equals f_c > 0
  double f_c = 0.0;
  std::vector<UeDecision> ues;
};

// Single reusable invariant assertion; throws std::logic_error on violation.
void check_decision(const Decision& d, const ScenarioConfig& cfg);

}  // namespace disco
