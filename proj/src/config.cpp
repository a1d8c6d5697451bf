#include "disco/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace disco {

using json = nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error([&issues] {
        std::string msg = "invalid configuration:";
        for (const auto& s : issues) msg += "\n  - " + s;
        return msg;
      }()),
      issues_(std::move(issues)) {}

namespace {

struct Issues {
  std::vector<std::string> list;
  void add(const std::string& path, const std::string& msg) {
    list.push_back(path.empty() ? msg : path + ": " + msg);
  }
};

// Tracks consumed keys so unknown ones can be rejected with their path.
class Obj {
 public:
  Obj(const json& j, std::string path, Issues& issues)
      : j_(&j), path_(std::move(path)), issues_(&issues) {
    if (!j.is_object()) {
      issues_->add(path_, "expected an object");
      j_ = nullptr;
    }
  }

  bool has(const char* key) const { return j_ && j_->contains(key); }

  template <typename T>
  void get(const char* key, T& out) {
    if (!has(key)) return;
    seen_.insert(key);
    try {
      out = (*j_)[key].get<T>();
    } catch (const json::exception&) {
      issues_->add(path_ + "." + key, "wrong type");
    }
  }

  const json* child(const char* key) {
    if (!has(key)) return nullptr;
    seen_.insert(key);
    return &(*j_)[key];
  }

  void finish() {
    if (!j_) return;
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (!seen_.count(it.key()))
        issues_->add(path_ + "." + it.key(), "unknown key");
  }

  const std::string& path() const { return path_; }

 private:
  const json* j_;
  std::string path_;
  Issues* issues_;
  std::set<std::string> seen_;
};

Vec2 read_vec2(const json& j, const std::string& path, Issues& issues) {
  Vec2 v;
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    v.x = j[0].get<double>();
    v.y = j[1].get<double>();
  } else {
    issues.add(path, "expected [x, y]");
  }
  return v;
}

void read_timing(const json& j, const std::string& path, SlotTiming& t, Issues& issues) {
  Obj o(j, path, issues);
  o.get("tau_l", t.tau_l);
  o.get("tau_s", t.tau_s);
  o.get("tau", t.tau);
  o.finish();
}

void read_ap(const json& j, const std::string& path, ApPowerModel& m, Issues& issues) {
  Obj o(j, path, issues);
  o.get("p_on", m.p_on);
  o.get("p_sleep", m.p_sleep);
  o.get("p_dl_max", m.p_dl_max);
  o.finish();
}

void read_cpu(const json& j, const std::string& path, CpuModel& m, Issues& issues) {
  Obj o(j, path, issues);
  o.get("freq_set", m.freq_set);
  o.get("kappa", m.kappa);
  o.get("p_on", m.p_on);
  o.get("p_sleep", m.p_sleep);
  o.finish();
}

void read_phy(const json& j, const std::string& path, PhyConfig& p, Issues& issues) {
  Obj o(j, path, issues);
  o.get("total_bw_ul", p.total_bw_ul);
  o.get("total_bw_dl", p.total_bw_dl);
  o.get("packet_bits", p.packet_bits);
  o.get("noise_psd_dbm_hz", p.noise_psd_dbm_hz);
  o.get("noise_figure_db", p.noise_figure_db);
  o.get("carrier_freq", p.carrier_freq);
  o.get("pathloss_exponent", p.pathloss_exponent);
  o.get("pathloss_ref_db", p.pathloss_ref_db);
  o.get("fading", p.fading);
  o.finish();
}

std::vector<McsScheme> read_mcs_set(const json& j, const std::string& path, Issues& issues) {
  std::vector<McsScheme> set;
  if (!j.is_array()) {
    issues.add(path, "expected an array of [M, code_rate] pairs");
    return set;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
      set.push_back({e[0].get<int>(), e[1].get<double>()});
    else
      issues.add(path + "[" + std::to_string(i) + "]", "expected [M, code_rate]");
  }
  return set;
}

void read_constraints(const json& j, const std::string& path, ConstraintSpec& c, Issues& issues) {
  Obj o(j, path, issues);
  o.get("d_avg", c.d_avg);
  o.get("d_max", c.d_max);
  o.get("epsilon", c.epsilon);
  o.get("mu", c.mu);
  o.get("per_target_ul", c.per_target_ul);
  o.get("per_target_dl", c.per_target_dl);
  if (o.has("delta_init")) {
    double v = 0;
    o.get("delta_init", v);
    c.delta_init = v;
  }
  if (o.has("nu_init")) {
    double v = 0;
    o.get("nu_init", v);
    c.nu_init = v;
  }
  o.finish();
}

void read_ue(const json& j, const std::string& path, UeProfile& u, Issues& issues) {
  Obj o(j, path, issues);
  o.get("p_on", u.p_on);
  o.get("p_sleep", u.p_sleep);
  o.get("p_tx_max", u.p_tx_max);
  if (const json* c = o.child("tx_power_curve")) {
    Obj co(*c, path + ".tx_power_curve", issues);
    co.get("slope_low", u.tx_power_curve.slope_low);
    co.get("slope_high", u.tx_power_curve.slope_high);
    co.get("knee", u.tx_power_curve.knee);
    co.finish();
  }
  o.get("input_unit_bits", u.input_unit_bits);
  o.get("output_unit_bits", u.output_unit_bits);
  o.get("units_per_cycle", u.units_per_cycle);
  o.get("arrival_rate", u.arrival_rate);
  if (o.has("arrival_max")) {
    double v = 0;
    o.get("arrival_max", v);
    u.arrival_max = v;
  }
  if (const json* p = o.child("position"))
    u.position = read_vec2(*p, path + ".position", issues);
  if (const json* c = o.child("constraints"))
    read_constraints(*c, path + ".constraints", u.constraints, issues);
  o.finish();
}

void read_lyapunov(const json& j, const std::string& path, LyapunovConfig& l, Issues& issues) {
  Obj o(j, path, issues);
  o.get("v", l.v);
  o.get("alphas", l.alphas);
  o.get("delta_init", l.delta_init);
  o.get("nu_init", l.nu_init);
  o.get("beta", l.beta);
  std::int64_t w = static_cast<std::int64_t>(l.window_max);
  o.get("window_max", w);
  l.window_max = static_cast<std::size_t>(std::max<std::int64_t>(0, w));
  o.get("adapt_delta", l.adapt_delta);
  o.finish();
}

void read_strategy(const json& j, const std::string& path, StrategyPreset& s, Issues& issues) {
  Obj o(j, path, issues);
  std::string name = s.name;
  o.get("name", name);
  std::string bw = s.bandwidth_policy == BandwidthPolicy::heuristic ? "heuristic" : "equal";
  o.get("bandwidth_policy", bw);
  o.finish();
  try {
    s = strategy_preset(name);
  } catch (const std::invalid_argument& e) {
    issues.add(path + ".name", e.what());
    return;
  }
  if (bw == "equal")
    s.bandwidth_policy = BandwidthPolicy::equal;
  else if (bw == "heuristic")
    s.bandwidth_policy = BandwidthPolicy::heuristic;
  else
    issues.add(path + ".bandwidth_policy", "expected 'equal' or 'heuristic'");
}

void read_randomization(const json& j, const std::string& path, RandomizationSpec& r, Issues& issues) {
  Obj o(j, path, issues);
  o.get("area_side", r.area_side);
  o.get("input_bits_log10", r.input_bits_log10);
  o.get("output_bits_log10", r.output_bits_log10);
  o.get("units_per_cycle_log10", r.units_per_cycle_log10);
  o.get("arrival_rate", r.arrival_rate);
  o.finish();
}

json mcs_to_json(const std::vector<McsScheme>& set) {
  json a = json::array();
  for (const auto& m : set) a.push_back({m.modulation_order, m.code_rate});
  return a;
}

json ue_to_json(const UeProfile& u) {
  json j;
  j["p_on"] = u.p_on;
  j["p_sleep"] = u.p_sleep;
  j["p_tx_max"] = u.p_tx_max;
  j["tx_power_curve"] = {{"slope_low", u.tx_power_curve.slope_low},
                         {"slope_high", u.tx_power_curve.slope_high},
                         {"knee", u.tx_power_curve.knee}};
  j["input_unit_bits"] = u.input_unit_bits;
  j["output_unit_bits"] = u.output_unit_bits;
  j["units_per_cycle"] = u.units_per_cycle;
  j["arrival_rate"] = u.arrival_rate;
  if (u.arrival_max) j["arrival_max"] = *u.arrival_max;
  j["position"] = {u.position.x, u.position.y};
  json c;
  c["d_avg"] = u.constraints.d_avg;
  c["d_max"] = u.constraints.d_max;
  c["epsilon"] = u.constraints.epsilon;
  c["mu"] = u.constraints.mu;
  c["per_target_ul"] = u.constraints.per_target_ul;
  c["per_target_dl"] = u.constraints.per_target_dl;
  if (u.constraints.delta_init) c["delta_init"] = *u.constraints.delta_init;
  if (u.constraints.nu_init) c["nu_init"] = *u.constraints.nu_init;
  j["constraints"] = c;
  return j;
}

}  // namespace

ScenarioConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("JSON parse error: ") + e.what()});
  }

  Issues issues;
  ScenarioConfig cfg;
  cfg.cpu.freq_set = default_freq_set();
  cfg.mcs_ul = default_mcs_set();
  cfg.mcs_dl = default_mcs_set();

  Obj o(j, "", issues);
  if (const json* c = o.child("timing")) read_timing(*c, "timing", cfg.timing, issues);
  if (const json* c = o.child("ap")) read_ap(*c, "ap", cfg.ap, issues);
  if (const json* c = o.child("cpu")) read_cpu(*c, "cpu", cfg.cpu, issues);
  if (const json* c = o.child("phy")) read_phy(*c, "phy", cfg.phy, issues);
  if (const json* c = o.child("mcs_ul")) cfg.mcs_ul = read_mcs_set(*c, "mcs_ul", issues);
  if (const json* c = o.child("mcs_dl")) cfg.mcs_dl = read_mcs_set(*c, "mcs_dl", issues);
  o.get("coding_gain_exponent", cfg.coding_gain_exponent);
  if (o.has("snr_table_csv")) {
    std::string p;
    o.get("snr_table_csv", p);
    cfg.snr_table_csv = p;
  }
  if (const json* c = o.child("ap_position"))
    cfg.ap_position = read_vec2(*c, "ap_position", issues);
  if (const json* c = o.child("ues")) {
    if (!c->is_array()) {
      issues.add("ues", "expected an array");
    } else {
      cfg.ues.resize(c->size());
      for (std::size_t i = 0; i < c->size(); ++i)
        read_ue((*c)[i], "ues[" + std::to_string(i) + "]", cfg.ues[i], issues);
    }
  }
  if (const json* c = o.child("lyapunov")) read_lyapunov(*c, "lyapunov", cfg.lyapunov, issues);
  if (const json* c = o.child("strategy")) read_strategy(*c, "strategy", cfg.strategy, issues);
  if (o.has("arrival_process")) {
    std::string ap;
    o.get("arrival_process", ap);
    if (ap == "poisson")
      cfg.arrival_process = ArrivalProcess::poisson;
    else if (ap == "constant")
      cfg.arrival_process = ArrivalProcess::constant;
    else
      issues.add("arrival_process", "expected 'poisson' or 'constant'");
  }
  if (const json* c = o.child("randomization")) {
    RandomizationSpec r;
    read_randomization(*c, "randomization", r, issues);
    cfg.randomization = r;
  }
  o.finish();

  if (!issues.list.empty()) throw ConfigError(std::move(issues.list));
  return cfg;
}

std::string config_to_json(const ScenarioConfig& cfg, int indent) {
  json j;
  j["timing"] = {{"tau_l", cfg.timing.tau_l}, {"tau_s", cfg.timing.tau_s}, {"tau", cfg.timing.tau}};
  j["ap"] = {{"p_on", cfg.ap.p_on}, {"p_sleep", cfg.ap.p_sleep}, {"p_dl_max", cfg.ap.p_dl_max}};
  j["cpu"] = {{"freq_set", cfg.cpu.freq_set},
              {"kappa", cfg.cpu.kappa},
              {"p_on", cfg.cpu.p_on},
              {"p_sleep", cfg.cpu.p_sleep}};
  j["phy"] = {{"total_bw_ul", cfg.phy.total_bw_ul},
              {"total_bw_dl", cfg.phy.total_bw_dl},
              {"packet_bits", cfg.phy.packet_bits},
              {"noise_psd_dbm_hz", cfg.phy.noise_psd_dbm_hz},
              {"noise_figure_db", cfg.phy.noise_figure_db},
              {"carrier_freq", cfg.phy.carrier_freq},
              {"pathloss_exponent", cfg.phy.pathloss_exponent},
              {"pathloss_ref_db", cfg.phy.pathloss_ref_db},
              {"fading", cfg.phy.fading}};
  j["mcs_ul"] = mcs_to_json(cfg.mcs_ul);
  j["mcs_dl"] = mcs_to_json(cfg.mcs_dl);
  j["coding_gain_exponent"] = cfg.coding_gain_exponent;
  if (cfg.snr_table_csv) j["snr_table_csv"] = *cfg.snr_table_csv;
  j["ap_position"] = {cfg.ap_position.x, cfg.ap_position.y};
  j["ues"] = json::array();
  for (const auto& u : cfg.ues) j["ues"].push_back(ue_to_json(u));
  j["lyapunov"] = {{"v", cfg.lyapunov.v},
                   {"alphas", cfg.lyapunov.alphas},
                   {"delta_init", cfg.lyapunov.delta_init},
                   {"nu_init", cfg.lyapunov.nu_init},
                   {"beta", cfg.lyapunov.beta},
                   {"window_max", cfg.lyapunov.window_max},
                   {"adapt_delta", cfg.lyapunov.adapt_delta}};
  j["strategy"] = {{"name", cfg.strategy.name},
                   {"bandwidth_policy",
                    cfg.strategy.bandwidth_policy == BandwidthPolicy::heuristic ? "heuristic" : "equal"}};
  j["arrival_process"] =
      cfg.arrival_process == ArrivalProcess::constant ? "constant" : "poisson";
  if (cfg.randomization) {
    const auto& r = *cfg.randomization;
    j["randomization"] = {{"area_side", r.area_side},
                          {"input_bits_log10", r.input_bits_log10},
                          {"output_bits_log10", r.output_bits_log10},
                          {"units_per_cycle_log10", r.units_per_cycle_log10},
                          {"arrival_rate", r.arrival_rate}};
  }
  return j.dump(indent);
}

ScenarioConfig validate_config(ScenarioConfig cfg) {
  Issues issues;
  auto require = [&issues](bool ok, const std::string& path, const std::string& msg) {
    if (!ok) issues.add(path, msg);
  };

  const auto& t = cfg.timing;
  require(t.tau_l > 0 && t.tau_s > 0 && t.tau > 0, "timing", "all durations must be positive");
  require(std::abs(t.tau_l - (t.tau_s + t.tau)) <= 1e-12 + 1e-9 * t.tau_l, "timing",
          "tau_l must equal tau_s + tau");

  require(cfg.ap.p_sleep >= 0 && cfg.ap.p_sleep < cfg.ap.p_on, "ap", "need 0 <= p_sleep < p_on");
  require(cfg.ap.p_dl_max > 0, "ap.p_dl_max", "must be positive");

  auto& f = cfg.cpu.freq_set;
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  require(!f.empty() && f.front() == 0.0, "cpu.freq_set", "must contain 0");
  require(f.empty() || f.back() > 0.0, "cpu.freq_set", "must contain a positive frequency");
  require(cfg.cpu.kappa > 0, "cpu.kappa", "must be positive");
  require(cfg.cpu.p_sleep < cfg.cpu.p_on, "cpu", "need p_sleep < p_on");

  const auto& p = cfg.phy;
  require(p.total_bw_ul > 0 && p.total_bw_dl > 0, "phy", "bandwidths must be positive");
  require(p.packet_bits >= 1, "phy.packet_bits", "must be at least 1");
  require(p.carrier_freq > 0, "phy.carrier_freq", "must be positive");
  require(p.pathloss_exponent > 0, "phy.pathloss_exponent", "must be positive");

  auto check_mcs = [&](const std::vector<McsScheme>& set, const std::string& path) {
    require(!set.empty(), path, "must not be empty");
    for (std::size_t i = 0; i < set.size(); ++i) {
      require(set[i].modulation_order >= 2, path + "[" + std::to_string(i) + "]",
              "modulation order must be >= 2");
      require(set[i].code_rate > 0 && set[i].code_rate <= 1,
              path + "[" + std::to_string(i) + "]", "code rate must be in (0, 1]");
    }
  };
  check_mcs(cfg.mcs_ul, "mcs_ul");
  check_mcs(cfg.mcs_dl, "mcs_dl");
  require(cfg.coding_gain_exponent >= 0, "coding_gain_exponent", "must be nonnegative");

  require(!cfg.ues.empty(), "ues", "need at least one UE");
  for (std::size_t k = 0; k < cfg.ues.size(); ++k) {
    const std::string path = "ues[" + std::to_string(k) + "]";
    const auto& u = cfg.ues[k];
    require(u.p_sleep >= 0 && u.p_sleep < u.p_on, path, "need 0 <= p_sleep < p_on");
    require(u.p_tx_max > 0, path + ".p_tx_max", "must be positive");
    require(u.tx_power_curve.slope_low >= 0 && u.tx_power_curve.slope_high >= 0 &&
                u.tx_power_curve.knee >= 0,
            path + ".tx_power_curve", "must be monotone nondecreasing from 0");
    require(u.input_unit_bits >= 1, path + ".input_unit_bits", "must be at least 1");
    require(u.output_unit_bits >= 1, path + ".output_unit_bits", "must be at least 1");
    require(u.units_per_cycle > 0, path + ".units_per_cycle", "must be positive");
    require(u.arrival_rate >= 0, path + ".arrival_rate", "must be nonnegative");
    if (u.arrival_max)
      require(*u.arrival_max >= u.arrival_rate, path + ".arrival_max",
              "must be at least the arrival rate");
    if (!cfg.randomization)
      require(distance(u.position, cfg.ap_position) > 0, path + ".position",
              "must not coincide with the AP");
    const auto& c = u.constraints;
    require(c.d_avg > 0, path + ".constraints.d_avg", "must be positive");
    require(c.d_max > 0, path + ".constraints.d_max", "must be positive");
    require(c.epsilon > 0 && c.epsilon < 1, path + ".constraints.epsilon", "must be in (0, 1)");
    require(c.mu > 0, path + ".constraints.mu", "must be positive");
    require(c.per_target_ul > 0 && c.per_target_ul < 1, path + ".constraints.per_target_ul",
            "must be in (0, 1)");
    require(c.per_target_dl > 0 && c.per_target_dl < 1, path + ".constraints.per_target_dl",
            "must be in (0, 1)");
    if (c.delta_init)
      require(*c.delta_init >= 1, path + ".constraints.delta_init", "must be at least 1");
    if (c.nu_init) require(*c.nu_init > 0, path + ".constraints.nu_init", "must be positive");
  }

  const auto& l = cfg.lyapunov;
  require(l.v >= 0, "lyapunov.v", "must be nonnegative");
  double alpha_sum = 0;
  for (double a : l.alphas) {
    require(a >= 0, "lyapunov.alphas", "weights must be nonnegative");
    alpha_sum += a;
  }
  require(std::abs(alpha_sum - 1.0) <= 1e-9, "lyapunov.alphas", "weights must sum to 1");
  require(l.delta_init >= 1, "lyapunov.delta_init", "must be at least 1");
  require(l.nu_init > 0, "lyapunov.nu_init", "must be positive");
  require(l.beta > 0 && l.beta <= 1, "lyapunov.beta", "must be in (0, 1]");
  require(l.window_max >= 1, "lyapunov.window_max", "must be at least 1");

  if (cfg.randomization) {
    const auto& r = *cfg.randomization;
    require(r.area_side > 0, "randomization.area_side", "must be positive");
    require(r.arrival_rate[0] >= 0 && r.arrival_rate[1] >= r.arrival_rate[0],
            "randomization.arrival_rate", "must be a nonnegative range");
  }

  if (!issues.list.empty()) throw ConfigError(std::move(issues.list));

  // derived: Q_avg = D_avg * A_avg with the arrival rate converted to per-second
  cfg.q_avg.resize(cfg.ues.size());
  for (std::size_t k = 0; k < cfg.ues.size(); ++k)
    cfg.q_avg[k] = cfg.ues[k].constraints.d_avg * cfg.ues[k].arrival_rate / cfg.timing.tau_l;
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file: " + path});
  std::stringstream ss;
  ss << in.rdbuf();
  return validate_config(config_from_json(ss.str()));
}

std::string apply_override(const std::string& json_text, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError({"override must look like path.to.key=value: " + assignment});
  std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  std::replace(path.begin(), path.end(), '.', '/');

  json j = json::parse(json_text);
  json v;
  try {
    v = json::parse(value);
  } catch (const json::parse_error&) {
    v = value;  // bare string
  }
  j[json::json_pointer("/" + path)] = v;
  return j.dump(2);
}

std::string config_hash(const ScenarioConfig& cfg) {
  const std::string s = config_to_json(cfg, -1);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace disco
