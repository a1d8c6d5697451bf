#include "disco/metrics_io.hpp"

#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace disco {

using json = nlohmann::json;

void write_slot_csv(const MetricsLog& log, std::ostream& os) {
  os << "t,e_u,e_a,e_m,e_tot,e_w,ap_active,es_active,f_c,active_ues,"
        "arrivals,delivered,q_l,q_m,q_a,z_sum,y_sum,delta_mean,oos_queue_events\n";
  char buf[512];
  for (const auto& r : log.slots) {
    std::snprintf(buf, sizeof buf,
                  "%lld,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%d,%.9g,%d,%lld,%lld,%lld,%lld,%lld,"
                  "%.9g,%.9g,%.9g,%lld\n",
                  static_cast<long long>(r.t), r.e_u, r.e_a, r.e_m, r.e_tot, r.e_w,
                  r.ap_active ? 1 : 0, r.es_active ? 1 : 0, r.f_c, r.active_ues,
                  static_cast<long long>(r.arrivals), static_cast<long long>(r.delivered),
                  static_cast<long long>(r.q_l), static_cast<long long>(r.q_m),
                  static_cast<long long>(r.q_a), r.z_sum, r.y_sum, r.delta_mean,
                  static_cast<long long>(r.oos_queue_events));
    os << buf;
  }
}

std::string aggregates_json(const MetricsLog& log, const std::string& cfg_hash,
                            std::uint64_t seed) {
  const auto& a = log.agg;
  json j;
  j["config_hash"] = cfg_hash;
  j["seed"] = seed;
  j["horizon"] = a.horizon;
  j["n_ues"] = a.n_ues;
  j["mean_e_u"] = a.mean_e_u;
  j["mean_e_a"] = a.mean_e_a;
  j["mean_e_m"] = a.mean_e_m;
  j["mean_e_tot"] = a.mean_e_tot;
  j["mean_e_w"] = a.mean_e_w;
  j["duty_ap"] = a.duty_ap;
  j["duty_es"] = a.duty_es;
  j["duty_ue"] = a.duty_ue;
  j["duty_ue_mean"] = a.duty_ue_mean;
  j["mean_delay_ts"] = a.mean_delay_ts;
  j["mean_delay_little"] = a.mean_delay_little;
  j["mean_delay_ts_all"] = a.mean_delay_ts_all;
  j["mean_q_tot"] = a.mean_q_tot;
  j["oos_rate_queue"] = a.oos_rate_queue;
  j["oos_rate_delay"] = a.oos_rate_delay;
  j["final_z_over_t"] = a.final_z_over_t;
  j["final_y_over_t"] = a.final_y_over_t;
  j["delta_final"] = a.delta_final;
  j["created"] = a.created;
  j["delivered"] = a.delivered;
  j["in_queue"] = a.in_queue;
  return j.dump(2);
}

std::string manifest_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["config_path"] = m.config_path;
  j["overrides"] = m.overrides;
  j["seed"] = m.seed;
  j["out_dir"] = m.out_dir;
  j["version"] = m.version;
  return j.dump(2);
}

}  // namespace disco
