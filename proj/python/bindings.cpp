// Python surface: config ingestion, single-episode runs, Monte Carlo, and
// the link-layer primitives that are handy to poke at interactively.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "disco/config.hpp"
#include "disco/phy.hpp"
#include "disco/sim.hpp"
#include "disco/solver.hpp"
#include "disco/verify.hpp"

namespace py = pybind11;
using namespace disco;

namespace {

py::dict aggregates_dict(const EpisodeAggregates& a) {
  py::dict d;
  d["horizon"] = a.horizon;
  d["n_ues"] = a.n_ues;
  d["mean_e_u"] = a.mean_e_u;
  d["mean_e_a"] = a.mean_e_a;
  d["mean_e_m"] = a.mean_e_m;
  d["mean_e_tot"] = a.mean_e_tot;
  d["mean_e_w"] = a.mean_e_w;
  d["duty_ap"] = a.duty_ap;
  d["duty_es"] = a.duty_es;
  d["duty_ue"] = a.duty_ue;
  d["duty_ue_mean"] = a.duty_ue_mean;
  d["mean_delay_ts"] = a.mean_delay_ts;
  d["mean_delay_little"] = a.mean_delay_little;
  d["mean_delay_ts_all"] = a.mean_delay_ts_all;
  d["mean_q_tot"] = a.mean_q_tot;
  d["oos_rate_queue"] = a.oos_rate_queue;
  d["oos_rate_delay"] = a.oos_rate_delay;
  d["final_z_over_t"] = a.final_z_over_t;
  d["final_y_over_t"] = a.final_y_over_t;
  d["delta_final"] = a.delta_final;
  d["created"] = a.created;
  d["delivered"] = a.delivered;
  d["in_queue"] = a.in_queue;
  return d;
}

ScenarioConfig prepared(const ScenarioConfig& cfg, std::uint64_t seed) {
  if (!cfg.randomization) return cfg;
  ScenarioConfig out = cfg;
  Rng draw(Rng::mix(seed, 0));
  return randomize_scenario(std::move(out), *cfg.randomization, draw);
}

}  // namespace

PYBIND11_MODULE(_disco, m) {
  m.doc() = "Dynamic computation-offloading simulator (Lyapunov drift-plus-penalty)";
  m.attr("__version__") = "0.1.0";

  py::class_<ScenarioConfig>(m, "Scenario")
      .def_static("from_json", [](const std::string& text) {
        return validate_config(config_from_json(text));
      })
      .def_static("from_file", &load_config)
      .def("to_json", [](const ScenarioConfig& c) { return config_to_json(c, 2); })
      .def_property_readonly("n_ues", &ScenarioConfig::n_ues)
      .def_property_readonly("q_avg", [](const ScenarioConfig& c) { return c.q_avg; })
      .def("hash", &config_hash)
      .def("with_strategy", [](const ScenarioConfig& c, const std::string& name) {
        ScenarioConfig out = c;
        const auto bw = out.strategy.bandwidth_policy;
        out.strategy = strategy_preset(name);
        out.strategy.bandwidth_policy = bw;
        return out;
      });

  m.def("strategy_presets", [] { return strategy_preset_names(); });

  m.def(
      "run_episode",
      [](const ScenarioConfig& cfg, long long slots, std::uint64_t seed, bool keep_delays) {
        EpisodeOptions opt;
        opt.per_slot_records = false;
        opt.keep_delays = keep_delays;
        const MetricsLog log = run_episode(prepared(cfg, seed), slots, seed, opt);
        py::dict d = aggregates_dict(log.agg);
        if (keep_delays) d["delays"] = log.delays;
        return d;
      },
      py::arg("config"), py::arg("slots"), py::arg("seed") = 0,
      py::arg("keep_delays") = false,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "run_monte_carlo",
      [](const ScenarioConfig& cfg, long long slots, int realizations, int jobs,
         std::uint64_t seed) {
        EpisodeOptions opt;
        opt.per_slot_records = false;
        const MonteCarloResult mc = run_monte_carlo(cfg, slots, realizations, jobs, seed, opt);
        py::dict d;
        d["mean_e_w"] = mc.mean_e_w;
        d["ci_e_w"] = mc.ci_e_w;
        d["mean_e_tot"] = mc.mean_e_tot;
        d["ci_e_tot"] = mc.ci_e_tot;
        d["mean_e_u"] = mc.mean_e_u;
        d["mean_e_a"] = mc.mean_e_a;
        d["mean_e_m"] = mc.mean_e_m;
        d["mean_delay"] = mc.mean_delay;
        d["ci_delay"] = mc.ci_delay;
        d["duty_ap"] = mc.duty_ap;
        d["duty_es"] = mc.duty_es;
        d["duty_ue"] = mc.duty_ue;
        py::list eps;
        for (const auto& a : mc.episodes) eps.append(aggregates_dict(a));
        d["episodes"] = eps;
        return d;
      },
      py::arg("config"), py::arg("slots"), py::arg("realizations") = 1, py::arg("jobs") = 1,
      py::arg("seed") = 0);

  m.def(
      "uplink_units",
      [](int modulation, double code_rate, double bandwidth, double tau, double unit_bits,
         double packet_bits) {
        return uplink_units({modulation, code_rate}, bandwidth, tau, unit_bits, packet_bits);
      },
      py::arg("modulation"), py::arg("code_rate"), py::arg("bandwidth"), py::arg("tau"),
      py::arg("unit_bits"), py::arg("packet_bits") = 12000.0);

  m.def(
      "required_snr",
      [](int modulation, double code_rate, double target_per, double packet_bits,
         double coding_gain_exponent) {
        const QamPerModel model(coding_gain_exponent);
        return required_snr(model, {modulation, code_rate}, target_per, packet_bits);
      },
      py::arg("modulation"), py::arg("code_rate"), py::arg("target_per"),
      py::arg("packet_bits") = 12000.0, py::arg("coding_gain_exponent") = 1.5);

  m.def(
      "min_tx_power",
      [](double gamma_bar, double gain, double bandwidth, double noise_psd_dbm_hz,
         double noise_figure_db) {
        PhyConfig phy;
        phy.noise_psd_dbm_hz = noise_psd_dbm_hz;
        phy.noise_figure_db = noise_figure_db;
        return min_tx_power(gamma_bar, {gain, bandwidth, noise_power(phy, bandwidth)});
      },
      py::arg("gamma_bar"), py::arg("gain"), py::arg("bandwidth"),
      py::arg("noise_psd_dbm_hz") = -174.0, py::arg("noise_figure_db") = 5.0);

  m.def("compute_zeta", &compute_zeta, py::arg("config"));

  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed, int jobs) {
        std::vector<verify::CheckResult> results;
        if (suite == "oracle")
          results = verify::oracle_suite(seed, 500);
        else if (suite == "invariants")
          results = verify::invariant_suite(seed, 100000);
        else if (suite == "acceptance")
          results = verify::acceptance_suite(seed, jobs);
        else
          throw std::invalid_argument("suite must be oracle|invariants|acceptance");
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["pass"] = r.pass;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("suite"), py::arg("seed") = 0, py::arg("jobs") = 1);
}
