#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "disco/config.hpp"
#include "disco/sim.hpp"
#include "disco/verify.hpp"

namespace disco::verify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ScenarioConfig base_scenario(int k_count) {
  ScenarioConfig cfg;
  cfg.cpu.freq_set = default_freq_set();
  cfg.mcs_ul = default_mcs_set();
  cfg.mcs_dl = default_mcs_set();
  cfg.ues.resize(k_count);
  return cfg;
}

// Energy-delay trade-off family: fixed per-UE delta, randomized sizes,
// compute densities, arrival rates and positions.
ScenarioConfig tradeoff_scenario(int k_count, double v) {
  ScenarioConfig cfg = base_scenario(k_count);
  for (int k = 0; k < k_count; ++k) {
    auto& ue = cfg.ues[k];
    ue.constraints.d_avg = 0.100;
    ue.constraints.d_max = 0.250;
    ue.constraints.epsilon = 1e-2;
    ue.constraints.mu = 10.0;
    ue.constraints.delta_init = 1.5 + 0.1 * k;
  }
  cfg.lyapunov.v = v;
  cfg.lyapunov.adapt_delta = false;
  RandomizationSpec spec;
  spec.input_bits_log10 = {2.0, 3.0};
  spec.output_bits_log10 = {1.0, 3.0};
  spec.units_per_cycle_log10 = {-5.0, -2.0};
  spec.arrival_rate = {5.0, 15.0};
  cfg.randomization = spec;
  return validate_config(std::move(cfg));
}

// Reliability adaptation scenario: four UEs with staggered delay thresholds.
ScenarioConfig reliability_scenario(std::uint64_t seed) {
  ScenarioConfig cfg = base_scenario(4);
  const double d_max[4] = {0.250, 0.200, 0.150, 0.120};
  const double nu0[4] = {15.0, 5.0, 4.0, 3.0};
  Rng pos_rng(Rng::mix(seed, 0xf153));
  for (int k = 0; k < 4; ++k) {
    auto& ue = cfg.ues[k];
    ue.input_unit_bits = 1000.0;
    ue.output_unit_bits = 100.0;
    ue.units_per_cycle = 1e-4;
    ue.arrival_rate = 5.0;
    ue.position = {pos_rng.uniform(-75.0, 75.0), pos_rng.uniform(-75.0, 75.0)};
    ue.constraints.d_avg = 0.100;
    ue.constraints.d_max = d_max[k];
    ue.constraints.epsilon = 1e-3;
    ue.constraints.mu = 20.0;
    ue.constraints.delta_init = 1.0;
    ue.constraints.nu_init = nu0[k];
  }
  cfg.lyapunov.v = 5e6;
  cfg.lyapunov.beta = 0.5;
  cfg.lyapunov.window_max = 10000;
  cfg.lyapunov.adapt_delta = true;
  return validate_config(std::move(cfg));
}

// Sleep-strategy comparison family (ten UEs, staggered delay budgets).
ScenarioConfig comparison_scenario(const std::string& strategy,
                                   BandwidthPolicy bw_policy) {
  ScenarioConfig cfg = base_scenario(10);
  for (int k = 0; k < 10; ++k) {
    auto& ue = cfg.ues[k];
    ue.constraints.d_avg = 0.080 + 0.005 * k;
    ue.constraints.d_max = 0.400;
    ue.constraints.epsilon = 1e-2;
    ue.constraints.mu = 10.0;
    ue.constraints.delta_init = 1.5 + 0.1 * k;
  }
  cfg.lyapunov.v = 5e7;
  cfg.lyapunov.adapt_delta = false;
  cfg.strategy = strategy_preset(strategy);
  cfg.strategy.bandwidth_policy = bw_policy;
  RandomizationSpec spec;
  spec.input_bits_log10 = {1.0, 3.0};
  spec.output_bits_log10 = {1.0, 3.0};
  spec.units_per_cycle_log10 = {-5.0, -2.0};
  spec.arrival_rate = {1.0, 20.0};
  cfg.randomization = spec;
  return validate_config(std::move(cfg));
}

// Load sweep family for duty cycles (fifteen UEs, common arrival rate).
ScenarioConfig load_scenario(double arrival_rate) {
  ScenarioConfig cfg = base_scenario(15);
  for (auto& ue : cfg.ues) {
    ue.constraints.d_avg = 0.100;
    ue.constraints.d_max = 0.400;
    ue.constraints.epsilon = 1e-2;
    ue.constraints.mu = 10.0;
    ue.constraints.delta_init = 2.0;
  }
  cfg.lyapunov.v = 5e7;
  cfg.lyapunov.adapt_delta = false;
  RandomizationSpec spec;
  spec.input_bits_log10 = {2.0, 3.0};
  spec.output_bits_log10 = {1.0, 3.0};
  spec.units_per_cycle_log10 = {-5.0, -2.0};
  spec.arrival_rate = {arrival_rate, arrival_rate};
  cfg.randomization = spec;
  return validate_config(std::move(cfg));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

}  // namespace

std::vector<CheckResult> acceptance_suite(std::uint64_t seed, int jobs) {
  std::vector<CheckResult> out;
  EpisodeOptions light;
  light.per_slot_records = false;

  // C1: oracle equivalence, 500 random small instances, exact, < 1 min
  {
    const auto t0 = Clock::now();
    auto oracle = oracle_suite(seed, 500);
    const double secs = seconds_since(t0);
    bool pass = secs < 60.0;
    std::string detail = "runtime " + fmt(secs) + " s;";
    for (const auto& r : oracle) {
      pass = pass && r.pass;
      detail += " " + r.id + (r.pass ? " ok" : " FAILED(" + r.detail + ")");
    }
    out.push_back({"C1", "oracle equivalence on 500 small instances", pass, detail});
  }

  // C2/C3/C9 share one run: K=5, D_avg=100 ms, V=5e6, T=2e4, single seed
  {
    const std::uint64_t run_seed = realization_seed(seed, 0);
    ScenarioConfig cfg = tradeoff_scenario(5, 5e6);
    Rng draw(Rng::mix(run_seed, 0));
    cfg = randomize_scenario(std::move(cfg), RandomizationSpec(*cfg.randomization), draw);
    const MetricsLog log = run_episode(cfg, 20000, run_seed, light);

    double worst_delay = 0.0;
    double worst_z = 0.0, worst_y = 0.0;
    double worst_little_err = 0.0;
    for (std::size_t k = 0; k < cfg.n_ues(); ++k) {
      worst_delay = std::max(worst_delay, log.agg.mean_delay_ts[k] / 0.100);
      worst_z = std::max(worst_z, log.agg.final_z_over_t[k] / (0.05 * cfg.q_avg[k]));
      worst_y = std::max(worst_y,
                         log.agg.final_y_over_t[k] / (0.05 * cfg.ues[k].constraints.mu));
      const double ts = log.agg.mean_delay_ts[k];
      if (ts > 0)
        worst_little_err = std::max(
            worst_little_err, std::abs(log.agg.mean_delay_little[k] - ts) / ts);
    }
    out.push_back({"C2", "average end-to-end delay within 1.05 D_avg",
                   worst_delay <= 1.05,
                   "worst per-UE mean delay = " + fmt(worst_delay) + " x D_avg (limit 1.05)"});
    out.push_back({"C3", "virtual queues mean-rate stable",
                   worst_z < 1.0 && worst_y < 1.0,
                   "worst Z(T)/T = " + fmt(worst_z) + " x limit, worst Y(T)/T = " +
                       fmt(worst_y) + " x limit"});
    out.push_back({"C9", "Little's-law cross-check within 5%",
                   worst_little_err <= 0.05,
                   "worst relative gap = " + fmt(worst_little_err) + " (limit 0.05)"});
  }

  // C4: energy-delay trade-off shape over a V sweep
  {
    const double v_grid[5] = {1e5, 1e6, 1e7, 1e8, 1e9};
    std::vector<double> e_mean, e_ci, d_mean, d_ci;
    for (double v : v_grid) {
      const ScenarioConfig cfg = tradeoff_scenario(5, v);
      const MonteCarloResult mc = run_monte_carlo(cfg, 20000, 10, jobs, seed, light);
      e_mean.push_back(mc.mean_e_w);
      e_ci.push_back(mc.ci_e_w);
      d_mean.push_back(mc.mean_delay);
      d_ci.push_back(mc.ci_delay);
    }
    bool energy_ok = true, delay_ok = true;
    for (int i = 0; i + 1 < 5; ++i) {
      if (e_mean[i + 1] > e_mean[i] + e_ci[i] + e_ci[i + 1]) energy_ok = false;
      if (d_mean[i + 1] < d_mean[i] - d_ci[i] - d_ci[i + 1]) delay_ok = false;
    }
    const bool saturates = d_mean[4] >= 0.6 * 0.100 && d_mean[4] <= 1.1 * 0.100;
    std::ostringstream detail;
    detail << "E_w(V): ";
    for (double e : e_mean) detail << fmt(e) << " ";
    detail << "; delay(V): ";
    for (double d : d_mean) detail << fmt(d) << " ";
    detail << "; saturation delay " << fmt(d_mean[4]) << " s";
    out.push_back({"C4", "energy nonincreasing and delay nondecreasing in V, saturating near D_avg",
                   energy_ok && delay_ok && saturates, detail.str()});
  }

  // C5: out-of-service adaptation over 1e5 slots
  {
    ScenarioConfig cfg = reliability_scenario(seed);
    EpisodeOptions opt = light;
    opt.track_delta = true;
    const MetricsLog log = run_episode(cfg, 100000, realization_seed(seed, 1), opt);

    bool survivor_ok = true, converge_ok = true, order_ok = true;
    std::ostringstream detail;
    std::vector<double> tail_mean(4);
    for (int k = 0; k < 4; ++k) {
      const double s = log.survivor(k, cfg.ues[k].constraints.d_max);
      survivor_ok = survivor_ok && s <= 2.0 * cfg.ues[k].constraints.epsilon;
      const auto& traj = log.delta_traj[k];
      const std::size_t tail = traj.size() / 10;
      double m = 0, ss = 0;
      for (std::size_t i = traj.size() - tail; i < traj.size(); ++i) m += traj[i];
      m /= static_cast<double>(tail);
      for (std::size_t i = traj.size() - tail; i < traj.size(); ++i)
        ss += (traj[i] - m) * (traj[i] - m);
      const double sd = std::sqrt(ss / static_cast<double>(tail));
      converge_ok = converge_ok && sd < 0.05 * m;
      tail_mean[k] = m;
      detail << "UE" << k << ": S(Dmax)=" << fmt(s) << " delta=" << fmt(m) << "+-"
             << fmt(sd) << "; ";
    }
    for (int k = 0; k + 1 < 4; ++k)
      if (tail_mean[k + 1] >= tail_mean[k]) order_ok = false;  // smaller D_max, smaller delta
    out.push_back({"C5", "survivor value within 2 eps at D_max; delta converges and orders",
                   survivor_ok && converge_ok && order_ok, detail.str()});
  }

  // C6: sleep-mode gains, paired realizations
  {
    struct Arm {
      std::string name;
      ScenarioConfig cfg;
      std::vector<double> e_tot;
    };
    std::vector<Arm> arms;
    arms.push_back({"disco_heur", comparison_scenario("holistic", BandwidthPolicy::heuristic), {}});
    arms.push_back({"disco_equal", comparison_scenario("holistic", BandwidthPolicy::equal), {}});
    arms.push_back({"radio_sleep", comparison_scenario("radio_sleep", BandwidthPolicy::equal), {}});
    arms.push_back({"es_sleep", comparison_scenario("es_sleep", BandwidthPolicy::equal), {}});
    arms.push_back({"no_sleep", comparison_scenario("no_sleep", BandwidthPolicy::equal), {}});
    const int n_real = 20;
    for (auto& arm : arms) {
      const MonteCarloResult mc = run_monte_carlo(arm.cfg, 10000, n_real, jobs, seed, light);
      for (const auto& ep : mc.episodes) arm.e_tot.push_back(ep.mean_e_tot);
    }
    auto paired_fraction = [&](const Arm& lo, const Arm& hi) {
      int wins = 0;
      for (int r = 0; r < n_real; ++r)
        if (lo.e_tot[r] <= hi.e_tot[r]) ++wins;
      return static_cast<double>(wins) / n_real;
    };
    auto mean_le = [&](const Arm& lo, const Arm& hi) {
      return mean_of(lo.e_tot) <= mean_of(hi.e_tot);
    };
    struct Pair {
      int lo, hi;
    };
    const Pair pairs[] = {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 4}};
    bool pass = true;
    std::ostringstream detail;
    detail << "mean E_tot:";
    for (const auto& arm : arms) detail << " " << arm.name << "=" << fmt(mean_of(arm.e_tot));
    detail << "; paired agreement:";
    for (const auto& p : pairs) {
      const double frac = paired_fraction(arms[p.lo], arms[p.hi]);
      pass = pass && mean_le(arms[p.lo], arms[p.hi]) && frac >= 0.9;
      detail << " " << arms[p.lo].name << "<=" << arms[p.hi].name << ":" << fmt(frac);
    }
    out.push_back({"C6", "sleep-mode energy ordering with >=90% paired agreement", pass,
                   detail.str()});
  }

  // C7: duty cycles vs load
  {
    const double loads[5] = {1.0, 5.0, 10.0, 15.0, 20.0};
    std::vector<double> d_ap, d_es, d_ue;
    for (double a : loads) {
      const ScenarioConfig cfg = load_scenario(a);
      const MonteCarloResult mc = run_monte_carlo(cfg, 10000, 3, jobs, seed, light);
      d_ap.push_back(mc.duty_ap);
      d_es.push_back(mc.duty_es);
      d_ue.push_back(mc.duty_ue);
    }
    auto nondecreasing = [](const std::vector<double>& xs) {
      for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (xs[i + 1] < xs[i] - 0.01) return false;
      return true;
    };
    const bool mono = nondecreasing(d_ap) && nondecreasing(d_es) && nondecreasing(d_ue);
    const bool near_one = d_ap.back() >= 0.90 && d_es.back() >= 0.90 && d_ue.back() >= 0.90;
    std::ostringstream detail;
    detail << "duty at loads {1,5,10,15,20}: AP ";
    for (double x : d_ap) detail << fmt(x) << " ";
    detail << "; ES ";
    for (double x : d_es) detail << fmt(x) << " ";
    detail << "; UE ";
    for (double x : d_ue) detail << fmt(x) << " ";
    out.push_back({"C7", "duty cycles nondecreasing in load and near 1 at the top", mono && near_one,
                   detail.str()});
  }

  // C8: invariant suite over 1e5 randomized steps
  {
    auto inv = invariant_suite(seed, 100000);
    bool pass = true;
    std::string detail;
    for (const auto& r : inv) {
      pass = pass && r.pass;
      detail += r.id + (r.pass ? " ok; " : " FAILED(" + r.detail + "); ");
    }
    out.push_back({"C8", "invariant suite on 1e5 randomized steps", pass, detail});
  }

  // order by criterion number for the report
  std::sort(out.begin(), out.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
  return out;
}

}  // namespace disco::verify
