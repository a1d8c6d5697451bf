#include "disco/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "disco/config.hpp"
#include "disco/control.hpp"
#include "disco/phy.hpp"
#include "disco/queueing.hpp"
#include "disco/sim.hpp"

namespace disco::verify {

namespace {

struct LinkCand {
  std::optional<int> mcs;
  double p = 0.0;
  Count n = 0;
};

std::vector<LinkCand> uplink_candidates(const UeSlotView& u, const UeProfile& prof,
                                        const ScenarioConfig& cfg,
                                        std::span<const double> gammas) {
  std::vector<LinkCand> cands{{std::nullopt, 0.0, 0}};
  if (u.bw_ul <= 0.0 || u.gain_ul <= 0.0) return cands;
  const LinkBudget link{u.gain_ul, u.bw_ul, noise_power(cfg.phy, u.bw_ul)};
  for (std::size_t i = 0; i < cfg.mcs_ul.size(); ++i) {
    const double p = min_tx_power(gammas[i], link);
    if (p > prof.p_tx_max) continue;
    cands.push_back({static_cast<int>(i), p,
                     uplink_units(cfg.mcs_ul[i], u.bw_ul, cfg.timing.tau,
                                  prof.input_unit_bits, cfg.phy.packet_bits)});
  }
  return cands;
}

std::vector<LinkCand> downlink_candidates(const UeSlotView& u, const UeProfile& prof,
                                          const ScenarioConfig& cfg,
                                          std::span<const double> gammas) {
  std::vector<LinkCand> cands{{std::nullopt, 0.0, 0}};
  if (u.bw_dl <= 0.0 || u.gain_dl <= 0.0) return cands;
  const double cap = cfg.ap.p_dl_max / static_cast<double>(cfg.n_ues());
  const LinkBudget link{u.gain_dl, u.bw_dl, noise_power(cfg.phy, u.bw_dl)};
  for (std::size_t i = 0; i < cfg.mcs_dl.size(); ++i) {
    const double p = min_tx_power(gammas[i], link);
    if (p > cap) continue;
    cands.push_back({static_cast<int>(i), p,
                     downlink_units(cfg.mcs_dl[i], u.bw_dl, cfg.timing.tau,
                                    prof.output_unit_bits, cfg.phy.packet_bits)});
  }
  return cands;
}

struct UeRadioOption {
  bool active = false;
  LinkCand ul;
  LinkCand dl;
};

std::vector<UeRadioOption> ue_radio_options(const UeSlotView& u, const UeProfile& prof,
                                            const ScenarioConfig& cfg,
                                            std::span<const double> g_ul,
                                            std::span<const double> g_dl) {
  std::vector<UeRadioOption> opts;
  opts.push_back({});  // sleep
  for (const auto& up : uplink_candidates(u, prof, cfg, g_ul))
    for (const auto& dn : downlink_candidates(u, prof, cfg, g_dl))
      opts.push_back({true, up, dn});
  return opts;
}

Decision decision_from_options(const std::vector<UeRadioOption>& chosen, bool ap_active,
                               std::size_t k_count) {
  Decision d;
  d.ap_active = ap_active;
  d.ues.resize(k_count);
  if (!ap_active) return d;
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto& o = chosen[k];
    auto& x = d.ues[k];
    x.active = o.active;
    if (o.active) {
      x.mcs_ul = o.ul.mcs;
      x.p_tx = o.ul.p;
      x.n_ul = o.ul.n;
      x.mcs_dl = o.dl.mcs;
      x.p_dl = o.dl.p;
      x.n_dl = o.dl.n;
    }
  }
  return d;
}

}  // namespace

RadioEnumeration enumerate_radio(std::span<const UeSlotView> views,
                                 const ScenarioConfig& cfg, const SnrCache& snr) {
  const std::size_t k_count = views.size();
  std::vector<std::vector<UeRadioOption>> options(k_count);
  for (std::size_t k = 0; k < k_count; ++k)
    options[k] = ue_radio_options(views[k], cfg.ues[k], cfg, snr.ul[k], snr.dl[k]);

  RadioEnumeration best;
  best.decision = decision_from_options({}, false, k_count);
  best.objective = radio_objective(views, cfg, best.decision);

  std::vector<std::size_t> idx(k_count, 0);
  std::vector<UeRadioOption> chosen(k_count);
  while (true) {
    for (std::size_t k = 0; k < k_count; ++k) chosen[k] = options[k][idx[k]];
    Decision d = decision_from_options(chosen, true, k_count);
    const double obj = radio_objective(views, cfg, d);
    if (obj < best.objective) {
      best.objective = obj;
      best.decision = std::move(d);
    }
    // odometer over the per-UE option lists
    std::size_t k = 0;
    while (k < k_count && ++idx[k] == options[k].size()) {
      idx[k] = 0;
      ++k;
    }
    if (k == k_count) break;
  }
  return best;
}

CpuEnumeration enumerate_cpu(std::span<const UeSlotView> views,
                             const ScenarioConfig& cfg) {
  const std::size_t k_count = views.size();
  std::vector<double> cap(k_count);
  for (std::size_t k = 0; k < k_count; ++k)
    cap[k] = static_cast<double>(views[k].q.q_m + 1) /
             (cfg.timing.tau * cfg.ues[k].units_per_cycle);

  CpuEnumeration best;
  bool have = false;
  std::vector<double> f(k_count);
  for (double f_c : cfg.cpu.freq_set) {
    if (cfg.strategy.force_es_on && f_c == 0.0) continue;
    // every LP vertex: subset of users filled greedily in every order
    for (std::uint32_t mask = 0; mask < (1u << k_count); ++mask) {
      std::vector<std::size_t> members;
      for (std::size_t k = 0; k < k_count; ++k)
        if (mask & (1u << k)) members.push_back(k);
      std::sort(members.begin(), members.end());
      do {
        std::fill(f.begin(), f.end(), 0.0);
        double remaining = f_c;
        for (std::size_t k : members) {
          f[k] = std::min(cap[k], remaining);
          remaining -= f[k];
        }
        const double obj = cpu_objective(views, cfg, f_c, f);
        if (!have || obj < best.objective) {
          best.objective = obj;
          best.f_c = f_c;
          best.f_k = f;
          have = true;
        }
      } while (std::next_permutation(members.begin(), members.end()));
    }
  }
  return best;
}

SmallInstance make_small_instance(Rng& rng, int max_ues) {
  SmallInstance inst;
  auto& cfg = inst.cfg;
  const int k_count = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_ues));

  cfg.cpu.freq_set = {0.0};
  const int n_freq = 1 + static_cast<int>(rng.next() % 3);
  for (int i = 0; i < n_freq; ++i)
    cfg.cpu.freq_set.push_back(std::pow(10.0, rng.uniform(6.0, 9.5)));
  std::sort(cfg.cpu.freq_set.begin(), cfg.cpu.freq_set.end());

  cfg.phy.total_bw_ul = rng.uniform(2e5, 2e6);
  cfg.phy.total_bw_dl = rng.uniform(2e5, 2e6);

  const int modulations[4] = {4, 16, 64, 256};
  auto random_mcs_set = [&] {
    std::vector<McsScheme> set;
    const int n = 1 + static_cast<int>(rng.next() % 3);
    for (int i = 0; i < n; ++i)
      set.push_back({modulations[rng.next() % 4], rng.uniform(0.25, 0.95)});
    return set;
  };
  cfg.mcs_ul = random_mcs_set();
  cfg.mcs_dl = random_mcs_set();

  cfg.lyapunov.v = rng.uniform() < 0.1 ? 0.0 : std::pow(10.0, rng.uniform(2.0, 8.0));
  double a1 = rng.uniform(), a2 = rng.uniform(), a3 = rng.uniform();
  const double asum = a1 + a2 + a3;
  cfg.lyapunov.alphas = {a1 / asum, a2 / asum, a3 / asum};
  cfg.lyapunov.adapt_delta = false;

  cfg.ues.resize(k_count);
  inst.views.resize(k_count);
  for (int k = 0; k < k_count; ++k) {
    auto& ue = cfg.ues[k];
    ue.input_unit_bits = std::pow(10.0, rng.uniform(1.0, 3.0));
    ue.output_unit_bits = std::pow(10.0, rng.uniform(1.0, 3.0));
    ue.units_per_cycle = std::pow(10.0, rng.uniform(-5.0, -2.0));
    ue.arrival_rate = rng.uniform(0.0, 10.0);
    ue.position = {rng.uniform(5.0, 100.0), 0.0};
    ue.constraints.mu = rng.uniform(1.0, 20.0);
    ue.constraints.epsilon = std::pow(10.0, rng.uniform(-4.0, -1.0));
    ue.constraints.per_target_ul = std::pow(10.0, rng.uniform(-6.0, -2.0));
    ue.constraints.per_target_dl = std::pow(10.0, rng.uniform(-6.0, -2.0));

    auto& v = inst.views[k];
    v.q.q_l = static_cast<Count>(rng.next() % 21);
    v.q.q_m = static_cast<Count>(rng.next() % 21);
    v.q.q_a = static_cast<Count>(rng.next() % 21);
    v.q.q_tot = v.q.q_l + v.q.q_m + v.q.q_a;
    v.q.z = rng.uniform(0.0, 50.0);
    v.q.y = rng.uniform(0.0, 50.0);
    v.zy = v.q.z + ue.constraints.mu * v.q.y;
    v.q_tilde = 4.0 * static_cast<double>(v.q.q_m - v.q.q_a) + v.zy;
    v.delta = rng.uniform(1.0, 3.0);
    v.bw_ul = cfg.phy.total_bw_ul / k_count;
    v.bw_dl = cfg.phy.total_bw_dl / k_count;
    const double d = distance(ue.position, cfg.ap_position);
    v.gain_ul = mean_channel_gain(cfg.phy, d) * rng.exponential();
    v.gain_dl = mean_channel_gain(cfg.phy, d) * rng.exponential();
  }
  cfg.q_avg.resize(k_count);
  for (int k = 0; k < k_count; ++k)
    cfg.q_avg[k] = cfg.ues[k].constraints.d_avg * cfg.ues[k].arrival_rate / cfg.timing.tau_l;
  return inst;
}

Decision random_feasible_decision(std::span<const UeSlotView> views,
                                  const ScenarioConfig& cfg, const SnrCache& snr,
                                  Rng& rng) {
  const std::size_t k_count = views.size();
  Decision d;
  d.ues.resize(k_count);
  d.ap_active = rng.uniform() < 0.7;
  if (d.ap_active) {
    for (std::size_t k = 0; k < k_count; ++k) {
      auto opts = ue_radio_options(views[k], cfg.ues[k], cfg, snr.ul[k], snr.dl[k]);
      const auto& o = opts[rng.next() % opts.size()];
      auto& x = d.ues[k];
      x.active = o.active;
      if (o.active) {
        x.mcs_ul = o.ul.mcs;
        x.p_tx = o.ul.p;
        x.n_ul = o.ul.n;
        x.mcs_dl = o.dl.mcs;
        x.p_dl = o.dl.p;
        x.n_dl = o.dl.n;
      }
    }
  }
  const auto& fs = cfg.cpu.freq_set;
  d.f_c = fs[rng.next() % fs.size()];
  d.es_active = d.f_c > 0.0;
  double remaining = d.f_c;
  std::vector<std::size_t> order(k_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = k_count; i > 1; --i)
    std::swap(order[i - 1], order[rng.next() % i]);
  for (std::size_t k : order) {
    const double cap = static_cast<double>(views[k].q.q_m + 1) /
                       (cfg.timing.tau * cfg.ues[k].units_per_cycle);
    d.ues[k].f_k = rng.uniform() * std::min(cap, remaining);
    remaining -= d.ues[k].f_k;
    d.ues[k].n_comp =
        compute_units(d.ues[k].f_k, cfg.ues[k].units_per_cycle, cfg.timing.tau);
  }
  return d;
}

std::vector<CheckResult> oracle_suite(std::uint64_t seed, int n_instances) {
  Rng rng(Rng::mix(seed, 0xacce1));
  int radio_fail = 0, cpu_fail = 0, inv_fail = 0, gamma_fail = 0;
  double worst_gap = 0.0;

  for (int i = 0; i < n_instances; ++i) {
    const auto inst = make_small_instance(rng);
    const auto snr = SnrCache::build(inst.cfg);
    std::span<const UeSlotView> views(inst.views);

    const RadioSolution radio = solve_radio(views, inst.cfg, snr);
    const CpuSolution cpu = solve_cpu(views, inst.cfg);
    const Decision dec = assemble_decision(radio, cpu, inst.cfg);

    const auto radio_oracle = enumerate_radio(views, inst.cfg, snr);
    const auto cpu_oracle = enumerate_cpu(views, inst.cfg);
    if (radio.objective != radio_oracle.objective) ++radio_fail;
    if (cpu.objective != cpu_oracle.objective) ++cpu_fail;

    try {
      check_decision(dec, inst.cfg);
    } catch (const std::logic_error&) {
      ++inv_fail;
    }

    // the solver decision must win against random feasible decisions
    const double solver_gamma = eval_gamma_objective(views, inst.cfg, dec);
    for (int r = 0; r < 5; ++r) {
      Decision other = random_feasible_decision(views, inst.cfg, snr, rng);
      const double other_gamma = eval_gamma_objective(views, inst.cfg, other);
      const double tol = 1e-9 * (1.0 + std::abs(other_gamma));
      if (solver_gamma > other_gamma + tol) {
        ++gamma_fail;
        worst_gap = std::max(worst_gap, solver_gamma - other_gamma);
      }
    }
  }

  std::vector<CheckResult> out;
  auto add = [&out](const std::string& id, const std::string& name, bool pass,
                    const std::string& detail) {
    out.push_back({id, name, pass, detail});
  };
  std::ostringstream d1, d2, d3, d4;
  d1 << radio_fail << "/" << n_instances << " mismatches (exact objective equality)";
  d2 << cpu_fail << "/" << n_instances << " mismatches (exact objective equality)";
  d3 << inv_fail << "/" << n_instances << " violations";
  d4 << gamma_fail << " losses to random feasible decisions, worst gap " << worst_gap;
  add("oracle.radio", "radio solver equals exhaustive enumeration", radio_fail == 0, d1.str());
  add("oracle.cpu", "CPU solver equals LP vertex enumeration", cpu_fail == 0, d2.str());
  add("oracle.decision", "solver decisions satisfy invariants", inv_fail == 0, d3.str());
  add("oracle.gamma", "solver never beaten on the per-slot objective", gamma_fail == 0, d4.str());
  return out;
}

namespace {

ScenarioConfig random_sim_config(Rng& rng) {
  ScenarioConfig cfg;
  cfg.cpu.freq_set = default_freq_set();
  cfg.mcs_ul = default_mcs_set();
  cfg.mcs_dl = default_mcs_set();
  const int k_count = 1 + static_cast<int>(rng.next() % 4);
  cfg.ues.resize(k_count);
  for (auto& ue : cfg.ues) {
    ue.position = {rng.uniform(5.0, 100.0), rng.uniform(-50.0, 50.0)};
    ue.arrival_rate = rng.uniform(0.0, 10.0);
    ue.input_unit_bits = std::pow(10.0, rng.uniform(2.0, 3.0));
    ue.output_unit_bits = std::pow(10.0, rng.uniform(1.0, 3.0));
    ue.units_per_cycle = std::pow(10.0, rng.uniform(-5.0, -2.0));
  }
  cfg.lyapunov.v = std::pow(10.0, rng.uniform(3.0, 7.0));
  cfg.lyapunov.adapt_delta = rng.uniform() < 0.5;
  cfg.strategy.bandwidth_policy =
      rng.uniform() < 0.5 ? BandwidthPolicy::equal : BandwidthPolicy::heuristic;
  return validate_config(std::move(cfg));
}

}  // namespace

std::vector<CheckResult> invariant_suite(std::uint64_t seed, std::int64_t steps) {
  Rng rng(Rng::mix(seed, 0x1284));
  std::vector<CheckResult> out;

  // queue-level FIFO / conservation / count consistency under random service
  {
    std::int64_t fifo_bad = 0, conserve_bad = 0, count_bad = 0;
    const std::int64_t n = steps / 4;
    UeState ue;
    ue.delay_window = DelayWindow(100, 0.05);
    Count t = 0;
    Count delivered_units = 0;
    Count last_birth = -1;
    for (std::int64_t i = 0; i < n; ++i) {
      ++t;
      const Count n_ul = static_cast<Count>(rng.next() % 8);
      const Count n_c = static_cast<Count>(rng.next() % 8);
      const Count n_dl = static_cast<Count>(rng.next() % 8);
      const Count arrivals = static_cast<Count>(rng.next() % 6);
      auto transferred = serve_and_arrive_local(ue, n_ul, arrivals, t, 0);
      auto forwarded = serve_compute_queue(ue, n_c, std::move(transferred));
      auto delivered = serve_result_queue(ue, n_dl, std::move(forwarded), t, 0.01);
      for (const auto& du : delivered) {
        if (du.unit.birth_slot < last_birth) ++fifo_bad;
        last_birth = du.unit.birth_slot;
        ++delivered_units;
      }
      const auto s = snapshot(ue);
      if (s.q_l != static_cast<Count>(ue.q_local.size()) ||
          s.q_m != static_cast<Count>(ue.q_compute.size()) ||
          s.q_a != static_cast<Count>(ue.q_result.size()) ||
          s.q_tot != s.q_l + s.q_m + s.q_a)
        ++count_bad;
      if (ue.created != delivered_units + s.q_tot) ++conserve_bad;
      if (ue.delivered != delivered_units) ++conserve_bad;
    }
    std::ostringstream d;
    d << "fifo=" << fifo_bad << " conservation=" << conserve_bad << " counts=" << count_bad
      << " over " << n << " steps";
    out.push_back({"inv.queues", "FIFO order, conservation, count consistency",
                   fifo_bad + conserve_bad + count_bad == 0, d.str()});
  }

  // clamp and equilibrium properties of the virtual-queue and delta updates
  {
    std::int64_t bad = 0;
    const std::int64_t n = steps / 4;
    for (std::int64_t i = 0; i < n; ++i) {
      const double z = rng.uniform(0.0, 100.0);
      const Count q = static_cast<Count>(rng.next() % 200);
      const double q_avg = rng.uniform(0.0, 150.0);
      const double z2 = update_virtual_z(z, q, q_avg);
      if (z2 < 0.0) ++bad;
      if (std::abs(update_virtual_z(z, static_cast<Count>(q_avg), q_avg) -
                   std::max(0.0, z + std::floor(q_avg) - q_avg)) > 1e-12)
        ++bad;

      const double y = rng.uniform(0.0, 100.0);
      const double mu = rng.uniform(0.5, 20.0);
      const double eps = rng.uniform(1e-4, 0.5);
      const double delta = rng.uniform(1.0, 3.0);
      const double y2 = update_virtual_y(y, q, delta, q_avg, mu, eps);
      if (y2 < 0.0) ++bad;
      const double expected =
          std::max(0.0, y + mu * ((static_cast<double>(q) > delta * q_avg ? 1.0 : 0.0) - eps));
      if (std::abs(y2 - expected) > 1e-12) ++bad;

      const double dprev = rng.uniform(1.0, 5.0);
      const double nu = rng.uniform(0.0, 20.0);
      const double p_hat = rng.uniform(0.0, 1.0);
      const double d2 = update_delta(dprev, nu, p_hat, eps);
      if (d2 < 1.0) ++bad;
      if (std::abs(update_delta(dprev, nu, eps, eps) - dprev) > 1e-12) ++bad;
    }
    std::ostringstream d;
    d << bad << " violations over " << n << " randomized updates";
    out.push_back({"inv.updates", "virtual-queue and delta clamp/equilibrium properties",
                   bad == 0, d.str()});
  }

  // whole-loop conservation and decision invariants on random episodes
  {
    std::int64_t remaining = steps / 2;
    std::int64_t conserve_bad = 0;
    std::int64_t episodes = 0;
    while (remaining > 0) {
      const ScenarioConfig cfg = random_sim_config(rng);
      const Count horizon = std::min<std::int64_t>(remaining, 2000);
      EpisodeOptions opt;
      opt.per_slot_records = false;
      opt.keep_delays = false;
      const MetricsLog log = run_episode(cfg, horizon, rng.next(), opt);
      for (std::size_t k = 0; k < cfg.n_ues(); ++k)
        if (log.agg.created[k] != log.agg.delivered[k] + log.agg.in_queue[k]) ++conserve_bad;
      remaining -= horizon;
      ++episodes;
    }
    std::ostringstream d;
    d << conserve_bad << " conservation breaks over " << episodes
      << " random episodes (decision invariants asserted every slot)";
    out.push_back({"inv.episodes", "episode-level conservation and per-slot decision checks",
                   conserve_bad == 0, d.str()});
  }

  return out;
}

int report(const std::vector<CheckResult>& results, std::ostream& os) {
  int failures = 0;
  for (const auto& r : results) {
    os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name;
    if (!r.detail.empty()) os << " -- " << r.detail;
    os << "\n";
    if (!r.pass) ++failures;
  }
  return failures;
}

}  // namespace disco::verify
