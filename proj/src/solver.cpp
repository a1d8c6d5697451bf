#include "disco/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "disco/energy.hpp"
#include "disco/phy.hpp"

namespace disco {

std::vector<UeSlotView> make_views(const SlotState& st, const ScenarioConfig& cfg,
                                   const std::vector<double>& bw_ul,
                                   const std::vector<double>& bw_dl) {
  std::vector<UeSlotView> views(st.ues.size());
  for (std::size_t k = 0; k < st.ues.size(); ++k) {
    auto& v = views[k];
    v.q = snapshot(st.ues[k]);
    v.zy = v.q.z + cfg.ues[k].constraints.mu * v.q.y;
    v.q_tilde = 4.0 * static_cast<double>(v.q.q_m - v.q.q_a) + v.zy;
    v.delta = st.ues[k].delta;
    v.bw_ul = bw_ul[k];
    v.bw_dl = bw_dl[k];
    v.gain_ul = st.ues[k].gain_ul;
    v.gain_dl = st.ues[k].gain_dl;
  }
  return views;
}

SnrCache SnrCache::build(const ScenarioConfig& cfg) {
  SnrCache cache;
  const QamPerModel model(cfg.coding_gain_exponent);
  std::optional<SnrTable> table;
  if (cfg.snr_table_csv) table = SnrTable::from_csv(*cfg.snr_table_csv);

  auto thresholds = [&](const std::vector<McsScheme>& set, double target) {
    std::vector<double> gammas(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (table) {
        if (auto g = table->lookup(set[i])) {
          gammas[i] = *g;
          continue;
        }
      }
      gammas[i] = required_snr(model, set[i], target, cfg.phy.packet_bits);
    }
    return gammas;
  };

  cache.ul.reserve(cfg.n_ues());
  cache.dl.reserve(cfg.n_ues());
  for (const auto& ue : cfg.ues) {
    cache.ul.push_back(thresholds(cfg.mcs_ul, ue.constraints.per_target_ul));
    cache.dl.push_back(thresholds(cfg.mcs_dl, ue.constraints.per_target_dl));
  }
  return cache;
}

namespace {

// Coefficients and term expressions shared by the solvers and the objective
// evaluators. Keeping one code path for each term makes the enumeration
// oracle comparable at zero tolerance.
struct RadioCoeffs {
  double tau, tau_s;
  double va1, va2;
  double va1_tau;  // V a1 tau
  double va2_tau;
  double va1_tts;  // V a1 (tau + tau_s)
  double va2_tts;
};

RadioCoeffs radio_coeffs(const ScenarioConfig& cfg) {
  const auto a = cfg.effective_alphas();
  RadioCoeffs c;
  c.tau = cfg.timing.tau;
  c.tau_s = cfg.timing.tau_s;
  c.va1 = cfg.lyapunov.v * a[0];
  c.va2 = cfg.lyapunov.v * a[1];
  c.va1_tau = c.va1 * c.tau;
  c.va2_tau = c.va2 * c.tau;
  c.va1_tts = c.va1 * (c.tau + c.tau_s);
  c.va2_tts = c.va2 * (c.tau + c.tau_s);
  return c;
}

double uplink_term(const UeSlotView& u, Count n, double p_consumed,
                   const RadioCoeffs& c) {
  return (4.0 * static_cast<double>(u.q.q_m) - 2.0 * static_cast<double>(u.q.q_l)) *
             static_cast<double>(n) +
         u.zy * static_cast<double>(std::max<Count>(0, u.q.q_l - n)) +
         c.va1_tau * p_consumed;
}

double downlink_term(const UeSlotView& u, Count n, double p_dl,
                     const RadioCoeffs& c) {
  return -4.0 * static_cast<double>(u.q.q_a) * static_cast<double>(n) +
         u.zy * static_cast<double>(std::max<Count>(0, u.q.q_a - n)) +
         c.va2_tau * p_dl;
}

double ue_sleep_term(const UeSlotView& u, const UeProfile& prof,
                     const RadioCoeffs& c) {
  return u.zy * static_cast<double>(u.q.q_l + u.q.q_a) +
         c.va1 * (c.tau * prof.p_sleep + c.tau_s * prof.p_on);
}

double ue_active_term(const UeSlotView& u, const UeProfile& prof, Count n_ul,
                      double p_tx, Count n_dl, double p_dl, const RadioCoeffs& c) {
  const double ul = uplink_term(u, n_ul, prof.tx_power_curve(p_tx), c);
  const double dl = downlink_term(u, n_dl, p_dl, c);
  return ul + dl + c.va1_tts * prof.p_on;
}

double ap_sleep_term(const ScenarioConfig& cfg, const RadioCoeffs& c) {
  return c.va2 * (c.tau * cfg.ap.p_sleep + c.tau_s * cfg.ap.p_on);
}

bool candidate_better(double obj, double power, int modulation,
                      const LinkChoice& best, const std::vector<McsScheme>& set) {
  if (obj != best.objective) return obj < best.objective;
  if (power != best.power) return power < best.power;
  const int best_m = best.mcs ? set[*best.mcs].modulation_order : -1;
  return modulation < best_m;
}

}  // namespace

LinkChoice solve_uplink(const UeSlotView& u, const UeProfile& prof,
                        const ScenarioConfig& cfg,
                        std::span<const double> gamma_ul) {
  const RadioCoeffs c = radio_coeffs(cfg);
  LinkChoice best;  // idle: no MCS, zero power, zero units
  best.objective = uplink_term(u, 0, 0.0, c);
  if (u.bw_ul <= 0.0 || u.gain_ul <= 0.0) return best;

  const LinkBudget link{u.gain_ul, u.bw_ul, noise_power(cfg.phy, u.bw_ul)};
  for (std::size_t i = 0; i < cfg.mcs_ul.size(); ++i) {
    const double p = min_tx_power(gamma_ul[i], link);
    if (p > prof.p_tx_max) continue;
    const Count n = uplink_units(cfg.mcs_ul[i], u.bw_ul, cfg.timing.tau,
                                 prof.input_unit_bits, cfg.phy.packet_bits);
    const double obj = uplink_term(u, n, prof.tx_power_curve(p), c);
    if (candidate_better(obj, p, cfg.mcs_ul[i].modulation_order, best, cfg.mcs_ul)) {
      best.mcs = static_cast<int>(i);
      best.power = p;
      best.n = n;
      best.objective = obj;
    }
  }
  return best;
}

LinkChoice solve_downlink(const UeSlotView& u, const UeProfile& prof,
                          const ScenarioConfig& cfg,
                          std::span<const double> gamma_dl) {
  const RadioCoeffs c = radio_coeffs(cfg);
  LinkChoice best;
  best.objective = downlink_term(u, 0, 0.0, c);
  if (u.bw_dl <= 0.0 || u.gain_dl <= 0.0) return best;

  const double p_cap = cfg.ap.p_dl_max / static_cast<double>(cfg.n_ues());
  const LinkBudget link{u.gain_dl, u.bw_dl, noise_power(cfg.phy, u.bw_dl)};
  for (std::size_t i = 0; i < cfg.mcs_dl.size(); ++i) {
    const double p = min_tx_power(gamma_dl[i], link);
    if (p > p_cap) continue;
    const Count n = downlink_units(cfg.mcs_dl[i], u.bw_dl, cfg.timing.tau,
                                   prof.output_unit_bits, cfg.phy.packet_bits);
    const double obj = downlink_term(u, n, p, c);
    if (candidate_better(obj, p, cfg.mcs_dl[i].modulation_order, best, cfg.mcs_dl)) {
      best.mcs = static_cast<int>(i);
      best.power = p;
      best.n = n;
      best.objective = obj;
    }
  }
  return best;
}

RadioSolution solve_radio(std::span<const UeSlotView> views,
                          const ScenarioConfig& cfg, const SnrCache& snr) {
  const RadioCoeffs c = radio_coeffs(cfg);
  const std::size_t k_count = views.size();
  RadioSolution sol;
  sol.ues.resize(k_count);

  double sum_sleep = 0.0;
  double sum_chosen = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    auto& r = sol.ues[k];
    r.ul = solve_uplink(views[k], cfg.ues[k], cfg, snr.ul[k]);
    r.dl = solve_downlink(views[k], cfg.ues[k], cfg, snr.dl[k]);
    r.l_sleep = ue_sleep_term(views[k], cfg.ues[k], c);
    {
      const double term = r.ul.objective + r.dl.objective + c.va1_tts * cfg.ues[k].p_on;
      r.l_active = term;
    }
    r.active = cfg.strategy.force_ue_on ? true : r.l_active < r.l_sleep;
    sum_sleep += r.l_sleep;
    sum_chosen += r.active ? r.l_active : r.l_sleep;
  }
  sol.l_sleep = sum_sleep + ap_sleep_term(cfg, c);
  sol.l_active = sum_chosen + c.va2_tts * cfg.ap.p_on;
  sol.ap_active = cfg.strategy.force_ap_on ? true : sol.l_active < sol.l_sleep;
  sol.objective = sol.ap_active ? sol.l_active : sol.l_sleep;

  if (!sol.ap_active) {
    for (auto& r : sol.ues) {
      r.active = false;
      r.ul = LinkChoice{};
      r.dl = LinkChoice{};
    }
  }
  return sol;
}

double radio_objective(std::span<const UeSlotView> views,
                       const ScenarioConfig& cfg, const Decision& d) {
  const RadioCoeffs c = radio_coeffs(cfg);
  if (!d.ap_active) {
    double s = 0.0;
    for (std::size_t k = 0; k < views.size(); ++k)
      s += ue_sleep_term(views[k], cfg.ues[k], c);
    return s + ap_sleep_term(cfg, c);
  }
  double s = 0.0;
  for (std::size_t k = 0; k < views.size(); ++k) {
    const auto& x = d.ues[k];
    if (x.active) {
      const double term =
          ue_active_term(views[k], cfg.ues[k], x.n_ul, x.p_tx, x.n_dl, x.p_dl, c);
      s += term;
    } else {
      s += ue_sleep_term(views[k], cfg.ues[k], c);
    }
  }
  return s + c.va2_tts * cfg.ap.p_on;
}

CpuSolution solve_cpu(std::span<const UeSlotView> views,
                      const ScenarioConfig& cfg) {
  const std::size_t k_count = views.size();
  std::vector<double> cap(k_count);
  for (std::size_t k = 0; k < k_count; ++k)
    cap[k] = static_cast<double>(views[k].q.q_m + 1) /
             (cfg.timing.tau * cfg.ues[k].units_per_cycle);

  // greedy order: decreasing J_k * q_tilde_k, ties by UE index
  std::vector<std::size_t> order(k_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cfg.ues[a].units_per_cycle * views[a].q_tilde >
           cfg.ues[b].units_per_cycle * views[b].q_tilde;
  });

  CpuSolution best;
  bool have_best = false;
  std::vector<double> f(k_count);
  for (double f_c : cfg.cpu.freq_set) {
    if (cfg.strategy.force_es_on && f_c == 0.0) continue;
    std::fill(f.begin(), f.end(), 0.0);
    if (cfg.strategy.equal_cpu_split) {
      for (std::size_t k = 0; k < k_count; ++k)
        f[k] = std::min(f_c / static_cast<double>(k_count), cap[k]);
    } else {
      double remaining = f_c;
      for (std::size_t idx : order) {
        if (remaining <= 0.0) break;
        f[idx] = std::min(cap[idx], remaining);
        remaining -= f[idx];
      }
      for (std::size_t k = 0; k < k_count; ++k)
        if (views[k].q_tilde <= 0.0) f[k] = 0.0;
    }
    const double obj = cpu_objective(views, cfg, f_c, f);
    if (!have_best || obj < best.objective) {
      best.f_c = f_c;
      best.es_active = f_c > 0.0;
      best.f_k = f;
      best.objective = obj;
      have_best = true;
    }
  }
  if (!have_best) throw std::logic_error("solve_cpu: empty frequency set");
  return best;
}

double cpu_objective(std::span<const UeSlotView> views,
                     const ScenarioConfig& cfg, double f_c,
                     std::span<const double> f_k) {
  const double va3 = cfg.lyapunov.v * cfg.effective_alphas()[2];
  double load = 0.0;
  for (std::size_t k = 0; k < views.size(); ++k)
    load += views[k].q_tilde * f_k[k] * cfg.ues[k].units_per_cycle;
  const double i_m = f_c > 0.0 ? 1.0 : 0.0;
  return va3 * cfg.timing.tau *
             (i_m * (cfg.cpu.p_on - cfg.cpu.p_sleep) + cfg.cpu.p_sleep +
              cfg.cpu.kappa * f_c * f_c * f_c) -
         cfg.timing.tau * load + va3 * cfg.timing.tau_s * cfg.cpu.p_sleep;
}

Decision assemble_decision(const RadioSolution& radio, const CpuSolution& cpu,
                           const ScenarioConfig& cfg) {
  Decision d;
  d.ap_active = radio.ap_active;
  d.es_active = cpu.es_active;
  d.f_c = cpu.f_c;
  d.ues.resize(cfg.n_ues());
  for (std::size_t k = 0; k < cfg.n_ues(); ++k) {
    auto& u = d.ues[k];
    const auto& r = radio.ues[k];
    u.active = radio.ap_active && r.active;
    if (u.active) {
      u.mcs_ul = r.ul.mcs;
      u.p_tx = r.ul.power;
      u.n_ul = r.ul.n;
      u.mcs_dl = r.dl.mcs;
      u.p_dl = r.dl.power;
      u.n_dl = r.dl.n;
    }
    u.f_k = cpu.f_k[k];
    u.n_comp = compute_units(u.f_k, cfg.ues[k].units_per_cycle, cfg.timing.tau);
  }
  return d;
}

double eval_gamma_objective(std::span<const UeSlotView> views,
                            const ScenarioConfig& cfg, const Decision& d) {
  double s = 0.0;
  double e_u = 0.0;
  double p_dl_total = 0.0;
  for (std::size_t k = 0; k < views.size(); ++k) {
    const auto& u = views[k];
    const auto& x = d.ues[k];
    s += (4.0 * static_cast<double>(u.q.q_m) - 2.0 * static_cast<double>(u.q.q_l)) *
             static_cast<double>(x.n_ul) -
         u.q_tilde * cfg.timing.tau * x.f_k * cfg.ues[k].units_per_cycle -
         4.0 * static_cast<double>(u.q.q_a) * static_cast<double>(x.n_dl) +
         u.zy * static_cast<double>(std::max<Count>(0, u.q.q_l - x.n_ul) +
                                    std::max<Count>(0, u.q.q_a - x.n_dl));
    e_u += ue_energy(x.active, x.p_tx, cfg.ues[k], cfg.timing);
    p_dl_total += x.p_dl;
  }
  const double e_a = ap_energy(d.ap_active, p_dl_total, cfg.ap, cfg.timing);
  const double e_m = es_energy(d.f_c, cfg.cpu, cfg.timing);
  const auto w = weighted_energy(e_u, e_a, e_m, cfg.effective_alphas());
  return s + cfg.lyapunov.v * w.weighted;
}

std::vector<UeCapacityBounds> capacity_bounds(const ScenarioConfig& cfg) {
  const double bw_ul = cfg.strategy.bandwidth_policy == BandwidthPolicy::heuristic
                           ? cfg.phy.total_bw_ul
                           : cfg.phy.total_bw_ul / static_cast<double>(cfg.n_ues());
  const double bw_dl = cfg.strategy.bandwidth_policy == BandwidthPolicy::heuristic
                           ? cfg.phy.total_bw_dl
                           : cfg.phy.total_bw_dl / static_cast<double>(cfg.n_ues());
  std::vector<UeCapacityBounds> out(cfg.n_ues());
  for (std::size_t k = 0; k < cfg.n_ues(); ++k) {
    const auto& ue = cfg.ues[k];
    Count ul = 0, dl = 0;
    for (const auto& m : cfg.mcs_ul)
      ul = std::max(ul, uplink_units(m, bw_ul, cfg.timing.tau, ue.input_unit_bits,
                                     cfg.phy.packet_bits));
    for (const auto& m : cfg.mcs_dl)
      dl = std::max(dl, downlink_units(m, bw_dl, cfg.timing.tau, ue.output_unit_bits,
                                       cfg.phy.packet_bits));
    out[k].n_ul_max = ul;
    out[k].n_dl_max = dl;
    out[k].n_comp_max = compute_units(cfg.cpu.f_max(), ue.units_per_cycle, cfg.timing.tau);
  }
  return out;
}

double eval_exact_objective(std::span<const UeSlotView> views,
                            const ScenarioConfig& cfg, const Decision& d,
                            std::span<const Count> arrivals) {
  const auto caps = capacity_bounds(cfg);
  double s = 0.0;
  double e_u = 0.0;
  double p_dl_total = 0.0;
  for (std::size_t k = 0; k < views.size(); ++k) {
    const auto& u = views[k];
    const auto& x = d.ues[k];
    const double q_avg = cfg.ues[k].constraints.d_avg * cfg.ues[k].arrival_rate / cfg.timing.tau_l;
    const Count max_l = std::max<Count>(0, u.q.q_l - x.n_ul);
    const Count max_m = std::max<Count>(0, u.q.q_m - x.n_comp);
    const Count max_a = std::max<Count>(0, u.q.q_a - x.n_dl);
    const double step_arg =
        static_cast<double>(max_l + arrivals[k] + max_m +
                            std::min(u.q.q_l, caps[k].n_ul_max) + max_a +
                            std::min(u.q.q_m, caps[k].n_comp_max)) -
        u.delta * q_avg;
    const double step = step_arg > 0.0 ? 1.0 : 0.0;
    s += -2.0 * static_cast<double>(u.q.q_l) * static_cast<double>(x.n_ul) +
         4.0 * static_cast<double>(u.q.q_m) * static_cast<double>(x.n_ul - x.n_comp) +
         4.0 * static_cast<double>(u.q.q_a) * static_cast<double>(x.n_comp - x.n_dl) +
         u.q.z * static_cast<double>(max_l + max_m + max_a) +
         cfg.ues[k].constraints.mu * u.q.y * step;
    e_u += ue_energy(x.active, x.p_tx, cfg.ues[k], cfg.timing);
    p_dl_total += x.p_dl;
  }
  const double e_a = ap_energy(d.ap_active, p_dl_total, cfg.ap, cfg.timing);
  const double e_m = es_energy(d.f_c, cfg.cpu, cfg.timing);
  const auto w = weighted_energy(e_u, e_a, e_m, cfg.effective_alphas());
  return s + cfg.lyapunov.v * w.weighted;
}

double compute_zeta(const ScenarioConfig& cfg) {
  const auto caps = capacity_bounds(cfg);
  double zeta = 0.0;
  for (std::size_t k = 0; k < cfg.n_ues(); ++k) {
    const auto& ue = cfg.ues[k];
    if (!ue.arrival_max)
      throw std::invalid_argument("compute_zeta: arrival_max not configured for UE " +
                                  std::to_string(k));
    const double a_max = *ue.arrival_max;
    const double nu = static_cast<double>(caps[k].n_ul_max);
    const double nc = static_cast<double>(caps[k].n_comp_max);
    const double nd = static_cast<double>(caps[k].n_dl_max);
    const double q_avg = ue.constraints.d_avg * ue.arrival_rate / cfg.timing.tau_l;
    const double mu = ue.constraints.mu;
    const double eps = ue.constraints.epsilon;
    zeta += a_max * a_max + 3.0 * nu * nu + 4.0 * nc * nc + 2.0 * nd * nd +
            0.5 * q_avg * q_avg + 0.5 * mu * mu * (1.0 - eps) * (1.0 - eps);
  }
  return zeta;
}

}  // namespace disco
