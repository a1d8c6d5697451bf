#include "disco/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>

#include "disco/control.hpp"
#include "disco/energy.hpp"
#include "disco/phy.hpp"

namespace disco {

double MetricsLog::survivor(std::size_t k, double d) const {
  const auto& ds = delays.at(k);
  if (ds.empty()) return 0.0;
  std::size_t over = 0;
  for (double x : ds)
    if (x > d) ++over;
  return static_cast<double>(over) / static_cast<double>(ds.size());
}

Count sample_arrivals(double rate, Rng& rng) {
  if (rate <= 0.0) return 0;
  return rng.poisson(rate);
}

namespace {

// Per-episode accumulators folded into EpisodeAggregates at the end.
struct Accum {
  Count ap_on = 0, es_on = 0;
  std::vector<Count> ue_on;
  double e_u = 0, e_a = 0, e_m = 0, e_tot = 0, e_w = 0;
  std::vector<double> q_tot_sum;      // end-of-slot queue sums
  std::vector<double> in_system_sum;  // occupancy incl. the delivery slot
};

}  // namespace

Decision run_slot(SlotState& st, const ScenarioConfig& cfg, const SnrCache& snr,
                  Rng& channel_rng, Rng& arrival_rng, MetricsLog* log) {
  const std::size_t k_count = cfg.n_ues();
  const Count t = st.t + 1;

  // block fading, one draw per UE per direction
  for (std::size_t k = 0; k < k_count; ++k) {
    st.ues[k].gain_ul =
        sample_channel_gain(cfg.ues[k].position, cfg.ap_position, cfg.phy, channel_rng);
    st.ues[k].gain_dl =
        sample_channel_gain(cfg.ues[k].position, cfg.ap_position, cfg.phy, channel_rng);
  }

  // spectral resources are assigned before the radio solver runs
  std::vector<PressureTerms> pressures(k_count);
  for (std::size_t k = 0; k < k_count; ++k)
    pressures[k] = pressure_terms(snapshot(st.ues[k]), cfg.ues[k].constraints.mu);
  const BandwidthShares bw =
      allocate_bandwidth(pressures, cfg.strategy.bandwidth_policy,
                         cfg.phy.total_bw_ul, cfg.phy.total_bw_dl);

  const auto views = make_views(st, cfg, bw.ul, bw.dl);
  const RadioSolution radio = solve_radio(views, cfg, snr);
  const CpuSolution cpu = solve_cpu(views, cfg);
  Decision dec = assemble_decision(radio, cpu, cfg);
  check_decision(dec, cfg);

  SlotRecord rec;
  rec.t = t;
  double p_dl_total = 0.0;
  double e_u = 0.0;

  for (std::size_t k = 0; k < k_count; ++k) {
    auto& ue = st.ues[k];
    const auto& x = dec.ues[k];
    const Count arrivals =
        cfg.arrival_process == ArrivalProcess::constant
            ? static_cast<Count>(std::llround(cfg.ues[k].arrival_rate))
            : sample_arrivals(cfg.ues[k].arrival_rate, arrival_rng);

    auto transferred =
        serve_and_arrive_local(ue, x.n_ul, arrivals, t, static_cast<std::int32_t>(k));
    auto forwarded = serve_compute_queue(ue, x.n_comp, std::move(transferred));
    auto delivered =
        serve_result_queue(ue, x.n_dl, std::move(forwarded), t, cfg.timing.tau_l);

    const auto snap_next = snapshot(ue);
    const Count q_tot_next = snap_next.q_tot;
    const double q_avg = cfg.q_avg[k];
    const auto& cons = cfg.ues[k].constraints;

    const bool oos = static_cast<double>(q_tot_next) > ue.delta * q_avg;
    ue.oos_queue_slots += oos ? 1 : 0;
    ue.z = update_virtual_z(ue.z, q_tot_next, q_avg);
    ue.y = update_virtual_y(ue.y, q_tot_next, ue.delta, q_avg, cons.mu, cons.epsilon);

    for (const auto& du : delivered) {
      ue.delay_window.push(du.delay_s);
      if (du.delay_s > cons.d_max) ++ue.oos_deliveries;
      if (log && log->opt.keep_delays) log->delays[k].push_back(du.delay_s);
    }
    if (cfg.lyapunov.adapt_delta) {
      const double nu = stepsize(cfg.nu_init(k), cfg.lyapunov.beta, t);
      ue.delta = update_delta(ue.delta, nu, ue.delay_window.oos_fraction(), cons.epsilon);
    }

    e_u += ue_energy(x.active, x.p_tx, cfg.ues[k], cfg.timing);
    p_dl_total += x.p_dl;

    rec.arrivals += arrivals;
    rec.delivered += static_cast<Count>(delivered.size());
    rec.q_l += snap_next.q_l;
    rec.q_m += snap_next.q_m;
    rec.q_a += snap_next.q_a;
    rec.z_sum += ue.z;
    rec.y_sum += ue.y;
    rec.delta_mean += ue.delta / static_cast<double>(k_count);
    rec.oos_queue_events += oos ? 1 : 0;
    rec.active_ues += x.active ? 1 : 0;
  }

  const double e_a = ap_energy(dec.ap_active, p_dl_total, cfg.ap, cfg.timing);
  const double e_m = es_energy(dec.f_c, cfg.cpu, cfg.timing);
  const auto w = weighted_energy(e_u, e_a, e_m, cfg.effective_alphas());
  rec.e_u = e_u;
  rec.e_a = e_a;
  rec.e_m = e_m;
  rec.e_tot = w.total;
  rec.e_w = w.weighted;
  rec.ap_active = dec.ap_active;
  rec.es_active = dec.es_active;
  rec.f_c = dec.f_c;

  st.t = t;
  if (log) {
    if (log->opt.per_slot_records) log->slots.push_back(rec);
    if (log->opt.track_delta)
      for (std::size_t k = 0; k < k_count; ++k)
        log->delta_traj[k].push_back(st.ues[k].delta);
  }
  return dec;
}

MetricsLog run_episode(const ScenarioConfig& cfg, Count horizon,
                       std::uint64_t seed, const EpisodeOptions& opt) {
  if (horizon <= 0) throw std::invalid_argument("run_episode: horizon must be positive");
  const std::size_t k_count = cfg.n_ues();
  if (cfg.q_avg.size() != k_count)
    throw std::invalid_argument("run_episode: config not validated");

  const SnrCache snr = SnrCache::build(cfg);
  SlotState st = make_initial_state(cfg);
  Rng channel_rng(Rng::mix(seed, 1));
  Rng arrival_rng(Rng::mix(seed, 2));

  MetricsLog log;
  log.opt = opt;
  if (opt.per_slot_records) log.slots.reserve(static_cast<std::size_t>(horizon));
  if (opt.keep_delays) log.delays.resize(k_count);
  if (opt.track_delta) log.delta_traj.resize(k_count);

  Accum acc;
  acc.ue_on.assign(k_count, 0);
  acc.q_tot_sum.assign(k_count, 0.0);
  acc.in_system_sum.assign(k_count, 0.0);

  std::vector<Count> delivered_before(k_count);
  for (Count i = 0; i < horizon; ++i) {
    for (std::size_t k = 0; k < k_count; ++k)
      delivered_before[k] = st.ues[k].delivered;
    const Decision dec = run_slot(st, cfg, snr, channel_rng, arrival_rng, &log);
    acc.ap_on += dec.ap_active ? 1 : 0;
    acc.es_on += dec.es_active ? 1 : 0;
    double e_u_slot = 0.0, p_dl_total = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      const auto& x = dec.ues[k];
      acc.ue_on[k] += x.active ? 1 : 0;
      e_u_slot += ue_energy(x.active, x.p_tx, cfg.ues[k], cfg.timing);
      p_dl_total += x.p_dl;
      const auto s = snapshot(st.ues[k]);
      const Count delivered_now = st.ues[k].delivered - delivered_before[k];
      acc.q_tot_sum[k] += static_cast<double>(s.q_tot);
      // units present during the slot: end-of-slot queue plus deliveries,
      // identically start-of-slot queue plus arrivals
      acc.in_system_sum[k] += static_cast<double>(s.q_tot + delivered_now);
    }
    const double e_a_slot = ap_energy(dec.ap_active, p_dl_total, cfg.ap, cfg.timing);
    const double e_m_slot = es_energy(dec.f_c, cfg.cpu, cfg.timing);
    const auto w = weighted_energy(e_u_slot, e_a_slot, e_m_slot, cfg.effective_alphas());
    acc.e_u += e_u_slot;
    acc.e_a += e_a_slot;
    acc.e_m += e_m_slot;
    acc.e_tot += w.total;
    acc.e_w += w.weighted;
  }

  // delay sums from the recorded per-unit delays when kept; otherwise from
  // the per-UE windows (approximate only if the window overflowed)
  auto& agg = log.agg;
  agg.horizon = horizon;
  agg.n_ues = k_count;
  const double ht = static_cast<double>(horizon);
  agg.mean_e_u = acc.e_u / ht;
  agg.mean_e_a = acc.e_a / ht;
  agg.mean_e_m = acc.e_m / ht;
  agg.mean_e_tot = acc.e_tot / ht;
  agg.mean_e_w = acc.e_w / ht;
  agg.duty_ap = static_cast<double>(acc.ap_on) / ht;
  agg.duty_es = static_cast<double>(acc.es_on) / ht;
  agg.duty_ue.resize(k_count);
  agg.mean_delay_ts.assign(k_count, 0.0);
  agg.mean_delay_little.assign(k_count, 0.0);
  agg.mean_q_tot.assign(k_count, 0.0);
  agg.oos_rate_queue.assign(k_count, 0.0);
  agg.oos_rate_delay.assign(k_count, 0.0);
  agg.final_z_over_t.assign(k_count, 0.0);
  agg.final_y_over_t.assign(k_count, 0.0);
  agg.delta_final.assign(k_count, 0.0);
  agg.created.assign(k_count, 0);
  agg.delivered.assign(k_count, 0);
  agg.in_queue.assign(k_count, 0);

  double delay_sum_all = 0.0;
  Count delay_n_all = 0;
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto& ue = st.ues[k];
    agg.duty_ue[k] = static_cast<double>(acc.ue_on[k]) / ht;
    agg.duty_ue_mean += agg.duty_ue[k] / static_cast<double>(k_count);
    double dsum = 0.0;
    Count dn = 0;
    if (opt.keep_delays) {
      for (double d : log.delays[k]) dsum += d;
      dn = static_cast<Count>(log.delays[k].size());
    } else {
      for (double d : ue.delay_window.values()) dsum += d;
      dn = static_cast<Count>(ue.delay_window.size());
    }
    agg.mean_delay_ts[k] = dn > 0 ? dsum / static_cast<double>(dn) : 0.0;
    delay_sum_all += dsum;
    delay_n_all += dn;
    const double rate_per_s = cfg.ues[k].arrival_rate / cfg.timing.tau_l;
    agg.mean_delay_little[k] =
        rate_per_s > 0.0 ? (acc.in_system_sum[k] / ht) / rate_per_s : 0.0;
    agg.mean_q_tot[k] = acc.q_tot_sum[k] / ht;
    agg.oos_rate_queue[k] = static_cast<double>(ue.oos_queue_slots) / ht;
    agg.oos_rate_delay[k] =
        ue.delivered > 0 ? static_cast<double>(ue.oos_deliveries) /
                               static_cast<double>(ue.delivered)
                         : 0.0;
    agg.final_z_over_t[k] = ue.z / ht;
    agg.final_y_over_t[k] = ue.y / ht;
    agg.delta_final[k] = ue.delta;
    agg.created[k] = ue.created;
    agg.delivered[k] = ue.delivered;
    agg.in_queue[k] = static_cast<Count>(ue.q_local.size() + ue.q_compute.size() +
                                         ue.q_result.size());
  }
  agg.mean_delay_ts_all =
      delay_n_all > 0 ? delay_sum_all / static_cast<double>(delay_n_all) : 0.0;
  return log;
}

ScenarioConfig randomize_scenario(ScenarioConfig base,
                                  const RandomizationSpec& spec, Rng& rng) {
  const double half = spec.area_side / 2.0;
  for (auto& ue : base.ues) {
    ue.position.x = base.ap_position.x + rng.uniform(-half, half);
    ue.position.y = base.ap_position.y + rng.uniform(-half, half);
    ue.input_unit_bits = std::pow(
        10.0, rng.uniform(spec.input_bits_log10[0], spec.input_bits_log10[1]));
    ue.output_unit_bits = std::pow(
        10.0, rng.uniform(spec.output_bits_log10[0], spec.output_bits_log10[1]));
    ue.units_per_cycle = std::pow(
        10.0, rng.uniform(spec.units_per_cycle_log10[0], spec.units_per_cycle_log10[1]));
    ue.arrival_rate = rng.uniform(spec.arrival_rate[0], spec.arrival_rate[1]);
  }
  base.randomization.reset();  // positions are now concrete
  return validate_config(std::move(base));
}

std::uint64_t realization_seed(std::uint64_t master_seed, int realization) {
  return Rng::mix(master_seed, static_cast<std::uint64_t>(realization) + 1);
}

MonteCarloResult run_monte_carlo(const ScenarioConfig& base, Count horizon,
                                 int n_realizations, int jobs,
                                 std::uint64_t master_seed,
                                 const EpisodeOptions& opt) {
  if (n_realizations <= 0)
    throw std::invalid_argument("run_monte_carlo: need at least one realization");
  jobs = std::max(1, jobs);

  auto one = [&](int r) {
    const std::uint64_t seed = realization_seed(master_seed, r);
    ScenarioConfig cfg = base;
    if (base.randomization) {
      Rng draw(Rng::mix(seed, 0));
      cfg = randomize_scenario(std::move(cfg), *base.randomization, draw);
    }
    return run_episode(cfg, horizon, seed, opt).agg;
  };

  MonteCarloResult out;
  out.episodes.resize(static_cast<std::size_t>(n_realizations));
  for (int start = 0; start < n_realizations; start += jobs) {
    const int end = std::min(n_realizations, start + jobs);
    std::vector<std::future<EpisodeAggregates>> batch;
    for (int r = start; r < end; ++r)
      batch.push_back(std::async(std::launch::async, one, r));
    for (int r = start; r < end; ++r)
      out.episodes[static_cast<std::size_t>(r)] = batch[static_cast<std::size_t>(r - start)].get();
  }

  std::vector<double> e_w, e_tot, e_u, e_a, e_m, delay, d_ap, d_es, d_ue;
  for (const auto& a : out.episodes) {
    e_w.push_back(a.mean_e_w);
    e_tot.push_back(a.mean_e_tot);
    e_u.push_back(a.mean_e_u);
    e_a.push_back(a.mean_e_a);
    e_m.push_back(a.mean_e_m);
    delay.push_back(a.mean_delay_ts_all);
    d_ap.push_back(a.duty_ap);
    d_es.push_back(a.duty_es);
    d_ue.push_back(a.duty_ue_mean);
  }
  out.mean_e_w = mean_of(e_w);
  out.ci_e_w = ci95_of(e_w);
  out.mean_e_tot = mean_of(e_tot);
  out.ci_e_tot = ci95_of(e_tot);
  out.mean_e_u = mean_of(e_u);
  out.mean_e_a = mean_of(e_a);
  out.mean_e_m = mean_of(e_m);
  out.mean_delay = mean_of(delay);
  out.ci_delay = ci95_of(delay);
  out.duty_ap = mean_of(d_ap);
  out.duty_es = mean_of(d_es);
  out.duty_ue = mean_of(d_ue);
  return out;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double ci95_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace disco
