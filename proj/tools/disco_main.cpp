// Command-line front end: single runs, parameter sweeps, and the
// verification suites. Emits plot-ready CSV plus JSON aggregates.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "disco/config.hpp"
#include "disco/metrics_io.hpp"
#include "disco/sim.hpp"
#include "disco/verify.hpp"

namespace fs = std::filesystem;
using namespace disco;

namespace {

constexpr const char* kVersion = "disco 0.1.0";

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string strategy;
  std::string bandwidth;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  long long slots = 10000;
  int jobs = 1;
};

std::uint64_t resolve_seed(const CommonOpts& o) {
  if (const char* env = std::getenv("DISCO_SEED")) return std::strtoull(env, nullptr, 10);
  return o.seed;
}

ScenarioConfig load_with_overrides(const CommonOpts& o) {
  std::ifstream in(o.config_path);
  if (!in) throw ConfigError({"cannot open config file: " + o.config_path});
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  for (const auto& ov : o.overrides) text = apply_override(text, ov);
  ScenarioConfig cfg = config_from_json(text);
  if (!o.strategy.empty()) {
    const auto bw = cfg.strategy.bandwidth_policy;
    cfg.strategy = strategy_preset(o.strategy);
    cfg.strategy.bandwidth_policy = bw;
  }
  if (!o.bandwidth.empty()) {
    if (o.bandwidth == "equal")
      cfg.strategy.bandwidth_policy = BandwidthPolicy::equal;
    else if (o.bandwidth == "heuristic")
      cfg.strategy.bandwidth_policy = BandwidthPolicy::heuristic;
    else
      throw ConfigError({"--bandwidth must be 'equal' or 'heuristic'"});
  }
  return validate_config(std::move(cfg));
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

RunManifest make_manifest(const std::string& command, const CommonOpts& o,
                          std::uint64_t seed, const std::string& out_dir) {
  RunManifest m;
  m.command = command;
  m.config_path = o.config_path;
  m.overrides = o.overrides;
  m.seed = seed;
  m.out_dir = out_dir;
  m.version = kVersion;
  return m;
}

int cmd_run(const CommonOpts& o) {
  const ScenarioConfig cfg = load_with_overrides(o);
  const std::uint64_t seed = resolve_seed(o);
  const std::string hash = config_hash(cfg);
  const fs::path out_dir =
      o.out_dir.empty() ? fs::path("runs") / (hash + "_" + std::to_string(seed))
                        : fs::path(o.out_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "manifest.json", manifest_json(make_manifest("run", o, seed, out_dir.string())));
  write_file(out_dir / "config.json", config_to_json(cfg));

  ScenarioConfig run_cfg = cfg;
  if (cfg.randomization) {
    Rng draw(Rng::mix(seed, 0));
    run_cfg = randomize_scenario(std::move(run_cfg), *cfg.randomization, draw);
  }
  const MetricsLog log = run_episode(run_cfg, o.slots, seed);
  {
    std::ofstream csv(out_dir / ("slots_" + hash + "_" + std::to_string(seed) + ".csv"),
                      std::ios::binary);
    write_slot_csv(log, csv);
  }
  write_file(out_dir / ("aggregates_" + hash + "_" + std::to_string(seed) + ".json"),
             aggregates_json(log, hash, seed));
  std::cout << "run complete: " << o.slots << " slots, mean E_w = " << log.agg.mean_e_w
            << " J/slot, mean delay = " << log.agg.mean_delay_ts_all << " s\n"
            << "artifacts in " << out_dir.string() << "\n";
  return 0;
}

struct SweepParam {
  std::string name;  // "V" or "arrival"
  std::vector<double> values;
};

SweepParam parse_sweep_param(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw ConfigError({"--param must look like V=1e5,1e6 or arrival=5,10"});
  SweepParam p;
  p.name = text.substr(0, eq);
  if (p.name != "V" && p.name != "arrival")
    throw ConfigError({"--param supports V=... or arrival=..., got " + p.name});
  std::string rest = text.substr(eq + 1);
  std::stringstream ss(rest);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) p.values.push_back(std::stod(tok));
  }
  if (p.values.empty()) throw ConfigError({"--param list is empty"});
  return p;
}

ScenarioConfig with_param(ScenarioConfig cfg, const SweepParam& p, double value) {
  if (p.name == "V") {
    cfg.lyapunov.v = value;
  } else {
    for (auto& ue : cfg.ues) ue.arrival_rate = value;
    if (cfg.randomization) cfg.randomization->arrival_rate = {value, value};
  }
  return validate_config(std::move(cfg));
}

// strategy entries may carry a bandwidth suffix: holistic@heuristic
std::pair<std::string, std::string> split_strategy(const std::string& s) {
  const auto at = s.find('@');
  if (at == std::string::npos) return {s, ""};
  return {s.substr(0, at), s.substr(at + 1)};
}

int cmd_sweep(const CommonOpts& o, const std::string& param_text,
              const std::string& strategies_text, int realizations) {
  const ScenarioConfig base = load_with_overrides(o);
  const SweepParam param = parse_sweep_param(param_text);
  std::vector<std::string> strategy_list;
  {
    std::stringstream ss(strategies_text);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) strategy_list.push_back(tok);
  }
  if (strategy_list.empty()) strategy_list.push_back(base.strategy.name);

  const std::uint64_t seed = resolve_seed(o);
  const std::string hash = config_hash(base);
  const fs::path out_dir =
      o.out_dir.empty() ? fs::path("sweeps") / (hash + "_" + std::to_string(seed))
                        : fs::path(o.out_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "manifest.json",
             manifest_json(make_manifest("sweep", o, seed, out_dir.string())));

  std::ostringstream tradeoff, entity, duty;
  tradeoff << "strategy,param,value,mean_e_w,ci_e_w,mean_delay,ci_delay\n";
  entity << "strategy,param,value,mean_e_u,mean_e_a,mean_e_m,mean_e_tot,ci_e_tot\n";
  duty << "strategy,param,value,duty_ap,duty_ue,duty_es\n";

  EpisodeOptions light;
  light.per_slot_records = false;

  for (const auto& entry : strategy_list) {
    const auto [name, bw] = split_strategy(entry);
    for (double value : param.values) {
      ScenarioConfig cfg = base;
      cfg.strategy = strategy_preset(name);
      if (bw == "heuristic")
        cfg.strategy.bandwidth_policy = BandwidthPolicy::heuristic;
      else if (bw == "equal" || bw.empty())
        cfg.strategy.bandwidth_policy = base.strategy.bandwidth_policy;
      else
        throw ConfigError({"unknown bandwidth suffix in strategy entry: " + entry});
      if (bw == "equal") cfg.strategy.bandwidth_policy = BandwidthPolicy::equal;
      cfg = with_param(std::move(cfg), param, value);

      const MonteCarloResult mc =
          run_monte_carlo(cfg, o.slots, realizations, o.jobs, seed, light);
      for (int r = 0; r < realizations; ++r) {
        std::ostringstream ep_name;
        ep_name << "ep_" << entry << "_" << param.name << value << "_r" << r << ".json";
        MetricsLog one;
        one.agg = mc.episodes[static_cast<std::size_t>(r)];
        write_file(out_dir / ep_name.str(),
                   aggregates_json(one, config_hash(cfg), realization_seed(seed, r)));
      }
      char row[512];
      std::snprintf(row, sizeof row, "%s,%s,%.9g,%.9g,%.9g,%.9g,%.9g\n", entry.c_str(),
                    param.name.c_str(), value, mc.mean_e_w, mc.ci_e_w, mc.mean_delay,
                    mc.ci_delay);
      tradeoff << row;
      std::snprintf(row, sizeof row, "%s,%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", entry.c_str(),
                    param.name.c_str(), value, mc.mean_e_u, mc.mean_e_a, mc.mean_e_m,
                    mc.mean_e_tot, mc.ci_e_tot);
      entity << row;
      std::snprintf(row, sizeof row, "%s,%s,%.9g,%.9g,%.9g,%.9g\n", entry.c_str(),
                    param.name.c_str(), value, mc.duty_ap, mc.duty_ue, mc.duty_es);
      duty << row;
      std::cout << entry << " " << param.name << "=" << value << ": E_w=" << mc.mean_e_w
                << " J/slot, delay=" << mc.mean_delay << " s\n";
    }
  }
  write_file(out_dir / "tradeoff.csv", tradeoff.str());
  write_file(out_dir / "entity_energy.csv", entity.str());
  write_file(out_dir / "duty_cycles.csv", duty.str());
  std::cout << "sweep artifacts in " << out_dir.string() << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int jobs, int instances,
               long long steps) {
  std::vector<verify::CheckResult> results;
  if (suite == "oracle")
    results = verify::oracle_suite(seed, instances);
  else if (suite == "invariants")
    results = verify::invariant_suite(seed, steps);
  else if (suite == "acceptance")
    results = verify::acceptance_suite(seed, jobs);
  else {
    std::cerr << "unknown suite '" << suite << "' (oracle|invariants|acceptance)\n";
    return 2;
  }
  const int failures = verify::report(results, std::cout);
  std::cout << (failures == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(failures)) << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discontinuous computation-offloading simulator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts o;
  int realizations = 1;
  std::string param_text, strategies_text;
  std::string suite = "acceptance";
  int instances = 500;
  long long steps = 100000;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("config", o.config_path, "scenario JSON file")->required();
    sub->add_option("--set", o.overrides, "dotted-path override, e.g. lyapunov.v=5e6");
    sub->add_option("--strategy", o.strategy, "strategy preset override");
    sub->add_option("--bandwidth", o.bandwidth, "bandwidth policy: equal|heuristic");
    sub->add_option("--seed", o.seed, "master seed (env DISCO_SEED overrides)");
    sub->add_option("--slots", o.slots, "slots per episode");
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--jobs", o.jobs, "parallel episodes");
  };

  CLI::App* run = app.add_subcommand("run", "one episode, CSV + JSON artifacts");
  add_common(run, true);

  CLI::App* sweep = app.add_subcommand("sweep", "cross-product of strategies and a parameter");
  add_common(sweep, true);
  sweep->add_option("--param", param_text, "V=list or arrival=list")->required();
  sweep->add_option("--realizations", realizations, "independent realizations per point");
  sweep->add_option("--strategies", strategies_text,
                    "comma list of presets, optional @equal/@heuristic suffix");

  CLI::App* verify_cmd = app.add_subcommand("verify", "oracle | invariants | acceptance");
  verify_cmd->add_option("--suite", suite, "oracle|invariants|acceptance");
  verify_cmd->add_option("--seed", o.seed, "suite seed");
  verify_cmd->add_option("--jobs", o.jobs, "parallel episodes");
  verify_cmd->add_option("--instances", instances, "oracle instances");
  verify_cmd->add_option("--steps", steps, "invariant steps");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(o);
    if (sweep->parsed()) return cmd_sweep(o, param_text, strategies_text, realizations);
    if (verify_cmd->parsed()) return cmd_verify(suite, resolve_seed(o), o.jobs, instances, steps);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
