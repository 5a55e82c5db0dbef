// Configuration-driven experiment runner: simulates interface diffusions,
// their homogenized limits, and runs the verification suites.
#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "memlab/runners.hpp"
#include "memlab/scenarios.hpp"
#include "memlab/version.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string scenario;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  long long seed = -1;
  long long paths = -1;
  long long threads = -1;
  std::string scheme;
  std::string eps;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "config file (TOML-style)");
  cmd->add_option("--scenario", opts.scenario,
                  "built-in scenario name (exit-symmetric, exit-skew, exa1, "
                  "exa2-sticky, ode-degenerate, ltime-sum)");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "master seed (overrides config)");
  cmd->add_option("--paths", opts.paths, "path count (overrides config)");
  cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware)");
  cmd->add_option("--scheme", opts.scheme, "euler | stripwalk");
  cmd->add_option("--eps", opts.eps, "comma-separated epsilon ladder");
  cmd->add_option("--set", opts.overrides, "dotted-key override key=value")
      ->take_all();
}

memlab::Config resolve_config(const CommonOpts& opts, const char* eps_key) {
  memlab::Config cfg;
  if (!opts.config_path.empty())
    cfg = memlab::Config::parse_file(opts.config_path);
  else if (!opts.scenario.empty())
    cfg = memlab::scenario_config(opts.scenario);
  else
    memlab::raise(memlab::ErrorCode::ConfigError,
                  "pass --config FILE or --scenario NAME");
  if (opts.seed >= 0) cfg.set_override("simulation.seed", std::to_string(opts.seed));
  if (opts.paths >= 0) cfg.set_override("simulation.paths", std::to_string(opts.paths));
  if (opts.threads >= 0)
    cfg.set_override("simulation.threads", std::to_string(opts.threads));
  if (!opts.scheme.empty())
    cfg.set_override("simulation.scheme", "\"" + opts.scheme + "\"");
  if (!opts.eps.empty() && eps_key)
    cfg.set_override(eps_key, "[" + opts.eps + "]");
  for (const std::string& kv : opts.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      memlab::raise(memlab::ErrorCode::ConfigError,
                    "--set needs key=value, got '" + kv + "'");
    cfg.set_override(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::string scenario_label(const CommonOpts& opts) {
  if (!opts.scenario.empty()) return opts.scenario;
  std::string base = opts.config_path;
  auto slash = base.find_last_of('/');
  if (slash != std::string::npos) base = base.substr(slash + 1);
  auto dot = base.find_last_of('.');
  if (dot != std::string::npos) base = base.substr(0, dot);
  return base.empty() ? "run" : base;
}

int report(const memlab::RunResult& result) {
  for (const memlab::VerdictItem& item : result.verdict.items)
    std::printf("%-42s %s  (value %.6g, threshold %.6g %s)\n", item.name.c_str(),
                item.pass ? "PASS" : "FAIL", item.value, item.threshold,
                item.comparator.c_str());
  if (result.verdict.items.empty()) std::printf("done (no assertions)\n");
  return result.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"membranelab: Monte Carlo lab for diffusions with semipermeable "
               "sticky interfaces"};
  app.set_version_flag("--version", memlab::kToolVersion);
  app.require_subcommand(1);

  CommonOpts opts;
  CLI::App* c_exit = app.add_subcommand("exit-lab", "single-membrane exit statistics");
  CLI::App* c_sim = app.add_subcommand("simulate", "sample prelimit paths");
  CLI::App* c_lim = app.add_subcommand("limit-sde", "homogenized limit SDE");
  CLI::App* c_sticky = app.add_subcommand("sticky-sde", "time-changed limit SDE");
  CLI::App* c_ode = app.add_subcommand("ode-limit", "deterministic limit ODEs");
  CLI::App* c_conv = app.add_subcommand("converge", "prelimit-to-limit convergence study");
  CLI::App* c_ltime = app.add_subcommand("ltime-check", "local-time-sum functional check");
  for (CLI::App* c : {c_exit, c_sim, c_lim, c_sticky, c_ode, c_conv, c_ltime})
    add_common(c, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    const char* eps_key = c_conv->parsed() ? "converge.eps"
                          : c_ltime->parsed() ? "ltime.eps"
                                              : nullptr;
    memlab::Config cfg = resolve_config(opts, eps_key);
    memlab::Experiment ex = memlab::load_experiment(cfg);
    std::string label = scenario_label(opts);

    memlab::RunResult result;
    if (c_exit->parsed())
      result = memlab::run_exit_lab(ex, label, opts.out_dir);
    else if (c_sim->parsed())
      result = memlab::run_simulate(ex, label, opts.out_dir);
    else if (c_lim->parsed())
      result = memlab::run_limit_sde(ex, label, opts.out_dir, false);
    else if (c_sticky->parsed())
      result = memlab::run_limit_sde(ex, label, opts.out_dir, true);
    else if (c_ode->parsed())
      result = memlab::run_ode_limit(ex, label, opts.out_dir);
    else if (c_conv->parsed())
      result = memlab::run_converge(ex, label, opts.out_dir);
    else
      result = memlab::run_ltime_check(ex, label, opts.out_dir);
    return report(result);
  } catch (const memlab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
