#include <doctest.h>

#include <fstream>
#include <sstream>

#include "memlab/runners.hpp"
#include "memlab/scenarios.hpp"
#include "memlab/stats.hpp"
#include "memlab/strip_walk.hpp"

using namespace memlab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Experiment scaled_down(const std::string& scenario,
                       const std::vector<std::pair<std::string, std::string>>& sets) {
  Config cfg = scenario_config(scenario);
  for (const auto& [k, v] : sets) cfg.set_override(k, v);
  return load_experiment(cfg);
}

}  // namespace

TEST_CASE("exit-lab runner produces verdicts and tables" * doctest::timeout(300)) {
  Experiment ex = scaled_down("exit-symmetric",
                              {{"exitlab.sym.paths", "3000"},
                               {"exitlab.sym-half.paths", "3000"},
                               {"exitlab.asym.paths", "3000"},
                               {"exitlab.sym.epsilon", "0.2"},
                               {"exitlab.sym-half.epsilon", "0.1"},
                               {"exitlab.asym.epsilon", "0.2"},
                               {"exitlab.asym.tol_p_abs", "0.05"},
                               {"exitlab.sym.tol_l_rel", "0.15"},
                               {"exitlab.sym.tol_tau_rel", "0.15"},
                               {"exitlab.sym.tol_p_abs", "0.05"},
                               {"simulation.threads", "2"}});
  RunResult res = run_exit_lab(ex, "exit-mini", "runner-out");
  CHECK(res.ok());
  bool has_ratio = false;
  for (const auto& item : res.verdict.items)
    if (item.name == "sym-half.exit_time_ratio") has_ratio = true;
  CHECK(has_ratio);
  std::string table = slurp("runner-out/exit-mini-table.csv");
  CHECK(table.find("mean_local_time") != std::string::npos);
  std::string verdict = slurp("runner-out/exit-mini-verdict.json");
  CHECK(verdict.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("simulate runner output is byte-identical across thread counts" *
          doctest::timeout(300)) {
  auto run_with = [&](int threads, const std::string& tag) {
    Experiment ex = scaled_down(
        "ltime-sum", {{"simulation.paths", "60"},
                      {"simulation.grid_cells", "6"},
                      {"simulation.horizon", "0.2"},
                      {"scaling.epsilon", "0.1"},
                      {"simulation.threads", std::to_string(threads)}});
    run_simulate(ex, tag, "runner-out");
    return slurp("runner-out/" + tag + "-paths.csv");
  };
  std::string t1 = run_with(1, "sim-t1");
  std::string t2 = run_with(2, "sim-t2");
  std::string t4 = run_with(4, "sim-t4");
  CHECK(t1 == t2);
  CHECK(t1 == t4);
}

TEST_CASE("ltime runner at reduced scale" * doctest::timeout(300)) {
  Experiment ex = scaled_down("ltime-sum", {{"simulation.paths", "60"},
                                            {"ltime.eps", "[0.1]"},
                                            {"ltime.sup_tol", "0.2"},
                                            {"simulation.threads", "2"}});
  RunResult res = run_ltime_check(ex, "ltime-mini", "runner-out");
  CHECK(res.ok());
}

TEST_CASE("converge runner (homogenized) emits table, slope and plot data" *
          doctest::timeout(600)) {
  Experiment ex = scaled_down("exa1", {{"simulation.paths", "800"},
                                       {"converge.eps", "[0.4, 0.2]"},
                                       {"converge.final_ks_max", "0.5"},
                                       {"converge.monotone", "false"},
                                       {"simulation.threads", "2"}});
  RunResult res = run_converge(ex, "exa1-mini", "runner-out");
  CHECK(res.ok());
  std::string table = slurp("runner-out/exa1-mini-table.csv");
  CHECK(table.find("epsilon") != std::string::npos);
  std::string dat = slurp("runner-out/exa1-mini-loglog.dat");
  CHECK(!dat.empty());
}

TEST_CASE("plain-SDE reduction: both schemes match the membrane-free marginal" *
          doctest::timeout(900)) {
  // beta = theta = gamma = 0: X is Brownian; compare Euler-with-membranes,
  // strip walk, and the homogenized solver with p = 0 at reduced scale.
  Experiment ex = scaled_down("ltime-sum", {{"scaling.epsilon", "0.1"},
                                            {"simulation.horizon", "0.25"},
                                            {"simulation.paths", "4000"},
                                            {"simulation.threads", "2"}});
  ScalingRegime regime{0.1, 0.1, 0.0};
  MembraneFamily mem = membranes_for(ex, regime, 0.25);
  SimConfig sim = ex.sim;
  sim.horizon_T = 0.25;
  sim.grid = SimConfig::uniform_grid(0.25, 1);
  sim.step = ex.step_for(0.1);

  sim.scheme = Scheme::EulerMollified;
  TerminalSamples euler = collect_terminal_x(ex.field, mem, regime, sim, 2);

  sim.scheme = Scheme::StripWalk;
  sim.master_seed = derive_seed(sim.master_seed, "walk");
  TerminalSamples walk = collect_terminal_x(ex.field, mem, regime, sim, 2);

  auto cdf = [](double v) { return normal_cdf(v / 0.5); };  // N(0, 0.25)
  DistanceReport ks_e = ks_distance_to_cdf(euler.x, cdf, 0);
  DistanceReport ks_w = ks_distance_to_cdf(walk.x, cdf, 0);
  double crit = ks_null_threshold(4000, 0);
  CHECK(ks_e.value <= 1.8 * crit);
  CHECK(ks_w.value <= 2.5 * crit);  // strip walk carries O(eps) bias
  DistanceReport ks_ew = ks_distance(euler.x, walk.x, 0);
  CHECK(ks_ew.value <= 2.0 * ks_null_threshold(4000, 4000));
}

TEST_CASE("q = inf regime: inverse time change collapses toward 0" *
          doctest::timeout(600)) {
  // gamma = 1, lambda = sqrt(eps): q = lambda/eps -> inf. The median of
  // A^{-1}(T) must fall as eps shrinks.
  Config cfg = scenario_config("ltime-sum");
  cfg.set_override("coefficients.gamma", "\"const:1.0\"");
  cfg.set_override("coefficients.bounds.gamma", "1.0");
  cfg.set_override("simulation.paths", "300");
  cfg.set_override("simulation.threads", "2");
  Experiment ex = load_experiment(cfg);

  auto median_inverse = [&](double eps) {
    ScalingRegime regime{eps, eps, std::sqrt(eps)};
    MembraneFamily mem = membranes_for(ex, regime, 1.0);
    SimConfig sim = ex.sim;
    sim.horizon_T = 1.0;
    sim.grid = SimConfig::uniform_grid(1.0, 50);
    sim.step = ex.step_for(eps);
    Eigen::VectorXd inv(sim.n_paths);
    for (std::int64_t i = 0; i < sim.n_paths; ++i) {
      RngLane lane(sim.master_seed, static_cast<std::uint64_t>(i));
      PathBundle b = simulate_euler_mollified(ex.field, mem, regime, sim, lane);
      Eigen::VectorXd q(1);
      q << 1.0;
      inv[i] = invert_time_change(b, q)[0];
    }
    return summarize(inv).median;
  };
  double m1 = median_inverse(0.16);
  double m2 = median_inverse(0.04);
  CHECK(m2 < m1);
  CHECK(m1 < 1.0);
}

TEST_CASE("convergence self-test sits at the KS noise floor" *
          doctest::timeout(300)) {
  // Replacing the prelimit by the limit solver itself must give KS values
  // consistent with the two-sample null.
  LimitSpec spec;
  spec.field = CoefficientField(0, 1);
  spec.field.sigma(0, 0) = ScalarField::constant(1.0);
  spec.field.b(0) = ScalarField::constant(0.0);
  spec.field.beta() = ScalarField::constant(1.0);
  spec.field.gamma() = ScalarField::constant(0.0);
  spec.field.bounds().beta_norm = 1.0;
  spec.density.d = ScalarField::constant(1.0);
  spec.density.d_min = spec.density.d_max = 1.0;
  spec.p_limit = ExtendedReal(1.0);
  spec.q_limit = ExtendedReal(0.0);
  spec.kind = LimitKind::HomogenizedSDE;

  SimConfig cfg;
  cfg.initial_x = 0.0;
  cfg.initial_y = Eigen::VectorXd(0);
  cfg.horizon_T = 1.0;
  cfg.n_paths = 8000;
  cfg.grid = SimConfig::uniform_grid(1.0, 1);
  cfg.step.euler_h = 1.0 / 1000.0;
  cfg.step.mollifier_rho = 1.0;

  cfg.master_seed = 555;
  Eigen::VectorXd a = collect_limit_terminal_x(spec, cfg, 2);
  cfg.master_seed = 556;
  Eigen::VectorXd b = collect_limit_terminal_x(spec, cfg, 2);
  DistanceReport ks = ks_distance(a, b, 0);
  CHECK(ks.value <= 1.6 * ks_null_threshold(8000, 8000));
}

TEST_CASE("local-time sum without membranes is identically zero") {
  Config cfg = scenario_config("ltime-sum");
  cfg.set_override("simulation.paths", "5");
  Experiment ex = load_experiment(cfg);
  MembraneFamily none;  // empty family
  none.epsilon = 0.02;
  ScalingRegime regime{0.02, 0.02, 0.0};
  SimConfig sim = ex.sim;
  sim.horizon_T = 0.2;
  sim.grid = SimConfig::uniform_grid(0.2, 10);
  sim.step = ex.step_for(0.1);
  for (int p = 0; p < 5; ++p) {
    RngLane lane(9, static_cast<std::uint64_t>(p));
    PathBundle b = simulate_euler_mollified(ex.field, none, regime, sim, lane);
    Eigen::VectorXd lt = local_time_sum_path(b, 0.02);
    CHECK(lt.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("huge membrane spacing: the sum functional is near t/d" *
          doctest::timeout(300)) {
  // d = 1000: only the membrane at 0 lands in reach; the discrepancy
  // |eps sum L - t/1000| stays small by construction.
  Config cfg = scenario_config("ltime-sum");
  cfg.set_override("membranes.density", "\"const:1000.0\"");
  cfg.set_override("membranes.d_min", "1000.0");
  cfg.set_override("membranes.d_max", "1000.0");
  cfg.set_override("simulation.paths", "200");
  cfg.set_override("simulation.rho", "0.1");
  cfg.set_override("simulation.h", "0.001");
  cfg.set_override("simulation.threads", "2");
  Experiment ex = load_experiment(cfg);
  ScalingRegime regime{0.02, 0.02, 0.0};
  MembraneFamily fam = single_membrane(0.0, 0.02);
  SimConfig sim = ex.sim;
  sim.grid = SimConfig::uniform_grid(1.0, 100);
  LocalTimeCheckResult res = local_time_functional_check(
      ex.field, fam, ex.density, regime, sim, 2);
  CHECK(res.mean_sup <= 0.05);
}
