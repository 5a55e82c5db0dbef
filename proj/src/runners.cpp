#include "memlab/runners.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "memlab/parallel.hpp"
#include "memlab/stats.hpp"
#include "memlab/strip_walk.hpp"
#include "memlab/version.hpp"

namespace memlab {

std::uint64_t derive_seed(std::uint64_t master, const std::string& tag) {
  std::uint64_t h = 0xcbf29ce484222325ull ^ master;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

MembraneFamily membranes_for(const Experiment& ex, const ScalingRegime& regime,
                             double horizon) {
  if (ex.explicit_membranes) {
    MembraneFamily fam;
    fam.epsilon = regime.epsilon;
    fam.points = *ex.explicit_membranes;
    fam.window_lo = 0;
    fam.window_hi = static_cast<int>(fam.points.size()) - 1;
    return fam;
  }
  double drift_bound = ex.field.bounds().b_norm +
                       regime.delta / regime.epsilon *
                           ex.field.bounds().beta_norm *
                           ex.sigma00_norm_bound() / ex.density.d_min;
  double pad = escape_window_padding(ex.sigma00_norm_bound(), drift_bound, horizon);
  double x_lo = std::min(ex.sim.initial_x, 0.0) - pad -
                regime.epsilon * ex.density.d_max;
  double x_hi = std::max(ex.sim.initial_x, 0.0) + pad +
                regime.epsilon * ex.density.d_max;
  return build_membranes(ex.density, regime.epsilon, x_lo, x_hi);
}

namespace {

std::string fmt(double v) { return CsvWriter::num(v); }

void finish(const Experiment& ex, const std::string& scenario,
            const std::string& out_dir, RunResult& result) {
  write_verdict(out_dir + "/" + scenario + "-verdict.json", result.verdict,
                ex.config_hash(), ex.sim.master_seed, scenario);
  write_run_log(out_dir + "/" + scenario + "-run.log", scenario,
                ex.config_hash(), ex.sim.master_seed, result.log_lines);
}

struct CaseOutput {
  ExitStats stats;
  double epsilon = 0.0;
};

}  // namespace

RunResult run_exit_lab(const Experiment& ex, const std::string& scenario,
                       const std::string& out_dir) {
  ensure_directory(out_dir);
  RunResult result;
  const Config& cfg = ex.config;
  std::vector<std::string> cases = cfg.get_strings("exitlab.cases");
  CsvWriter csv(out_dir + "/" + scenario + "-table.csv", ex.config_hash(),
                ex.sim.master_seed,
                {"case", "statistic", "estimate", "ci", "theory", "relative_error"});
  std::map<std::string, CaseOutput> outputs;

  for (const std::string& name : cases) {
    const std::string pre = "exitlab." + name + ".";
    const std::string kind = cfg.get_string_or(pre + "kind", "exit");
    ScalingRegime regime;
    regime.epsilon = cfg.get_number_or(pre + "epsilon", ex.regime.epsilon);
    regime.delta = cfg.get_number_or(pre + "delta", ex.regime.delta);
    regime.lambda = 0.0;

    CoefficientField field = ex.field;
    if (cfg.has(pre + "b0")) field.b(0) = ScalarField::parse(cfg.get_string(pre + "b0"));
    if (cfg.has(pre + "beta"))
      field.beta() = ScalarField::parse(cfg.get_string(pre + "beta"));

    const std::int64_t paths = cfg.get_int_or(pre + "paths", ex.sim.n_paths);
    const double div = cfg.get_number_or(pre + "rho_divisor", 32.0);
    const std::uint64_t seed = derive_seed(ex.sim.master_seed, name);

    if (kind == "crosscheck") {
      const double T = cfg.get_number_or(pre + "horizon", 1.0);
      const double ks_max = cfg.get_number(pre + "ks_max");
      MembraneFamily membrane = single_membrane(0.0, regime.epsilon);
      SimConfig sim;
      sim.initial_x = 0.0;
      sim.initial_y = Eigen::VectorXd(0);
      sim.horizon_T = T;
      sim.n_paths = paths;
      sim.grid = SimConfig::uniform_grid(T, 1);
      sim.step.mollifier_rho = regime.epsilon / div;
      sim.step.euler_h =
          default_euler_h(sim.step.mollifier_rho, ex.sigma00_norm_bound());
      sim.master_seed = seed;
      sim.scheme = Scheme::EulerMollified;
      TerminalSamples euler = collect_terminal_x(field, membrane, regime, sim,
                                                 ex.threads);
      sim.scheme = Scheme::StripWalk;
      sim.master_seed = derive_seed(seed, "stripwalk");
      TerminalSamples walk = collect_terminal_x(field, membrane, regime, sim,
                                                ex.threads);
      DistanceReport ks = ks_distance(euler.x, walk.x);
      csv.row({name, "ks_euler_vs_stripwalk", fmt(ks.value),
               fmt(ks.bootstrap_ci.second - ks.bootstrap_ci.first), fmt(0.0),
               fmt(ks.value)});
      result.verdict.add(name + ".ks", ks.value, ks_max, "<=", ks.value <= ks_max);
      result.log_lines.push_back(name + ": KS(euler, stripwalk) = " + fmt(ks.value));
      continue;
    }

    ExitLabCase lab_case;
    lab_case.a_minus = cfg.get_number_or(pre + "a_minus", 1.0);
    lab_case.a_plus = cfg.get_number_or(pre + "a_plus", 1.0);
    lab_case.start_y = ex.sim.initial_y;
    lab_case.n_paths = paths;
    lab_case.threads = ex.threads;

    StepParams step = ex.sim.step;
    step.mollifier_rho =
        regime.epsilon * std::min(lab_case.a_minus, lab_case.a_plus) / div;
    step.euler_h = default_euler_h(step.mollifier_rho, ex.sigma00_norm_bound());
    step.bridge_correction = cfg.get_bool_or(pre + "bridge", false);

    ExitStats st = single_membrane_exit_mc(field, regime, step, lab_case, seed);
    outputs[name] = {st, regime.epsilon};

    const double beta0 = field.beta()(0.0, 0.0, lab_case.start_y);
    const double b0 = field.b(0)(0.0, 0.0, lab_case.start_y);
    const double sigma00 = field.sigma00(0.0, 0.0, lab_case.start_y);
    const double alpha = 0.5 * (1.0 + regime.delta * beta0);
    const double p_th = skew_exit_probability(alpha, lab_case.a_minus, lab_case.a_plus);
    const double l_th =
        theory_mean_local_time(lab_case.a_minus, lab_case.a_plus, regime.epsilon);
    const double tau_th = theory_mean_exit_time(lab_case.a_minus, lab_case.a_plus,
                                                regime.epsilon, sigma00);
    const double disp_th =
        theory_mean_displacement(lab_case.a_minus, lab_case.a_plus, regime.epsilon,
                                 regime.delta, b0, beta0, sigma00);

    auto rel = [](double est, double th) {
      return th != 0.0 ? (est - th) / th : est;
    };
    csv.row({name, "p_up", fmt(st.p_up), fmt(st.p_up_ci), fmt(p_th),
             fmt(rel(st.p_up, p_th))});
    csv.row({name, "mean_local_time", fmt(st.mean_local_time),
             fmt(st.mean_local_time_ci), fmt(l_th), fmt(rel(st.mean_local_time, l_th))});
    csv.row({name, "mean_exit_time", fmt(st.mean_exit_time),
             fmt(st.mean_exit_time_ci), fmt(tau_th), fmt(rel(st.mean_exit_time, tau_th))});
    csv.row({name, "mean_displacement", fmt(st.mean_displacement),
             fmt(st.mean_displacement_ci), fmt(disp_th),
             fmt(rel(st.mean_displacement, disp_th))});
    if (st.n_capped > 0)
      result.log_lines.push_back(name + ": " + std::to_string(st.n_capped) +
                                 " paths hit the exit-time cap (excluded)");

    if (cfg.has(pre + "tol_p_abs") || cfg.get_bool_or(pre + "tol_p_3se", false)) {
      double se = st.p_up_ci / 1.96;
      double tol = cfg.get_number_or(pre + "tol_p_abs", 0.0);
      if (cfg.get_bool_or(pre + "tol_p_3se", false)) tol = std::max(tol, 3.0 * se);
      result.verdict.add(name + ".p_up", std::abs(st.p_up - p_th), tol, "<=",
                         std::abs(st.p_up - p_th) <= tol,
                         "theory " + fmt(p_th));
    }
    if (cfg.has(pre + "tol_l_rel")) {
      double tol = cfg.get_number(pre + "tol_l_rel");
      double err = std::abs(st.mean_local_time - l_th) / l_th;
      result.verdict.add(name + ".mean_local_time", err, tol, "<=", err <= tol,
                         "theory " + fmt(l_th));
    }
    if (cfg.has(pre + "tol_tau_rel")) {
      double tol = cfg.get_number(pre + "tol_tau_rel");
      double err = std::abs(st.mean_exit_time - tau_th) / tau_th;
      result.verdict.add(name + ".mean_exit_time", err, tol, "<=", err <= tol,
                         "theory " + fmt(tau_th));
    }
    if (cfg.has(pre + "tol_disp_rel")) {
      double tol = cfg.get_number(pre + "tol_disp_rel");
      double err = std::abs(st.mean_displacement - disp_th) / std::abs(disp_th);
      result.verdict.add(name + ".mean_displacement", err, tol, "<=", err <= tol,
                         "theory " + fmt(disp_th));
    }
  }

  // cross-case exit-time ratios (the eps -> eps/2 scaling relation)
  for (const std::string& name : cases) {
    const std::string pre = "exitlab." + name + ".";
    if (!cfg.has(pre + "ratio_with")) continue;
    std::string other = cfg.get_string(pre + "ratio_with");
    std::vector<double> range = cfg.get_numbers(pre + "ratio_range");
    if (range.size() != 2)
      raise(ErrorCode::ConfigError, pre + "ratio_range needs [lo, hi]");
    if (!outputs.count(name) || !outputs.count(other))
      raise(ErrorCode::ConfigError, pre + "ratio_with names an unknown case");
    double ratio = outputs[other].stats.mean_exit_time /
                   outputs[name].stats.mean_exit_time;
    bool ok = ratio >= range[0] && ratio <= range[1];
    result.verdict.add(name + ".exit_time_ratio", ratio, range[1],
                       "in[" + fmt(range[0]) + "," + fmt(range[1]) + "]", ok,
                       "tau(" + other + ")/tau(" + name + ")");
    csv.row({name, "exit_time_ratio", fmt(ratio), fmt(0.0),
             fmt(0.25 * (range[0] + range[1]) + 0.0), fmt(0.0)});
  }

  finish(ex, scenario, out_dir, result);
  return result;
}

RunResult run_converge(const Experiment& ex, const std::string& scenario,
                       const std::string& out_dir) {
  ensure_directory(out_dir);
  RunResult result;
  const Config& cfg = ex.config;
  const std::string kind = cfg.get_string("converge.kind");
  const std::vector<double> eps_list = cfg.get_numbers("converge.eps");
  const std::string rule_delta = cfg.get_string_or("converge.coupling_delta", "p*eps");
  const std::string rule_lambda = cfg.get_string_or("converge.coupling_lambda", "zero");
  const double T = ex.sim.horizon_T;

  if ((kind == "homogenized" || kind == "sticky") &&
      !cfg.has("scaling.p"))
    raise(ErrorCode::RegimeMismatch, "converge." + kind + " needs scaling.p");

  ConvergenceTable table;
  Eigen::VectorXd finest_samples;
  double ode_ref = 0.0;
  if (kind == "degenerate-ode") {
    LimitSpec spec;
    spec.field = ex.field;
    spec.density = ex.density;
    spec.kind = LimitKind::DegenerateODE;
    OdePath path = solve_degenerate_ode(spec, ex.sim.initial_x, ex.sim.initial_y,
                                        T, cfg.get_number_or("converge.ode_step", 1e-3));
    ode_ref = path.x[path.x.size() - 1];
    result.log_lines.push_back("degenerate ODE reference X(T) = " + fmt(ode_ref));
  }

  for (double eps : eps_list) {
    ScalingRegime regime;
    regime.epsilon = eps;
    if (rule_delta == "p*eps")
      regime.delta = cfg.get_number("scaling.p") * eps;
    else if (rule_delta == "sqrt_eps")
      regime.delta = std::sqrt(eps);
    else if (rule_delta == "fixed")
      regime.delta = ex.regime.delta;
    else
      raise(ErrorCode::RegimeMismatch, "unknown coupling_delta '" + rule_delta + "'");
    if (rule_lambda == "zero")
      regime.lambda = 0.0;
    else if (rule_lambda == "q*eps")
      regime.lambda = cfg.get_number("scaling.q") * eps;
    else if (rule_lambda == "r*delta")
      regime.lambda = cfg.get_number("scaling.r") * regime.delta;
    else
      raise(ErrorCode::RegimeMismatch, "unknown coupling_lambda '" + rule_lambda + "'");
    regime.validate(ex.field.bounds().beta_norm);

    const double horizon = kind == "degenerate-ode" ? T * eps / regime.delta : T;
    MembraneFamily membranes = membranes_for(ex, regime, horizon);

    SimConfig sim = ex.sim;
    sim.horizon_T = horizon;
    sim.grid = SimConfig::uniform_grid(horizon, 1);
    sim.step = ex.step_for(eps);
    sim.scheme = Scheme::EulerMollified;

    ConvergenceRow row;
    row.epsilon = eps;
    row.delta = regime.delta;
    row.lambda = regime.lambda;

    TerminalSamples samples;
    if (kind == "sticky")
      samples = collect_time_changed_terminal_x(ex.field, membranes, regime, sim,
                                                T, ex.threads);
    else
      samples = collect_terminal_x(ex.field, membranes, regime, sim, ex.threads);
    row.escaped_fraction = samples.escaped_fraction();
    SampleSummary summ = summarize(samples.x);
    row.sample_mean = summ.mean;
    row.sample_sd = summ.sd;

    if (kind == "homogenized" || kind == "sticky") {
      LimitSpec spec;
      spec.field = ex.field;
      spec.density = ex.density;
      spec.p_limit = ExtendedReal(cfg.get_number("scaling.p"));
      spec.q_limit = ExtendedReal(cfg.get_number_or("scaling.q", 0.0));
      spec.kind = kind == "sticky" ? LimitKind::StickySDE : LimitKind::HomogenizedSDE;
      NormalLaw law = analytic_limit_normal(spec, ex.sim.initial_x, T);
      DistanceReport ks = ks_distance_to_cdf(samples.x, [law](double v) {
        return normal_cdf((v - law.mean) / law.sd);
      });
      row.distance = ks.value;
      row.ci_lo = ks.bootstrap_ci.first;
      row.ci_hi = ks.bootstrap_ci.second;
    } else if (kind == "degenerate-ode") {
      row.distance = std::abs(summ.mean - ode_ref);
      row.ci_lo = std::max(0.0, row.distance - 1.96 * summ.se);
      row.ci_hi = row.distance + 1.96 * summ.se;
    } else {
      raise(ErrorCode::RegimeMismatch, "unknown converge.kind '" + kind + "'");
    }
    if (row.escaped_fraction > 0.0)
      result.log_lines.push_back("eps=" + fmt(eps) + ": escaped fraction " +
                                 fmt(row.escaped_fraction));
    table.rows.push_back(row);
    if (eps == eps_list.back()) finest_samples = samples.x;
  }

  double floor = ks_null_threshold(ex.sim.n_paths, 0);
  table.fit(floor);

  CsvWriter csv(out_dir + "/" + scenario + "-table.csv", ex.config_hash(),
                ex.sim.master_seed,
                {"epsilon", "delta", "lambda", "distance", "ci_lo", "ci_hi",
                 "escaped_fraction", "sample_mean", "sample_sd"});
  std::ostringstream plot;
  for (const ConvergenceRow& r : table.rows) {
    csv.row({fmt(r.epsilon), fmt(r.delta), fmt(r.lambda), fmt(r.distance),
             fmt(r.ci_lo), fmt(r.ci_hi), fmt(r.escaped_fraction),
             fmt(r.sample_mean), fmt(r.sample_sd)});
    if (r.distance > 0.0)
      plot << fmt(std::log(r.epsilon)) << " " << fmt(std::log(r.distance)) << "\n";
  }
  {
    std::ofstream pf(out_dir + "/" + scenario + "-loglog.dat", std::ios::binary);
    pf << plot.str();
  }
  result.log_lines.push_back("log-log slope " + fmt(table.slope) + " over " +
                             std::to_string(table.fitted_rows) + " rows");

  if (cfg.get_bool_or("converge.monotone", false)) {
    bool mono = true;
    for (std::size_t i = 1; i < table.rows.size(); ++i)
      if (!(table.rows[i].distance < table.rows[i - 1].distance)) mono = false;
    result.verdict.add("distance_monotone_decreasing",
                       table.rows.back().distance, 0.0, "monotone-decreasing",
                       mono);
  }
  if (cfg.has("converge.final_ks_max")) {
    double tol = cfg.get_number("converge.final_ks_max");
    double v = table.rows.back().distance;
    result.verdict.add("final_ks", v, tol, "<=", v <= tol);
  }
  if (cfg.has("converge.mean_tol")) {
    double tol = cfg.get_number("converge.mean_tol");
    double v = std::abs(summarize(finest_samples).mean - ode_ref);
    result.verdict.add("final_mean_error", v, tol, "<=", v <= tol,
                       "ODE reference " + fmt(ode_ref));
  }
  if (cfg.get_bool_or("converge.sd_decreasing", false)) {
    bool mono = true;
    for (std::size_t i = 1; i < table.rows.size(); ++i)
      if (!(table.rows[i].sample_sd < table.rows[i - 1].sample_sd)) mono = false;
    result.verdict.add("sample_sd_decreasing", table.rows.back().sample_sd, 0.0,
                       "monotone-decreasing", mono);
  }

  // time-change identity at the limit level
  if (cfg.has("identity.paths")) {
    LimitSpec spec;
    spec.field = ex.field;
    spec.density = ex.density;
    spec.p_limit = ExtendedReal(cfg.get_number("scaling.p"));
    spec.q_limit = ExtendedReal(cfg.get_number("scaling.q"));
    spec.kind = LimitKind::HomogenizedSDE;

    SimConfig sim = ex.sim;
    sim.n_paths = cfg.get_int("identity.paths");
    sim.grid = SimConfig::uniform_grid(T, 1);
    sim.step.mollifier_rho = 1.0;  // unused by limit solvers
    sim.step.euler_h = cfg.get_number_or("identity.homog_step", T / 4000.0);
    sim.master_seed = derive_seed(ex.sim.master_seed, "identity-homog");
    Eigen::VectorXd composed =
        collect_homogenized_time_changed_x(spec, sim, T, ex.threads);

    spec.kind = LimitKind::StickySDE;
    sim.step.euler_h = cfg.get_number_or("identity.sticky_step", T / 2000.0);
    sim.master_seed = derive_seed(ex.sim.master_seed, "identity-sticky");
    Eigen::VectorXd direct = collect_limit_terminal_x(spec, sim, ex.threads);

    DistanceReport ks = ks_distance(composed, direct);
    double tol = cfg.get_number("identity.ks_max");
    result.verdict.add("timechange_identity_ks", ks.value, tol, "<=",
                       ks.value <= tol);
    result.log_lines.push_back("time-change identity KS = " + fmt(ks.value));
  }

  finish(ex, scenario, out_dir, result);
  return result;
}

RunResult run_ltime_check(const Experiment& ex, const std::string& scenario,
                          const std::string& out_dir) {
  ensure_directory(out_dir);
  RunResult result;
  const Config& cfg = ex.config;
  std::vector<double> eps_list = cfg.has("ltime.eps")
                                     ? cfg.get_numbers("ltime.eps")
                                     : std::vector<double>{ex.regime.epsilon};
  CsvWriter csv(out_dir + "/" + scenario + "-table.csv", ex.config_hash(),
                ex.sim.master_seed,
                {"epsilon", "mean_sup", "p95_sup", "paths", "escaped"});
  std::vector<double> means;
  for (double eps : eps_list) {
    ScalingRegime regime;
    regime.epsilon = eps;
    regime.delta = eps;
    regime.lambda = 0.0;
    regime.validate(ex.field.bounds().beta_norm);
    MembraneFamily membranes = membranes_for(ex, regime, ex.sim.horizon_T);
    SimConfig sim = ex.sim;
    sim.step = ex.step_for(eps);
    LocalTimeCheckResult res = local_time_functional_check(
        ex.field, membranes, ex.density, regime, sim, ex.threads);
    csv.row({fmt(eps), fmt(res.mean_sup), fmt(res.p95_sup),
             CsvWriter::num(res.n_paths), CsvWriter::num(res.n_escaped)});
    result.log_lines.push_back("eps=" + fmt(eps) + ": mean sup " +
                               fmt(res.mean_sup) + ", p95 " + fmt(res.p95_sup));
    means.push_back(res.mean_sup);
  }
  if (cfg.has("ltime.sup_tol")) {
    double tol = cfg.get_number("ltime.sup_tol");
    result.verdict.add("final_mean_sup", means.back(), tol, "<=",
                       means.back() <= tol);
  }
  if (cfg.get_bool_or("ltime.monotone", false) && means.size() > 1) {
    bool mono = true;
    for (std::size_t i = 1; i < means.size(); ++i)
      if (!(means[i] < means[i - 1])) mono = false;
    result.verdict.add("mean_sup_monotone_decreasing", means.back(), 0.0,
                       "monotone-decreasing", mono);
  }
  finish(ex, scenario, out_dir, result);
  return result;
}

RunResult run_simulate(const Experiment& ex, const std::string& scenario,
                       const std::string& out_dir) {
  ensure_directory(out_dir);
  RunResult result;
  MembraneFamily membranes = ex.make_membranes();
  std::vector<PathBundle> bundles(static_cast<std::size_t>(ex.sim.n_paths));
  parallel_for(bundles.size(), ex.threads, [&](std::size_t i) {
    RngLane lane(ex.sim.master_seed, static_cast<std::uint64_t>(i));
    bundles[i] = ex.sim.scheme == Scheme::EulerMollified
                     ? simulate_euler_mollified(ex.field, membranes, ex.regime,
                                                ex.sim, lane)
                     : simulate_strip_walk(ex.field, membranes, ex.regime,
                                           ex.sim, lane);
  });

  BundleFileHeader header;
  header.config_hash = ex.config_hash();
  header.seed = ex.sim.master_seed;
  header.grid = ex.sim.grid;
  write_bundles(out_dir + "/" + scenario + "-bundles.bin", header, bundles);

  std::vector<std::string> cols = {"path", "time", "x"};
  for (int i = 0; i < ex.field.y_dim(); ++i) cols.push_back("y" + std::to_string(i + 1));
  cols.insert(cols.end(), {"local_time_total", "a_functional", "escaped"});
  CsvWriter csv(out_dir + "/" + scenario + "-paths.csv", ex.config_hash(),
                ex.sim.master_seed, cols);
  std::int64_t escaped = 0;
  for (std::size_t p = 0; p < bundles.size(); ++p) {
    const PathBundle& b = bundles[p];
    if (b.escaped_window) ++escaped;
    for (Eigen::Index j = 0; j < b.grid_size(); ++j) {
      std::vector<std::string> row = {CsvWriter::num(static_cast<std::int64_t>(p)),
                                      fmt(b.times[j]), fmt(b.x[j])};
      for (int i = 0; i < ex.field.y_dim(); ++i) row.push_back(fmt(b.y(j, i)));
      row.push_back(fmt(b.local_time_total[j]));
      row.push_back(fmt(b.a_functional[j]));
      row.push_back(b.escaped_window ? "1" : "0");
      csv.row(row);
    }
  }
  result.log_lines.push_back("paths " + std::to_string(bundles.size()) +
                             ", escaped " + std::to_string(escaped));
  finish(ex, scenario, out_dir, result);
  return result;
}

RunResult run_limit_sde(const Experiment& ex, const std::string& scenario,
                        const std::string& out_dir, bool sticky) {
  ensure_directory(out_dir);
  RunResult result;
  const Config& cfg = ex.config;
  LimitSpec spec;
  spec.field = ex.field;
  spec.density = ex.density;
  spec.p_limit = ExtendedReal::parse(cfg.get_string_or("limit.p", "0"));
  if (cfg.has("limit.q")) spec.q_limit = ExtendedReal::parse(cfg.get_string("limit.q"));
  if (cfg.has("limit.r")) spec.r_limit = ExtendedReal::parse(cfg.get_string("limit.r"));
  spec.kind = sticky ? LimitKind::StickySDE : LimitKind::HomogenizedSDE;
  spec.validate();

  SimConfig sim = ex.sim;
  sim.grid = SimConfig::uniform_grid(sim.horizon_T, 1);
  sim.step.euler_h = cfg.get_number_or("limit.step", sim.horizon_T / 2000.0);
  Eigen::VectorXd samples = collect_limit_terminal_x(spec, sim, ex.threads);
  SampleSummary s = summarize(samples);

  CsvWriter csv(out_dir + "/" + scenario + "-samples.csv", ex.config_hash(),
                ex.sim.master_seed, {"path", "x_T"});
  for (Eigen::Index i = 0; i < samples.size(); ++i)
    csv.row({CsvWriter::num(static_cast<std::int64_t>(i)), fmt(samples[i])});
  result.log_lines.push_back("terminal mean " + fmt(s.mean) + " sd " + fmt(s.sd) +
                             " se " + fmt(s.se));
  finish(ex, scenario, out_dir, result);
  return result;
}

RunResult run_ode_limit(const Experiment& ex, const std::string& scenario,
                        const std::string& out_dir) {
  ensure_directory(out_dir);
  RunResult result;
  const Config& cfg = ex.config;
  LimitSpec spec;
  spec.field = ex.field;
  spec.density = ex.density;
  const std::string kind = cfg.get_string_or("ode.kind", "degenerate");
  if (cfg.has("scaling.r")) spec.r_limit = ExtendedReal(cfg.get_number("scaling.r"));
  spec.kind = kind == "sticky" ? LimitKind::StickyODE : LimitKind::DegenerateODE;
  const double T = ex.sim.horizon_T;
  const double step = cfg.get_number_or("ode.step", 1e-3);

  auto solve = [&](double st) {
    return spec.kind == LimitKind::StickyODE
               ? solve_sticky_ode(spec, ex.sim.initial_x, ex.sim.initial_y, T, st)
               : solve_degenerate_ode(spec, ex.sim.initial_x, ex.sim.initial_y, T, st);
  };
  OdePath path = solve(step);

  std::vector<std::string> cols = {"time", "x"};
  for (int i = 0; i < ex.field.y_dim(); ++i) cols.push_back("y" + std::to_string(i + 1));
  CsvWriter csv(out_dir + "/" + scenario + "-ode.csv", ex.config_hash(),
                ex.sim.master_seed, cols);
  for (Eigen::Index j = 0; j < path.times.size(); ++j) {
    std::vector<std::string> row = {fmt(path.times[j]), fmt(path.x[j])};
    for (int i = 0; i < ex.field.y_dim(); ++i) row.push_back(fmt(path.y(j, i)));
    csv.row(row);
  }

  // observed order by step halving at the endpoint
  OdePath p2 = solve(step / 2.0), p4 = solve(step / 4.0);
  double x_end = path.x[path.x.size() - 1];
  double e1 = std::abs(x_end - p4.x[p4.x.size() - 1]);
  double e2 = std::abs(p2.x[p2.x.size() - 1] - p4.x[p4.x.size() - 1]);
  double rounding = 1e-12 * std::max(1.0, std::abs(x_end));
  if (e1 <= rounding) {
    result.log_lines.push_back("RK4 step-halving errors at rounding level");
    if (cfg.get_bool_or("ode.check_order", false))
      result.verdict.add("rk4_order", 4.0, 3.8, ">=", true,
                         "exact to rounding on this problem");
  } else if (e2 > 0.0) {
    double order = std::log2(e1 / e2);
    result.log_lines.push_back("observed RK4 order ~ " + fmt(order));
    if (cfg.get_bool_or("ode.check_order", false))
      result.verdict.add("rk4_order", order, 3.8, ">=", order >= 3.8);
  }
  finish(ex, scenario, out_dir, result);
  return result;
}

}  // namespace memlab
