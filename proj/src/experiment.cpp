#include "memlab/experiment.hpp"

#include <cmath>

namespace memlab {

namespace {

ScalarField parse_field_key(const Config& cfg, const std::string& key) {
  return ScalarField::parse(cfg.get_string(key));
}

}  // namespace

CoefficientField field_from_config(const Config& cfg) {
  const int d = static_cast<int>(cfg.get_int_or("coefficients.y_dim", 0));
  const int m = static_cast<int>(cfg.get_int_or("coefficients.noise_dim", 1));
  CoefficientField field(d, m);

  auto matrix = cfg.get_string_matrix("coefficients.sigma");
  if (static_cast<int>(matrix.size()) != d + 1)
    raise(ErrorCode::ConfigError, "coefficients.sigma needs y_dim+1 rows");
  for (int i = 0; i <= d; ++i) {
    if (static_cast<int>(matrix[static_cast<std::size_t>(i)].size()) != m)
      raise(ErrorCode::ConfigError, "coefficients.sigma rows need noise_dim entries");
    for (int l = 0; l < m; ++l)
      field.sigma(i, l) = ScalarField::parse(matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)]);
  }

  auto b_list = cfg.get_strings("coefficients.b");
  if (static_cast<int>(b_list.size()) != d + 1)
    raise(ErrorCode::ConfigError, "coefficients.b needs y_dim+1 entries");
  for (int i = 0; i <= d; ++i)
    field.b(i) = ScalarField::parse(b_list[static_cast<std::size_t>(i)]);

  field.beta() = parse_field_key(cfg, "coefficients.beta");
  field.gamma() = parse_field_key(cfg, "coefficients.gamma");

  if (d > 0) {
    auto theta_list = cfg.get_strings("coefficients.theta");
    if (static_cast<int>(theta_list.size()) != d)
      raise(ErrorCode::ConfigError, "coefficients.theta needs y_dim entries");
    for (int i = 0; i < d; ++i)
      field.theta(i) = ScalarField::parse(theta_list[static_cast<std::size_t>(i)]);
  }

  CoefficientBounds& bd = field.bounds();
  bd.sigma_norm = cfg.get_number_or("coefficients.bounds.sigma", 1.0);
  bd.b_norm = cfg.get_number_or("coefficients.bounds.b", 0.0);
  bd.beta_norm = cfg.get_number_or("coefficients.bounds.beta", 0.0);
  bd.theta_norm = cfg.get_number_or("coefficients.bounds.theta", 0.0);
  bd.gamma_norm = cfg.get_number_or("coefficients.bounds.gamma", 0.0);
  bd.sigma00_floor = cfg.get_number_or("coefficients.bounds.sigma00_floor", 1.0);
  if (bd.sigma00_floor <= 0.0)
    raise(ErrorCode::ConfigError, "coefficients.bounds.sigma00_floor must be > 0");
  if (bd.gamma_norm < 0.0)
    raise(ErrorCode::ConfigError, "coefficients.gamma declared bound is negative");
  return field;
}

MembraneDensity density_from_config(const Config& cfg) {
  MembraneDensity density;
  density.d = ScalarField::parse(cfg.get_string_or("membranes.density", "const:1.0"));
  density.d_min = cfg.get_number_or("membranes.d_min", 1.0);
  density.d_max = cfg.get_number_or("membranes.d_max", 1.0);
  density.lipschitz_const = cfg.get_number_or("membranes.lipschitz", 0.0);
  if (density.d_min <= 0.0)
    raise(ErrorCode::NonPositiveDensity, "membranes.d_min must be > 0");
  return density;
}

double Experiment::sigma00_norm_bound() const {
  double s = field.bounds().sigma_norm;
  return static_cast<double>(field.noise_dim()) * s * s;
}

StepParams Experiment::step_for(double epsilon) const {
  StepParams sp = sim.step;
  double divisor = config.get_number_or("simulation.rho_divisor", 8.0);
  if (config.has("simulation.rho"))
    sp.mollifier_rho = config.get_number("simulation.rho");
  else
    sp.mollifier_rho = epsilon * density.d_min / divisor;
  if (config.has("simulation.h"))
    sp.euler_h = config.get_number("simulation.h");
  else
    sp.euler_h = default_euler_h(sp.mollifier_rho, sigma00_norm_bound());
  return sp;
}

MembraneFamily Experiment::make_membranes(double epsilon) const {
  if (explicit_membranes) {
    MembraneFamily fam;
    fam.epsilon = epsilon;
    fam.points = *explicit_membranes;
    fam.window_lo = 0;
    fam.window_hi = static_cast<int>(fam.points.size()) - 1;
    for (Eigen::Index i = 1; i < fam.points.size(); ++i)
      if (!(fam.points[i] > fam.points[i - 1]))
        raise(ErrorCode::ValidationError, "membranes.points must be increasing");
    return fam;
  }
  double drift_bound =
      field.bounds().b_norm +
      regime.delta / epsilon * field.bounds().beta_norm * sigma00_norm_bound() /
          density.d_min;
  double pad = escape_window_padding(sigma00_norm_bound(), drift_bound, sim.horizon_T);
  double x_lo = std::min(sim.initial_x, 0.0) - pad - epsilon * density.d_max;
  double x_hi = std::max(sim.initial_x, 0.0) + pad + epsilon * density.d_max;
  return build_membranes(density, epsilon, x_lo, x_hi);
}

MembraneFamily Experiment::make_membranes() const {
  return make_membranes(regime.epsilon);
}

Experiment load_experiment(const Config& config) {
  Experiment ex;
  ex.config = config;
  ex.field = field_from_config(config);
  ex.density = density_from_config(config);

  ex.regime.epsilon = config.get_number_or("scaling.epsilon", 0.1);
  ex.regime.delta = config.get_number_or("scaling.delta", ex.regime.epsilon);
  ex.regime.lambda = config.get_number_or("scaling.lambda", 0.0);

  SimConfig& sim = ex.sim;
  sim.initial_x = config.get_number_or("simulation.x0", 0.0);
  std::vector<double> y0 =
      config.has("simulation.y0") ? config.get_numbers("simulation.y0")
                                  : std::vector<double>{};
  if (static_cast<int>(y0.size()) != ex.field.y_dim())
    raise(ErrorCode::ConfigError, "simulation.y0 needs y_dim entries");
  sim.initial_y = Eigen::Map<Eigen::VectorXd>(y0.data(), static_cast<Eigen::Index>(y0.size()));
  sim.horizon_T = config.get_number_or("simulation.horizon", 1.0);
  sim.n_paths = config.get_int_or("simulation.paths", 1000);
  sim.master_seed = static_cast<std::uint64_t>(config.get_int_or("simulation.seed", 0));
  std::string scheme = config.get_string_or("simulation.scheme", "euler");
  if (scheme == "euler")
    sim.scheme = Scheme::EulerMollified;
  else if (scheme == "stripwalk")
    sim.scheme = Scheme::StripWalk;
  else
    raise(ErrorCode::ConfigError, "simulation.scheme must be euler or stripwalk");
  int grid_cells = static_cast<int>(config.get_int_or("simulation.grid_cells", 1));
  sim.grid = SimConfig::uniform_grid(sim.horizon_T, grid_cells);
  sim.step.stripwalk_exact_sojourn =
      config.get_bool_or("simulation.exact_sojourn", false);
  sim.step.bridge_correction =
      config.get_bool_or("simulation.bridge_correction", false);
  ex.threads = static_cast<int>(config.get_int_or("simulation.threads", 0));

  ex.box.t_hi = config.get_number_or("validation.t_hi", sim.horizon_T);
  ex.box.x_lo = config.get_number_or("validation.x_lo", -2.0);
  ex.box.x_hi = config.get_number_or("validation.x_hi", 2.0);
  ex.box.y_lo = config.get_number_or("validation.y_lo", -2.0);
  ex.box.y_hi = config.get_number_or("validation.y_hi", 2.0);
  ex.box.n_samples = static_cast<int>(config.get_int_or("validation.samples", 10000));

  if (config.has("membranes.points")) {
    std::vector<double> pts = config.get_numbers("membranes.points");
    if (pts.empty()) raise(ErrorCode::ConfigError, "membranes.points is empty");
    ex.explicit_membranes =
        Eigen::Map<Eigen::VectorXd>(pts.data(), static_cast<Eigen::Index>(pts.size()));
  }

  // resolved step parameters at the configured epsilon
  ex.sim.step = ex.step_for(ex.regime.epsilon);

  if (!config.get_bool_or("validation.skip", false)) {
    validate_field(ex.field, ex.box);
    validate_density(ex.density, ex.box);
    ex.regime.validate(ex.field.bounds().beta_norm);
  }
  return ex;
}

}  // namespace memlab
