#ifndef MEMLAB_EXPERIMENT_HPP
#define MEMLAB_EXPERIMENT_HPP

#include <optional>
#include <string>

#include "memlab/analysis.hpp"
#include "memlab/config.hpp"
#include "memlab/exit_lab.hpp"
#include "memlab/validate.hpp"

namespace memlab {

// Resolved experiment inputs built from a parsed config.
struct Experiment {
  Config config;
  CoefficientField field;
  MembraneDensity density;
  ScalingRegime regime;
  SimConfig sim;
  ValidationBox box;
  int threads = 0;
  std::optional<Eigen::VectorXd> explicit_membranes;

  std::uint64_t config_hash() const { return config.hash(); }

  // Membrane family for the current regime: explicit points if configured,
  // otherwise built from the density over a window wide enough that escape
  // before the horizon is negligible.
  MembraneFamily make_membranes() const;
  MembraneFamily make_membranes(double epsilon) const;

  // Step parameters for a given epsilon: config overrides or the defaults
  // rho = eps*d_min/rho_divisor (default 8), h = rho^2/(10 |Sigma00|).
  StepParams step_for(double epsilon) const;

  double sigma00_norm_bound() const;
};

// Builds and validates an experiment from a config (assumption spot-checks
// included unless [validation] skip = true).
Experiment load_experiment(const Config& config);

// Fields only (no sampling validation); used by unit tests.
CoefficientField field_from_config(const Config& config);
MembraneDensity density_from_config(const Config& config);

struct ExperimentManifest {
  std::string scenario;
  std::string config_path;
  std::uint64_t config_hash = 0;
  std::uint64_t master_seed = 0;
  std::string out_dir;
  std::string tool_version;
};

}  // namespace memlab

#endif  // MEMLAB_EXPERIMENT_HPP
