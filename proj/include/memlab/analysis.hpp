#ifndef MEMLAB_ANALYSIS_HPP
#define MEMLAB_ANALYSIS_HPP

#include <string>
#include <vector>

#include "memlab/limit_solvers.hpp"
#include "memlab/membranes.hpp"
#include "memlab/sim_config.hpp"
#include "memlab/stats.hpp"

namespace memlab {

struct ConvergenceRow {
  double epsilon = 0.0;
  double delta = 0.0;
  double lambda = 0.0;
  double distance = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  double escaped_fraction = 0.0;
  double sample_mean = 0.0;
  double sample_sd = 0.0;
};

// Rows sorted by epsilon descending plus the least-squares log-log fit of
// distance against epsilon. Rows whose CI overlaps the KS noise floor are
// excluded from the fit.
struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  int fitted_rows = 0;

  void fit(double noise_floor);
};

// Sampling harness: run n paths of the configured prelimit scheme and return
// terminal X samples (escaped paths are excluded and counted).
struct TerminalSamples {
  Eigen::VectorXd x;
  std::int64_t n_escaped = 0;
  std::int64_t n_requested = 0;
  double escaped_fraction() const {
    return n_requested > 0 ? static_cast<double>(n_escaped) / n_requested : 0.0;
  }
};

TerminalSamples collect_terminal_x(const CoefficientField& field,
                                   const MembraneFamily& membranes,
                                   const ScalingRegime& regime,
                                   const SimConfig& cfg, int threads);

// Terminal samples of the time-changed process X(A^{-1}(t_query)); the
// inverse is located inside the Euler loop (within-step interpolation), so
// no output-grid resolution is lost.
TerminalSamples collect_time_changed_terminal_x(const CoefficientField& field,
                                                const MembraneFamily& membranes,
                                                const ScalingRegime& regime,
                                                const SimConfig& cfg,
                                                double t_query, int threads);

// Limit-solver terminal samples.
Eigen::VectorXd collect_limit_terminal_x(const LimitSpec& spec,
                                         const SimConfig& cfg, int threads);

// Terminal samples of the homogenized solution composed with the inverse of
// its limiting A (realizes the time-change identity numerically).
Eigen::VectorXd collect_homogenized_time_changed_x(const LimitSpec& spec,
                                                   const SimConfig& cfg,
                                                   double t_query, int threads);

// N(mean, sd^2) marginal of the limit system at time T for constant
// coefficients; raises ConfigError when a coefficient is nonconstant.
struct NormalLaw {
  double mean = 0.0;
  double sd = 1.0;
};
NormalLaw analytic_limit_normal(const LimitSpec& spec, double x0, double T);

// Per-path sup_t | eps sum_k L^{a_k}_t - int_0^t Sigma00/d ds | with the
// integral taken by trapezoid quadrature along the same path.
struct LocalTimeCheckResult {
  double mean_sup = 0.0;
  double p95_sup = 0.0;
  std::int64_t n_paths = 0;
  std::int64_t n_escaped = 0;
};

LocalTimeCheckResult local_time_functional_check(
    const CoefficientField& field, const MembraneFamily& membranes,
    const MembraneDensity& density, const ScalingRegime& regime,
    const SimConfig& cfg, int threads);

}  // namespace memlab

#endif  // MEMLAB_ANALYSIS_HPP
