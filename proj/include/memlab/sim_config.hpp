#ifndef MEMLAB_SIM_CONFIG_HPP
#define MEMLAB_SIM_CONFIG_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "memlab/errors.hpp"

namespace memlab {

enum class Scheme { EulerMollified, StripWalk };

struct StepParams {
  double euler_h = 1e-4;          // Euler-Maruyama step
  double mollifier_rho = 1e-2;    // local-time band half-width
  bool stripwalk_exact_sojourn = false;  // sample exit times instead of means
  bool bridge_correction = false;        // Brownian-bridge exit detection
};

struct SimConfig {
  double initial_x = 0.0;
  Eigen::VectorXd initial_y;
  double horizon_T = 1.0;
  std::int64_t n_paths = 1000;
  std::uint64_t master_seed = 0;
  Scheme scheme = Scheme::EulerMollified;
  StepParams step;
  Eigen::VectorXd grid;  // output times, increasing, grid[0] == 0

  static Eigen::VectorXd uniform_grid(double T, int n_cells) {
    Eigen::VectorXd g(n_cells + 1);
    for (int i = 0; i <= n_cells; ++i) g[i] = T * static_cast<double>(i) / n_cells;
    return g;
  }

  void validate(double sigma00_norm) const {
    if (horizon_T <= 0.0) raise(ErrorCode::ValidationError, "horizon_T must be > 0");
    if (step.euler_h <= 0.0) raise(ErrorCode::ValidationError, "euler_h must be > 0");
    if (step.mollifier_rho <= 0.0)
      raise(ErrorCode::ValidationError, "mollifier_rho must be > 0");
    if (n_paths < 1) raise(ErrorCode::ValidationError, "n_paths must be >= 1");
    if (grid.size() < 2 || grid[0] != 0.0)
      raise(ErrorCode::ValidationError, "output grid must start at 0 with >= 2 points");
    for (Eigen::Index i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1]))
        raise(ErrorCode::ValidationError, "output grid must be strictly increasing");
    if (scheme == Scheme::EulerMollified &&
        std::sqrt(sigma00_norm * step.euler_h) > step.mollifier_rho / 3.0)
      raise(ErrorCode::StepTooLarge,
            "sqrt(|Sigma00| h) exceeds rho/3; one Euler step may jump the band");
  }
};

// Defaults from the scheme cost/accuracy trade-off: bands must not overlap
// and a step must rarely jump across a band.
inline double default_mollifier_rho(double epsilon, double d_min) {
  return epsilon * d_min / 8.0;
}
inline double default_euler_h(double rho, double sigma00_norm) {
  return rho * rho / (10.0 * sigma00_norm);
}

}  // namespace memlab

#endif  // MEMLAB_SIM_CONFIG_HPP
