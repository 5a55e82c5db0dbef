#ifndef MEMLAB_PATH_BUNDLE_HPP
#define MEMLAB_PATH_BUNDLE_HPP

#include <Eigen/Dense>

namespace memlab {

// One discretized sample path on the output grid. Columns of y are the grid
// times, rows the y-components. All accumulators are cumulative from 0.
struct PathBundle {
  Eigen::VectorXd times;
  Eigen::VectorXd x;
  Eigen::MatrixXd y;                 // grid.size() x d
  Eigen::VectorXd local_time_total;  // sum over membranes of L^{a_k}
  Eigen::VectorXd ltime_beta;        // sum_k int beta dL^{a_k}
  Eigen::MatrixXd ltime_theta;       // grid.size() x d
  Eigen::VectorXd ltime_gamma;       // sum_k int gamma dL^{a_k}
  Eigen::VectorXd a_functional;      // A_t = t + lambda * ltime_gamma
  Eigen::MatrixXd per_membrane_l;    // optional: grid.size() x n_membranes
  bool escaped_window = false;

  bool has_per_membrane() const { return per_membrane_l.size() > 0; }
  Eigen::Index grid_size() const { return times.size(); }

  double terminal_x() const { return x[x.size() - 1]; }
  double terminal_a() const { return a_functional[a_functional.size() - 1]; }
};

// Monotone piecewise-linear inversion of the stored A on its grid: returns
// s-values with A(s) = t for each query. Queries must lie in [0, A_T].
Eigen::VectorXd invert_time_change(const PathBundle& bundle,
                                   const Eigen::VectorXd& query_times);

// Piecewise-linear sample of a grid function at time s (s clamped to grid).
double sample_grid(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                   double s);

// t -> eps * sum_k L^{a_k}_t on the bundle grid.
Eigen::VectorXd local_time_sum_path(const PathBundle& bundle, double epsilon);

// X sampled at the time-changed clock: X(A^{-1}(t)) for each query t.
Eigen::VectorXd time_changed_x(const PathBundle& bundle,
                               const Eigen::VectorXd& query_times);

}  // namespace memlab

#endif  // MEMLAB_PATH_BUNDLE_HPP
