#ifndef MEMLAB_EXIT_LAB_HPP
#define MEMLAB_EXIT_LAB_HPP

#include <cstdint>

#include "memlab/euler.hpp"

namespace memlab {

// Monte Carlo summary of single-membrane exit statistics. CI half-widths are
// 1.96 * sd / sqrt(n) (normal approximation).
struct ExitStats {
  std::int64_t n_paths = 0;
  std::int64_t n_capped = 0;  // paths that hit the hard time cap (excluded)
  double p_up = 0.0;
  double p_up_ci = 0.0;
  double mean_exit_time = 0.0;
  double mean_exit_time_ci = 0.0;
  double mean_local_time = 0.0;
  double mean_local_time_ci = 0.0;
  double mean_displacement = 0.0;
  double mean_displacement_ci = 0.0;
};

struct ExitLabCase {
  double a_minus = 1.0;
  double a_plus = 1.0;
  Eigen::VectorXd start_y;
  std::int64_t n_paths = 100000;
  int threads = 0;  // 0 = hardware
};

// Runs EulerMollified paths from (0, start_y) until X first leaves
// (-eps a_-, eps a_+), with a membrane at 0. Collects exit side, exit time,
// local time at 0 and terminal displacement. Paths that exceed the hard cap
// 100 eps^2 a_- a_+ / c_Sigma are counted and excluded, never dropped
// silently.
ExitStats single_membrane_exit_mc(const CoefficientField& field,
                                  const ScalingRegime& regime,
                                  const StepParams& step,
                                  const ExitLabCase& lab_case,
                                  std::uint64_t master_seed);

// Exit-at-the-top probability of a skew diffusion from the strip
// (-a_-, a_+): alpha a_- / (alpha a_- + (1-alpha) a_+).
double skew_exit_probability(double alpha, double a_minus, double a_plus);

// Asymptotic references for the exit statistics.
double theory_exit_probability_up(double a_minus, double a_plus);
double theory_mean_local_time(double a_minus, double a_plus, double eps);
double theory_mean_exit_time(double a_minus, double a_plus, double eps,
                             double sigma00);
double theory_mean_displacement(double a_minus, double a_plus, double eps,
                                double delta, double b0, double beta,
                                double sigma00);

}  // namespace memlab

#endif  // MEMLAB_EXIT_LAB_HPP
