#ifndef MEMLAB_EULER_HPP
#define MEMLAB_EULER_HPP

#include <Eigen/Dense>

#include "memlab/fields.hpp"
#include "memlab/membranes.hpp"
#include "memlab/path_bundle.hpp"
#include "memlab/regimes.hpp"
#include "memlab/rng.hpp"
#include "memlab/sim_config.hpp"

namespace memlab {

// Euler-Maruyama stepper for the interface SDE with the local-time terms
// replaced by band drifts of half-width rho. The per-step local-time
// increment at a membrane within reach is (2 rho)^{-1} Sigma00 h, matching
// the mollified occupation-density form of the symmetric local time.
//
// The in-band x-drift uses atanh(delta*beta) in place of delta*beta: the
// smoothed-drift SDE converges (rho -> 0) to the skew process whose one-sided
// crossing ratio is exp(-2 delta beta), while the local-time SDE crosses with
// probability (1+delta beta)/2; the atanh tilt makes the band limit agree
// with the local-time law for all |delta beta| < 1 instead of only to
// second order. The accumulated functionals (L, int beta dL, ...) keep the
// untilted coefficients.
class EulerMollifiedStepper {
 public:
  EulerMollifiedStepper(const CoefficientField& field,
                        const MembraneFamily& membranes,
                        const ScalingRegime& regime, const StepParams& step);

  void reset(double t0, double x0, const Eigen::VectorXd& y0);

  // One step of size dt (dt <= euler_h). Draws field.noise_dim() normals.
  void advance(double dt, RngLane& lane);

  double t() const { return t_; }
  double x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  double local_time_total() const { return l_total_; }
  double ltime_beta() const { return l_beta_; }
  double ltime_gamma() const { return l_gamma_; }
  const Eigen::VectorXd& ltime_theta() const { return l_theta_; }
  // A_t - t; the full A is t + a_extra.
  double a_extra() const { return a_extra_; }
  bool escaped() const { return escaped_; }
  const Eigen::VectorXd& per_membrane_l() const { return per_membrane_l_; }
  void enable_per_membrane() {
    per_membrane_l_ = Eigen::VectorXd::Zero(membranes_->points.size());
    track_per_membrane_ = true;
  }
  double sigma00_here() const;

 private:
  const CoefficientField* field_;
  const MembraneFamily* membranes_;
  double delta_, lambda_;
  double rho_, inv2rho_;
  double escape_lo_, escape_hi_;

  double t_ = 0.0, x_ = 0.0;
  Eigen::VectorXd y_;
  double l_total_ = 0.0, l_beta_ = 0.0, l_gamma_ = 0.0, a_extra_ = 0.0;
  Eigen::VectorXd l_theta_;
  Eigen::VectorXd per_membrane_l_;
  bool track_per_membrane_ = false;
  bool escaped_ = false;
  Eigen::Index nearest_ = 0;

  Eigen::MatrixXd sig_;   // (d+1) x m buffer
  Eigen::VectorXd bvec_;  // d+1 buffer
};

// Full-path simulation on cfg.grid. Precondition: cfg.scheme == EulerMollified
// and the step invariant sqrt(|Sigma00| h) <= rho/3 holds.
PathBundle simulate_euler_mollified(const CoefficientField& field,
                                    const MembraneFamily& membranes,
                                    const ScalingRegime& regime,
                                    const SimConfig& cfg, RngLane& lane,
                                    bool per_membrane = false);

}  // namespace memlab

#endif  // MEMLAB_EULER_HPP
