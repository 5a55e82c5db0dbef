#include "memlab/euler.hpp"

#include <cmath>

namespace memlab {

EulerMollifiedStepper::EulerMollifiedStepper(const CoefficientField& field,
                                             const MembraneFamily& membranes,
                                             const ScalingRegime& regime,
                                             const StepParams& step)
    : field_(&field),
      membranes_(&membranes),
      delta_(regime.delta),
      lambda_(regime.lambda),
      rho_(step.mollifier_rho),
      inv2rho_(0.5 / step.mollifier_rho),
      y_(field.y_dim()),
      l_theta_(Eigen::VectorXd::Zero(field.y_dim())),
      sig_(field.y_dim() + 1, field.noise_dim()),
      bvec_(field.y_dim() + 1) {
  const Eigen::Index n = membranes.points.size();
  if (n >= 2) {
    escape_lo_ = membranes.points[0] - (membranes.points[1] - membranes.points[0]);
    escape_hi_ = membranes.points[n - 1] +
                 (membranes.points[n - 1] - membranes.points[n - 2]);
  } else {
    escape_lo_ = -std::numeric_limits<double>::infinity();
    escape_hi_ = std::numeric_limits<double>::infinity();
  }
}

void EulerMollifiedStepper::reset(double t0, double x0,
                                  const Eigen::VectorXd& y0) {
  t_ = t0;
  x_ = x0;
  y_ = y0;
  if (y_.size() != field_->y_dim())
    raise(ErrorCode::ValidationError, "initial y has wrong dimension");
  l_total_ = l_beta_ = l_gamma_ = a_extra_ = 0.0;
  l_theta_.setZero();
  if (track_per_membrane_) per_membrane_l_.setZero();
  escaped_ = false;
  nearest_ = membranes_->points.size() > 0 ? membranes_->nearest_index(x0) : 0;
}

double EulerMollifiedStepper::sigma00_here() const {
  return field_->sigma00_raw(t_, x_, y_.data());
}

void EulerMollifiedStepper::advance(double dt, RngLane& lane) {
  const int d = field_->y_dim();
  const int m = field_->noise_dim();
  const Eigen::VectorXd& pts = membranes_->points;
  const Eigen::Index n = pts.size();

  // coefficients at the step start
  double sigma00 = 0.0;
  for (int i = 0; i <= d; ++i)
    for (int l = 0; l < m; ++l) {
      double v = field_->sigma(i, l).eval(t_, x_, y_.data(), d);
      sig_(i, l) = v;
      if (i == 0) sigma00 += v * v;
    }
  for (int i = 0; i <= d; ++i)
    bvec_[i] = field_->b(i).eval(t_, x_, y_.data(), d);

  double dx = bvec_[0] * dt;
  double dl = 0.0;

  if (n > 0) {
    while (nearest_ + 1 < n && pts[nearest_ + 1] - x_ < x_ - pts[nearest_])
      ++nearest_;
    while (nearest_ > 0 && x_ - pts[nearest_ - 1] < pts[nearest_] - x_)
      --nearest_;
    double a_k = pts[nearest_];
    if (std::abs(x_ - a_k) <= rho_) {
      dl = inv2rho_ * sigma00 * dt;
      double beta_v = field_->beta().eval(t_, a_k, y_.data(), d);
      double gamma_v = field_->gamma().eval(t_, a_k, y_.data(), d);
      dx += std::atanh(delta_ * beta_v) * inv2rho_ * sigma00 * dt;
      l_total_ += dl;
      l_beta_ += beta_v * dl;
      l_gamma_ += gamma_v * dl;
      a_extra_ += lambda_ * gamma_v * dl;
      if (track_per_membrane_) per_membrane_l_[nearest_] += dl;
      for (int i = 0; i < d; ++i) {
        double th = field_->theta(i).eval(t_, a_k, y_.data(), d);
        l_theta_[i] += th * dl;
        y_[i] += delta_ * th * dl;
      }
    }
  }

  const double sdt = std::sqrt(dt);
  for (int l = 0; l < m; ++l) {
    double w = sdt * lane.next_normal();
    dx += sig_(0, l) * w;
    for (int i = 1; i <= d; ++i) y_[i - 1] += sig_(i, l) * w;
  }
  for (int i = 1; i <= d; ++i) y_[i - 1] += bvec_[i] * dt;

  x_ += dx;
  t_ += dt;
  if (x_ < escape_lo_ || x_ > escape_hi_) escaped_ = true;
}

PathBundle simulate_euler_mollified(const CoefficientField& field,
                                    const MembraneFamily& membranes,
                                    const ScalingRegime& regime,
                                    const SimConfig& cfg, RngLane& lane,
                                    bool per_membrane) {
  if (cfg.scheme != Scheme::EulerMollified)
    raise(ErrorCode::ConfigError, "simulate_euler_mollified needs scheme=euler");

  EulerMollifiedStepper stepper(field, membranes, regime, cfg.step);
  if (per_membrane) stepper.enable_per_membrane();
  stepper.reset(0.0, cfg.initial_x, cfg.initial_y);

  const Eigen::Index g = cfg.grid.size();
  const int d = field.y_dim();
  PathBundle out;
  out.times = cfg.grid;
  out.x.resize(g);
  out.y.resize(g, d);
  out.local_time_total.resize(g);
  out.ltime_beta.resize(g);
  out.ltime_theta.resize(g, d);
  out.ltime_gamma.resize(g);
  out.a_functional.resize(g);
  if (per_membrane) out.per_membrane_l.resize(g, membranes.points.size());

  auto record = [&](Eigen::Index row) {
    out.x[row] = stepper.x();
    out.y.row(row) = stepper.y().transpose();
    out.local_time_total[row] = stepper.local_time_total();
    out.ltime_beta[row] = stepper.ltime_beta();
    out.ltime_theta.row(row) = stepper.ltime_theta().transpose();
    out.ltime_gamma[row] = stepper.ltime_gamma();
    out.a_functional[row] = cfg.grid[row] + stepper.a_extra();
    if (per_membrane) out.per_membrane_l.row(row) = stepper.per_membrane_l().transpose();
  };

  record(0);
  const double h = cfg.step.euler_h;
  for (Eigen::Index cell = 1; cell < g; ++cell) {
    double target = cfg.grid[cell];
    while (stepper.t() + h < target - 1e-15 * target) stepper.advance(h, lane);
    double rem = target - stepper.t();
    if (rem > 0.0) stepper.advance(rem, lane);
    record(cell);
  }
  out.escaped_window = stepper.escaped();
  return out;
}

}  // namespace memlab
