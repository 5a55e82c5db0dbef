#include "memlab/limit_solvers.hpp"

#include <cmath>
#include <functional>

namespace memlab {

namespace {

// Shared Euler driver for the two limit SDEs. sticky toggles the
// 1/(1+q*gamma*Sigma00/d) slowdown of drift and diffusion.
PathBundle limit_euler(const LimitSpec& spec, const SimConfig& cfg,
                       RngLane& lane, bool sticky) {
  const CoefficientField& field = spec.field;
  const int d = field.y_dim();
  const int m = field.noise_dim();
  const double p = spec.p_limit.finite_value();
  const bool has_q = !spec.q_limit.is_infinite();
  const double q = has_q ? spec.q_limit.finite_value() : 0.0;
  if (sticky && !has_q)
    raise(ErrorCode::RegimeMismatch, "sticky SDE needs q < inf");

  const Eigen::Index g = cfg.grid.size();
  PathBundle out;
  out.times = cfg.grid;
  out.x.resize(g);
  out.y.resize(g, d);
  out.local_time_total = Eigen::VectorXd::Zero(g);
  out.ltime_beta = Eigen::VectorXd::Zero(g);
  out.ltime_theta = Eigen::MatrixXd::Zero(g, d);
  out.ltime_gamma = Eigen::VectorXd::Zero(g);
  out.a_functional.resize(g);

  double t = 0.0;
  double x = cfg.initial_x;
  Eigen::VectorXd y = cfg.initial_y;
  double a_extra = 0.0;  // A_t - t
  Eigen::MatrixXd sig(d + 1, m);

  auto record = [&](Eigen::Index row) {
    out.x[row] = x;
    out.y.row(row) = y.transpose();
    out.a_functional[row] = cfg.grid[row] + a_extra;
  };
  record(0);

  const double h = cfg.step.euler_h;
  for (Eigen::Index cell = 1; cell < g; ++cell) {
    double target = cfg.grid[cell];
    while (t < target - 1e-15) {
      double dt = std::min(h, target - t);
      double sigma00 = 0.0;
      for (int i = 0; i <= d; ++i)
        for (int l = 0; l < m; ++l) {
          sig(i, l) = field.sigma(i, l).eval(t, x, y.data(), d);
          if (i == 0) sigma00 += sig(0, l) * sig(0, l);
        }
      double dens = spec.density(x);
      if (dens < 0.5 * spec.density.d_min)
        raise(ErrorCode::DensityZero, "density fell below d_min/2 along a path");
      double ratio = sigma00 / dens;
      double beta_v = field.beta().eval(t, x, y.data(), d);
      double gamma_v = field.gamma().eval(t, x, y.data(), d);
      double slowdown = 1.0 + (has_q ? q * gamma_v * ratio : 0.0);
      double drift_scale = sticky ? 1.0 / slowdown : 1.0;
      double diff_scale = sticky ? 1.0 / std::sqrt(slowdown) : 1.0;

      double dx = (field.b(0).eval(t, x, y.data(), d) + p * beta_v * ratio) *
                  drift_scale * dt;
      Eigen::VectorXd dy = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < d; ++i)
        dy[i] = (field.b(i + 1).eval(t, x, y.data(), d) +
                 p * field.theta(i).eval(t, x, y.data(), d) * ratio) *
                drift_scale * dt;
      const double sdt = std::sqrt(dt);
      for (int l = 0; l < m; ++l) {
        double w = sdt * diff_scale * lane.next_normal();
        dx += sig(0, l) * w;
        for (int i = 0; i < d; ++i) dy[i] += sig(i + 1, l) * w;
      }
      if (!sticky && has_q) a_extra += q * gamma_v * ratio * dt;
      x += dx;
      y += dy;
      t += dt;
    }
    t = target;
    record(cell);
  }
  return out;
}

using Rhs = std::function<void(double x, const Eigen::VectorXd& y, double& fx,
                               Eigen::VectorXd& fy)>;

OdePath rk4(double x0, const Eigen::VectorXd& y0, double T, double step,
            const Rhs& rhs) {
  if (step <= 0.0) raise(ErrorCode::ConfigError, "ODE step must be > 0");
  const int n = static_cast<int>(std::ceil(T / step - 1e-12));
  const int d = static_cast<int>(y0.size());
  OdePath path;
  path.times.resize(n + 1);
  path.x.resize(n + 1);
  path.y.resize(n + 1, d);
  double x = x0;
  Eigen::VectorXd y = y0;
  path.times[0] = 0.0;
  path.x[0] = x0;
  path.y.row(0) = y0.transpose();

  double k1x, k2x, k3x, k4x;
  Eigen::VectorXd k1y(d), k2y(d), k3y(d), k4y(d);
  for (int i = 0; i < n; ++i) {
    double dt = std::min(step, T - i * step);
    rhs(x, y, k1x, k1y);
    rhs(x + 0.5 * dt * k1x, y + 0.5 * dt * k1y, k2x, k2y);
    rhs(x + 0.5 * dt * k2x, y + 0.5 * dt * k2y, k3x, k3y);
    rhs(x + dt * k3x, y + dt * k3y, k4x, k4y);
    x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    path.times[i + 1] = std::min(T, (i + 1) * step);
    path.x[i + 1] = x;
    path.y.row(i + 1) = y.transpose();
  }
  return path;
}

}  // namespace

PathBundle solve_homogenized_sde(const LimitSpec& spec, const SimConfig& cfg,
                                 RngLane& lane) {
  if (spec.kind != LimitKind::HomogenizedSDE &&
      spec.kind != LimitKind::LimitAFunctional)
    raise(ErrorCode::RegimeMismatch, "spec.kind is not the homogenized SDE");
  spec.validate();
  return limit_euler(spec, cfg, lane, false);
}

PathBundle solve_sticky_sde(const LimitSpec& spec, const SimConfig& cfg,
                            RngLane& lane) {
  if (spec.kind != LimitKind::StickySDE)
    raise(ErrorCode::RegimeMismatch, "spec.kind is not the sticky SDE");
  spec.validate();
  return limit_euler(spec, cfg, lane, true);
}

double homogenized_time_changed_terminal_x(const LimitSpec& spec,
                                           const SimConfig& cfg,
                                           double t_query, RngLane& lane) {
  if (spec.q_limit.is_infinite() || spec.p_limit.is_infinite())
    raise(ErrorCode::RegimeMismatch, "time-change composition needs p, q < inf");
  const CoefficientField& field = spec.field;
  const int d = field.y_dim();
  const int m = field.noise_dim();
  const double p = spec.p_limit.finite_value();
  const double q = spec.q_limit.finite_value();

  double t = 0.0, x = cfg.initial_x, a = 0.0;
  Eigen::VectorXd y = cfg.initial_y;
  Eigen::MatrixXd sig(d + 1, m);
  const double h = cfg.step.euler_h;
  // A grows at rate >= 1, so A reaches t_query by time t_query.
  for (;;) {
    double sigma00 = 0.0;
    for (int i = 0; i <= d; ++i)
      for (int l = 0; l < m; ++l) {
        sig(i, l) = field.sigma(i, l).eval(t, x, y.data(), d);
        if (i == 0) sigma00 += sig(0, l) * sig(0, l);
      }
    double dens = spec.density(x);
    if (dens < 0.5 * spec.density.d_min)
      raise(ErrorCode::DensityZero, "density fell below d_min/2 along a path");
    double ratio = sigma00 / dens;
    double a_rate = 1.0 + q * field.gamma().eval(t, x, y.data(), d) * ratio;
    double dx = (field.b(0).eval(t, x, y.data(), d) +
                 p * field.beta().eval(t, x, y.data(), d) * ratio) * h;
    Eigen::VectorXd dy = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i)
      dy[i] = (field.b(i + 1).eval(t, x, y.data(), d) +
               p * field.theta(i).eval(t, x, y.data(), d) * ratio) * h;
    const double sdt = std::sqrt(h);
    for (int l = 0; l < m; ++l) {
      double w = sdt * lane.next_normal();
      dx += sig(0, l) * w;
      for (int i = 0; i < d; ++i) dy[i] += sig(i + 1, l) * w;
    }
    double a_next = a + a_rate * h;
    if (a_next >= t_query) {
      double w = (t_query - a) / (a_next - a);
      return x + w * dx;
    }
    x += dx;
    y += dy;
    t += h;
    a = a_next;
  }
}

OdePath solve_degenerate_ode(const LimitSpec& spec, double x0,
                             const Eigen::VectorXd& y0, double T, double step) {
  if (spec.kind != LimitKind::DegenerateODE)
    raise(ErrorCode::RegimeMismatch, "spec.kind is not the degenerate ODE");
  const CoefficientField& field = spec.field;
  const int d = field.y_dim();
  // Coefficients are frozen at time 0 in the degenerate limit.
  return rk4(x0, y0, T, step,
             [&](double x, const Eigen::VectorXd& y, double& fx, Eigen::VectorXd& fy) {
               double ratio = field.sigma00(0.0, x, y) / spec.density(x);
               fx = field.beta()(0.0, x, y) * ratio;
               for (int i = 0; i < d; ++i) fy[i] = field.theta(i)(0.0, x, y) * ratio;
             });
}

OdePath solve_sticky_ode(const LimitSpec& spec, double x0,
                         const Eigen::VectorXd& y0, double T, double step) {
  if (spec.kind != LimitKind::StickyODE)
    raise(ErrorCode::RegimeMismatch, "spec.kind is not the sticky ODE");
  spec.validate();
  const CoefficientField& field = spec.field;
  const double r = spec.r_limit.finite_value();
  const int d = field.y_dim();
  return rk4(x0, y0, T, step,
             [&](double x, const Eigen::VectorXd& y, double& fx, Eigen::VectorXd& fy) {
               double gamma_v = field.gamma()(0.0, x, y);
               if (gamma_v < 1e-12)
                 raise(ErrorCode::GammaFloorViolation,
                       "gamma vanished along the sticky ODE path");
               fx = field.beta()(0.0, x, y) / (r * gamma_v);
               for (int i = 0; i < d; ++i)
                 fy[i] = field.theta(i)(0.0, x, y) / (r * gamma_v);
             });
}

}  // namespace memlab
