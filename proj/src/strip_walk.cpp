#include "memlab/strip_walk.hpp"

#include <cmath>

namespace memlab {

double bm_exit_time_survival(double a, double b, double t) {
  if (t <= 0.0) return 1.0;
  const double ell = a + b;
  const double r = a / ell;
  const double pi = 3.14159265358979323846;
  double s = 0.0;
  for (int n = 1; n < 200000; n += 2) {
    double coef = 4.0 / (n * pi);
    double term = coef * std::sin(n * pi * r) *
                  std::exp(-0.5 * n * n * pi * pi * t / (ell * ell));
    s += term;
    if (coef * std::exp(-0.5 * n * n * pi * pi * t / (ell * ell)) < 1e-12) break;
  }
  return s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
}

namespace {

// Small-t regime: first-image approximation of the exit CDF.
double small_t_cdf(double a, double b, double t) {
  auto phibar = [](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); };
  double st = std::sqrt(t);
  return 2.0 * phibar(a / st) + 2.0 * phibar(b / st);
}

}  // namespace

double sample_bm_exit_time(double a, double b, double u) {
  if (!(a > 0.0) || !(b > 0.0))
    raise(ErrorCode::ConfigError, "exit-time sampler needs a, b > 0");
  if (u <= 0.0 || u >= 1.0)
    raise(ErrorCode::ConfigError, "exit-time sampler needs u in (0,1)");
  const double ell2 = (a + b) * (a + b);
  const double t_small = 1e-4 * ell2;

  // u is the survival level: solve S(t) = u.
  if (small_t_cdf(a, b, t_small) > 1.0 - u) {
    // Left tail: invert the image formula by bisection.
    double lo = 0.0, hi = t_small;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (small_t_cdf(a, b, mid) < 1.0 - u)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  double lo = 0.0, hi = a * b;
  while (bm_exit_time_survival(a, b, hi) > u) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (bm_exit_time_survival(a, b, mid) > u)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14 * ell2) break;
  }
  return 0.5 * (lo + hi);
}

namespace {

struct WalkAccum {
  double l_total = 0.0, l_beta = 0.0, l_gamma = 0.0, a_extra = 0.0;
  Eigen::VectorXd l_theta;
  double x_drift = 0.0;  // accumulated b^0 dt bookkeeping, see header
};

void check_frozen(const CoefficientField& field, double t, double a_k,
                  const Eigen::VectorXd& y, double sigma00, double beta_v,
                  double gamma_v) {
  const CoefficientBounds& bd = field.bounds();
  const double tol = 1e-9;
  if (sigma00 < bd.sigma00_floor - tol)
    raise(ErrorCode::FrozenCoefficientRange,
          "Sigma00 below declared floor at a strip-walk visit");
  if (std::abs(beta_v) > bd.beta_norm + tol ||
      gamma_v < -tol || gamma_v > bd.gamma_norm + tol)
    raise(ErrorCode::FrozenCoefficientRange,
          "beta/gamma outside declared bounds at a strip-walk visit");
  (void)t;
  (void)a_k;
  (void)y;
}

PathBundle exact_single_membrane(const CoefficientField& field,
                                 const MembraneFamily& membranes,
                                 const ScalingRegime& regime,
                                 const SimConfig& cfg, RngLane& lane) {
  if (field.y_dim() != 0 || !field.sigma_is_constant() || !field.b_is_zero() ||
      !field.beta().is_constant() || !field.gamma().is_constant())
    raise(ErrorCode::ConfigError,
          "single-membrane strip walk requires constant sigma/beta/gamma, "
          "b = 0 and y_dim = 0");
  if (cfg.grid.size() != 2)
    raise(ErrorCode::ConfigError,
          "single-membrane strip walk produces terminal samples; use a "
          "two-point output grid");
  const double a0 = membranes.points[0];
  if (cfg.initial_x != a0)
    raise(ErrorCode::ConfigError,
          "single-membrane strip walk must start on the membrane");

  const double T = cfg.grid[1];
  Eigen::VectorXd y0(0);
  const double sigma00 = field.sigma00(0.0, a0, y0);
  const double beta_v = field.beta()(0.0, a0, y0);
  const double gamma_v = field.gamma()(0.0, a0, y0);
  check_frozen(field, 0.0, a0, y0, sigma00, beta_v, gamma_v);
  const double skew = regime.delta * beta_v;
  if (std::abs(skew) >= 1.0)
    raise(ErrorCode::ValidationError, "delta*beta must be in (-1,1)");
  const double alpha = 0.5 * (1.0 + skew);

  // (|Z_T|, L_T(Z)) of a standard skew BM have the reflected-BM joint law:
  // g = |Z|+L is Maxwell(sqrt(T)) and the split is uniform.
  double n1 = lane.next_normal(), n2 = lane.next_normal(), n3 = lane.next_normal();
  double g = std::sqrt(T) * std::sqrt(n1 * n1 + n2 * n2 + n3 * n3);
  double u = lane.next_uniform();
  double absz = u * g;
  double lz = (1.0 - u) * g;
  double sign = lane.next_uniform() < alpha ? 1.0 : -1.0;
  double sig = std::sqrt(sigma00);

  PathBundle out;
  out.times = cfg.grid;
  out.x.resize(2);
  out.x << a0, a0 + sign * sig * absz;
  out.y.resize(2, 0);
  out.local_time_total.resize(2);
  out.local_time_total << 0.0, sig * lz;
  out.ltime_beta = beta_v * out.local_time_total;
  out.ltime_gamma = gamma_v * out.local_time_total;
  out.ltime_theta.resize(2, 0);
  out.a_functional.resize(2);
  out.a_functional << 0.0, T + regime.lambda * gamma_v * sig * lz;
  return out;
}

}  // namespace

PathBundle simulate_strip_walk(const CoefficientField& field,
                               const MembraneFamily& membranes,
                               const ScalingRegime& regime,
                               const SimConfig& cfg, RngLane& lane) {
  if (cfg.scheme != Scheme::StripWalk)
    raise(ErrorCode::ConfigError, "simulate_strip_walk needs scheme=stripwalk");
  const Eigen::Index n_mem = membranes.points.size();
  if (n_mem == 0)
    raise(ErrorCode::ConfigError, "strip walk needs at least one membrane");
  if (n_mem == 1)
    return exact_single_membrane(field, membranes, regime, cfg, lane);

  const int d = field.y_dim();
  const double T = cfg.grid[cfg.grid.size() - 1];
  const Eigen::VectorXd& pts = membranes.points;

  PathBundle out;
  const Eigen::Index g = cfg.grid.size();
  out.times = cfg.grid;
  out.x.resize(g);
  out.y.resize(g, d);
  out.local_time_total.resize(g);
  out.ltime_beta.resize(g);
  out.ltime_theta.resize(g, d);
  out.ltime_gamma.resize(g);
  out.a_functional.resize(g);

  // Event state. "prev" is the last recorded event, used to interpolate the
  // output grid rows that fall inside the current transition.
  double tau = 0.0;
  double x = cfg.initial_x;
  Eigen::VectorXd y = cfg.initial_y;
  WalkAccum acc;
  acc.l_theta = Eigen::VectorXd::Zero(d);

  Eigen::Index row = 0;
  auto record_upto = [&](double t_next, double x_prev, double x_next,
                         double tau_prev, const WalkAccum& prev,
                         const Eigen::VectorXd& y_prev) {
    // linear interpolation of grid rows in (tau_prev, t_next]
    while (row < g && cfg.grid[row] <= t_next + 1e-15) {
      double tg = cfg.grid[row];
      double w = t_next > tau_prev ? (tg - tau_prev) / (t_next - tau_prev) : 1.0;
      out.x[row] = x_prev + w * (x_next - x_prev);
      out.y.row(row) = (y_prev + w * (y - y_prev)).transpose();
      out.local_time_total[row] = prev.l_total + w * (acc.l_total - prev.l_total);
      out.ltime_beta[row] = prev.l_beta + w * (acc.l_beta - prev.l_beta);
      out.ltime_gamma[row] = prev.l_gamma + w * (acc.l_gamma - prev.l_gamma);
      out.ltime_theta.row(row) =
          (prev.l_theta + w * (acc.l_theta - prev.l_theta)).transpose();
      out.a_functional[row] = tg + prev.a_extra + w * (acc.a_extra - prev.a_extra);
      ++row;
    }
  };

  auto euler_leg = [&](double t_end, bool stop_on_membrane) -> bool {
    // Runs the mollified stepper from the current state; returns true if it
    // stopped on a membrane (within h of a hit).
    EulerMollifiedStepper stepper(field, membranes, regime, cfg.step);
    stepper.reset(tau, x, y);
    double l0_total = acc.l_total, l0_beta = acc.l_beta, l0_gamma = acc.l_gamma,
           a0_extra = acc.a_extra;
    Eigen::VectorXd l0_theta = acc.l_theta;
    const double h = cfg.step.euler_h;
    bool on_membrane = false;
    while (stepper.t() < t_end - 1e-15) {
      double prev_x = stepper.x();
      double prev_tau = stepper.t();
      WalkAccum prev = acc;
      Eigen::VectorXd y_prev = stepper.y();
      double dt = std::min(h, t_end - stepper.t());
      stepper.advance(dt, lane);
      x = stepper.x();
      y = stepper.y();
      tau = stepper.t();
      acc.l_total = l0_total + stepper.local_time_total();
      acc.l_beta = l0_beta + stepper.ltime_beta();
      acc.l_gamma = l0_gamma + stepper.ltime_gamma();
      acc.l_theta = l0_theta + stepper.ltime_theta();
      acc.a_extra = a0_extra + stepper.a_extra();
      record_upto(tau, prev_x, x, prev_tau, prev, y_prev);
      if (stop_on_membrane) {
        Eigen::Index k = membranes.nearest_index(x);
        if (std::abs(x - pts[k]) <= cfg.step.mollifier_rho ||
            (prev_x - pts[k]) * (x - pts[k]) <= 0.0) {
          x = pts[k];
          on_membrane = true;
          break;
        }
      }
      if (stepper.escaped()) out.escaped_window = true;
    }
    return on_membrane;
  };

  // Initial leg for a start off the membrane set.
  Eigen::Index k = membranes.nearest_index(x);
  if (x != pts[k]) {
    bool hit = euler_leg(T, true);
    if (!hit) {
      // horizon reached before any membrane visit
      record_upto(T, x, x, tau, acc, y);
      return out;
    }
    k = membranes.nearest_index(x);
  }

  Eigen::MatrixXd sigma_full;
  while (tau < T) {
    if (k == 0 || k == n_mem - 1) {
      // no surrounding strip: the path left the modeled window
      out.escaped_window = true;
      record_upto(T, x, x, tau, acc, y);
      return out;
    }
    const double a_k = pts[k];
    const double a_minus = a_k - pts[k - 1];
    const double a_plus = pts[k + 1] - a_k;

    sigma_full = field.sigma_at(tau, a_k, y);
    Eigen::MatrixXd big = sigma_full * sigma_full.transpose();
    const double sigma00 = big(0, 0);
    const double beta_v = field.beta()(tau, a_k, y);
    const double gamma_v = field.gamma()(tau, a_k, y);
    check_frozen(field, tau, a_k, y, sigma00, beta_v, gamma_v);

    const double skew = regime.delta * beta_v;
    if (std::abs(skew) >= 1.0)
      raise(ErrorCode::ValidationError, "delta*beta must be in (-1,1)");
    const double alpha = 0.5 * (1.0 + skew);
    const double p_up = alpha * a_minus / (alpha * a_minus + (1.0 - alpha) * a_plus);

    bool up = lane.next_uniform() < p_up;
    double d_tau;
    if (cfg.step.stripwalk_exact_sojourn) {
      double sq = std::sqrt(sigma00);
      d_tau = sample_bm_exit_time(a_minus / sq, a_plus / sq, lane.next_uniform());
    } else {
      d_tau = a_minus * a_plus / sigma00;
    }
    const double d_l = 2.0 * a_minus * a_plus / (a_minus + a_plus);

    if (tau + d_tau > T) break;  // finish with a terminal Euler leg

    double x_prev = x;
    double tau_prev = tau;
    WalkAccum prev = acc;
    Eigen::VectorXd y_prev = y;

    double dx = up ? a_plus : -a_minus;
    double e_dx = p_up * a_plus - (1.0 - p_up) * a_minus;

    // Y increment: sliding + drift + the exit-side conditional-mean shift
    // plus Schur-complement Gaussian noise.
    if (d > 0) {
      Eigen::VectorXd theta_v(d), b_y(d);
      for (int i = 0; i < d; ++i) {
        theta_v[i] = field.theta(i)(tau, a_k, y);
        b_y[i] = field.b(i + 1)(tau, a_k, y);
      }
      Eigen::VectorXd sig_y0 = big.block(1, 0, d, 1);
      Eigen::MatrixXd schur =
          big.block(1, 1, d, d) - sig_y0 * sig_y0.transpose() / sigma00;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(schur);
      Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
      Eigen::VectorXd z(d);
      for (int i = 0; i < d; ++i) z[i] = lane.next_normal();
      y += regime.delta * theta_v * d_l + b_y * d_tau +
           (sig_y0 / sigma00) * (dx - e_dx) +
           es.eigenvectors() * (ev.asDiagonal() * z) * std::sqrt(d_tau);
    }

    acc.l_total += d_l;
    acc.l_beta += beta_v * d_l;
    acc.l_gamma += gamma_v * d_l;
    for (int i = 0; i < d; ++i) acc.l_theta[i] += field.theta(i)(tau_prev, a_k, y_prev) * d_l;
    acc.a_extra += regime.lambda * gamma_v * d_l;
    acc.x_drift += field.b(0)(tau_prev, a_k, y_prev) * d_tau;

    tau += d_tau;
    k += up ? 1 : -1;
    x = pts[k] + acc.x_drift;

    record_upto(tau, x_prev, x, tau_prev, prev, y_prev);
  }

  // terminal Euler leg over [tau, T]
  if (tau < T) euler_leg(T, false);
  record_upto(T, x, x, tau, acc, y);
  return out;
}

}  // namespace memlab
