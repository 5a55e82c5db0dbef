#include "memlab/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "memlab/euler.hpp"
#include "memlab/parallel.hpp"
#include "memlab/strip_walk.hpp"

namespace memlab {

void ConvergenceTable::fit(double noise_floor) {
  std::sort(rows.begin(), rows.end(),
            [](const ConvergenceRow& a, const ConvergenceRow& b) {
              return a.epsilon > b.epsilon;
            });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const ConvergenceRow& r : rows) {
    if (r.ci_lo <= noise_floor) continue;  // indistinguishable from noise
    if (r.distance <= 0.0) continue;
    double lx = std::log(r.epsilon), ly = std::log(r.distance);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  fitted_rows = n;
  if (n >= 2) {
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    intercept = (sy - slope * sx) / n;
  } else {
    slope = 0.0;
    intercept = 0.0;
  }
}

namespace {

TerminalSamples gather(std::int64_t n_paths, int threads,
                       const std::function<double(std::uint64_t, bool&)>& one) {
  Eigen::VectorXd vals(n_paths);
  std::vector<char> escaped(static_cast<std::size_t>(n_paths), 0);
  parallel_for(static_cast<std::size_t>(n_paths), threads, [&](std::size_t i) {
    bool esc = false;
    vals[static_cast<Eigen::Index>(i)] = one(static_cast<std::uint64_t>(i), esc);
    escaped[i] = esc ? 1 : 0;
  });
  TerminalSamples out;
  out.n_requested = n_paths;
  std::int64_t kept = 0;
  for (std::int64_t i = 0; i < n_paths; ++i)
    if (!escaped[static_cast<std::size_t>(i)]) ++kept;
  out.x.resize(kept);
  Eigen::Index j = 0;
  for (std::int64_t i = 0; i < n_paths; ++i) {
    if (escaped[static_cast<std::size_t>(i)]) continue;
    out.x[j++] = vals[i];
  }
  out.n_escaped = n_paths - kept;
  return out;
}

}  // namespace

TerminalSamples collect_terminal_x(const CoefficientField& field,
                                   const MembraneFamily& membranes,
                                   const ScalingRegime& regime,
                                   const SimConfig& cfg, int threads) {
  return gather(cfg.n_paths, threads, [&](std::uint64_t idx, bool& escaped) {
    RngLane lane(cfg.master_seed, idx);
    PathBundle b = cfg.scheme == Scheme::EulerMollified
                       ? simulate_euler_mollified(field, membranes, regime, cfg, lane)
                       : simulate_strip_walk(field, membranes, regime, cfg, lane);
    escaped = b.escaped_window;
    return b.terminal_x();
  });
}

TerminalSamples collect_time_changed_terminal_x(const CoefficientField& field,
                                                const MembraneFamily& membranes,
                                                const ScalingRegime& regime,
                                                const SimConfig& cfg,
                                                double t_query, int threads) {
  if (cfg.scheme != Scheme::EulerMollified)
    raise(ErrorCode::ConfigError,
          "time-changed terminal sampling runs on the Euler scheme");
  // A_t >= t, so the horizon t_query always suffices for A to reach t_query.
  return gather(cfg.n_paths, threads, [&](std::uint64_t idx, bool& escaped) {
    RngLane lane(cfg.master_seed, idx);
    EulerMollifiedStepper stepper(field, membranes, regime, cfg.step);
    stepper.reset(0.0, cfg.initial_x, cfg.initial_y);
    const double h = cfg.step.euler_h;
    double prev_x = stepper.x();
    double prev_a = 0.0;
    for (;;) {
      prev_x = stepper.x();
      prev_a = stepper.t() + stepper.a_extra();
      stepper.advance(h, lane);
      double a = stepper.t() + stepper.a_extra();
      if (a >= t_query) {
        escaped = stepper.escaped();
        double w = a > prev_a ? (t_query - prev_a) / (a - prev_a) : 1.0;
        return prev_x + w * (stepper.x() - prev_x);
      }
    }
  });
}

Eigen::VectorXd collect_limit_terminal_x(const LimitSpec& spec,
                                         const SimConfig& cfg, int threads) {
  Eigen::VectorXd out(cfg.n_paths);
  parallel_for(static_cast<std::size_t>(cfg.n_paths), threads, [&](std::size_t i) {
    RngLane lane(cfg.master_seed, static_cast<std::uint64_t>(i));
    PathBundle b = spec.kind == LimitKind::StickySDE
                       ? solve_sticky_sde(spec, cfg, lane)
                       : solve_homogenized_sde(spec, cfg, lane);
    out[static_cast<Eigen::Index>(i)] = b.terminal_x();
  });
  return out;
}

Eigen::VectorXd collect_homogenized_time_changed_x(const LimitSpec& spec,
                                                   const SimConfig& cfg,
                                                   double t_query, int threads) {
  if (spec.q_limit.is_infinite())
    raise(ErrorCode::RegimeMismatch, "time-change composition needs q < inf");
  Eigen::VectorXd out(cfg.n_paths);
  parallel_for(static_cast<std::size_t>(cfg.n_paths), threads, [&](std::size_t i) {
    RngLane lane(cfg.master_seed, static_cast<std::uint64_t>(i));
    out[static_cast<Eigen::Index>(i)] =
        homogenized_time_changed_terminal_x(spec, cfg, t_query, lane);
  });
  return out;
}

NormalLaw analytic_limit_normal(const LimitSpec& spec, double x0, double T) {
  const CoefficientField& f = spec.field;
  auto require_const = [](const ScalarField& s, const char* name) {
    if (!s.is_constant())
      raise(ErrorCode::ConfigError,
            std::string("analytic limit law needs constant coefficient ") + name);
    return s.constant_value();
  };
  if (!f.sigma_is_constant())
    raise(ErrorCode::ConfigError, "analytic limit law needs constant sigma");
  if (!spec.density.d.is_constant())
    raise(ErrorCode::ConfigError, "analytic limit law needs constant density");
  Eigen::VectorXd y0(f.y_dim());
  y0.setZero();
  double sigma00 = f.sigma00(0.0, x0, y0);
  double dens = spec.density(x0);
  double b0 = require_const(f.b(0), "b0");
  double beta_v = require_const(f.beta(), "beta");
  double p = spec.p_limit.finite_value();
  double drift = b0 + p * beta_v * sigma00 / dens;
  double var = sigma00;
  if (spec.kind == LimitKind::StickySDE) {
    double gamma_v = require_const(f.gamma(), "gamma");
    double q = spec.q_limit.finite_value();
    double slow = 1.0 + q * gamma_v * sigma00 / dens;
    drift /= slow;
    var /= slow;
  }
  NormalLaw law;
  law.mean = x0 + drift * T;
  law.sd = std::sqrt(var * T);
  return law;
}

LocalTimeCheckResult local_time_functional_check(
    const CoefficientField& field, const MembraneFamily& membranes,
    const MembraneDensity& density, const ScalingRegime& regime,
    const SimConfig& cfg, int threads) {
  const Eigen::Index g = cfg.grid.size();
  if (g < 3)
    raise(ErrorCode::ConfigError,
          "local-time functional check needs a grid fine enough for quadrature");
  Eigen::VectorXd sups(cfg.n_paths);
  std::vector<char> escaped(static_cast<std::size_t>(cfg.n_paths), 0);
  parallel_for(static_cast<std::size_t>(cfg.n_paths), threads, [&](std::size_t i) {
    RngLane lane(cfg.master_seed, static_cast<std::uint64_t>(i));
    PathBundle b = simulate_euler_mollified(field, membranes, regime, cfg, lane);
    escaped[i] = b.escaped_window ? 1 : 0;
    if (b.local_time_total.size() == 0)
      raise(ErrorCode::MissingLocalTimes, "bundle has no local-time column");
    // trapezoid integral of Sigma00/d along the path
    double integral = 0.0;
    double sup = 0.0;
    double prev_rate = field.sigma00(b.times[0], b.x[0], b.y.row(0).transpose()) /
                       density(b.x[0]);
    for (Eigen::Index j = 1; j < g; ++j) {
      double rate = field.sigma00(b.times[j], b.x[j], b.y.row(j).transpose()) /
                    density(b.x[j]);
      integral += 0.5 * (rate + prev_rate) * (b.times[j] - b.times[j - 1]);
      prev_rate = rate;
      double disc = std::abs(regime.epsilon * b.local_time_total[j] - integral);
      if (disc > sup) sup = disc;
    }
    sups[static_cast<Eigen::Index>(i)] = sup;
  });

  std::vector<double> kept;
  kept.reserve(static_cast<std::size_t>(cfg.n_paths));
  std::int64_t n_esc = 0;
  for (std::int64_t i = 0; i < cfg.n_paths; ++i) {
    if (escaped[static_cast<std::size_t>(i)]) {
      ++n_esc;
      continue;
    }
    kept.push_back(sups[i]);
  }
  if (kept.empty()) raise(ErrorCode::ValidationError, "all paths escaped the window");
  std::sort(kept.begin(), kept.end());
  LocalTimeCheckResult res;
  res.n_paths = static_cast<std::int64_t>(kept.size());
  res.n_escaped = n_esc;
  double s = 0.0;
  for (double v : kept) s += v;
  res.mean_sup = s / static_cast<double>(kept.size());
  res.p95_sup = kept[static_cast<std::size_t>(0.95 * (kept.size() - 1))];
  return res;
}

}  // namespace memlab
