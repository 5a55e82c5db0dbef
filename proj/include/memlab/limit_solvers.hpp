#ifndef MEMLAB_LIMIT_SOLVERS_HPP
#define MEMLAB_LIMIT_SOLVERS_HPP

#include "memlab/fields.hpp"
#include "memlab/path_bundle.hpp"
#include "memlab/regimes.hpp"
#include "memlab/rng.hpp"
#include "memlab/sim_config.hpp"

namespace memlab {

enum class LimitKind {
  HomogenizedSDE,   // membranes merged into a drift
  StickySDE,        // time-changed (slowed-down) diffusion
  LimitAFunctional, // A alone, via the homogenized path
  DegenerateODE,    // deterministic limit on the t*eps/delta clock
  StickyODE,        // time-changed deterministic limit
};

// Limit-system description: coefficients, density profile and the limiting
// scaling ratios p = lim delta/eps, q = lim lambda/eps, r = lim lambda/delta.
struct LimitSpec {
  CoefficientField field;
  MembraneDensity density;
  ExtendedReal p_limit;
  ExtendedReal q_limit;
  ExtendedReal r_limit;
  LimitKind kind = LimitKind::HomogenizedSDE;

  void validate() const {
    switch (kind) {
      case LimitKind::HomogenizedSDE:
      case LimitKind::LimitAFunctional:
        if (p_limit.is_infinite())
          raise(ErrorCode::RegimeMismatch, "homogenized SDE needs p < inf");
        break;
      case LimitKind::StickySDE:
        if (p_limit.is_infinite() || q_limit.is_infinite())
          raise(ErrorCode::RegimeMismatch, "sticky SDE needs p, q < inf");
        break;
      case LimitKind::DegenerateODE:
        break;
      case LimitKind::StickyODE:
        if (r_limit.is_infinite() || r_limit.finite_value() <= 0.0)
          raise(ErrorCode::RegimeMismatch, "sticky ODE needs r in (0, inf)");
        break;
    }
  }
};

// Euler-Maruyama path of the homogenized SDE: drift gains p*beta*Sigma00/d
// (p*theta^i*Sigma00/d for y). When q < inf the limiting additive functional
// A_t = int (1 + q*gamma*Sigma00/d) ds is accumulated alongside.
PathBundle solve_homogenized_sde(const LimitSpec& spec, const SimConfig& cfg,
                                 RngLane& lane);

// Euler-Maruyama path of the time-changed limit: diffusion divided by
// sqrt(1 + q*gamma*Sigma00/d), drift divided by (1 + q*gamma*Sigma00/d).
PathBundle solve_sticky_sde(const LimitSpec& spec, const SimConfig& cfg,
                            RngLane& lane);

// X(A^{-1}(t_query)) for one homogenized path, with the crossing of A located
// inside the Euler loop (within-step interpolation). Realizes the time-change
// identity without output-grid resolution loss.
double homogenized_time_changed_terminal_x(const LimitSpec& spec,
                                           const SimConfig& cfg,
                                           double t_query, RngLane& lane);

struct OdePath {
  Eigen::VectorXd times;
  Eigen::VectorXd x;
  Eigen::MatrixXd y;
};

// Classical RK4 for the degenerate deterministic limit
// dX = beta(0,X,Y) Sigma00(0,X,Y)/d(X) dt (theta^i for Y).
OdePath solve_degenerate_ode(const LimitSpec& spec, double x0,
                             const Eigen::VectorXd& y0, double T, double step);

// RK4 for the time-changed degenerate limit dX = beta/(r*gamma) dt.
OdePath solve_sticky_ode(const LimitSpec& spec, double x0,
                         const Eigen::VectorXd& y0, double T, double step);

}  // namespace memlab

#endif  // MEMLAB_LIMIT_SOLVERS_HPP
