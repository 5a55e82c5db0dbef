#include "memlab/membranes.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

namespace memlab {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const ScalarField& f, double a, double b, double fa,
                     double fm, double fb, double whole, double tol,
                     int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f.eval(0.0, lm, nullptr, 0);
  double frm = f.eval(0.0, rm, nullptr, 0);
  double left = simpson(a, m, fa, flm, fm);
  double right = simpson(m, b, fm, frm, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;  // Richardson correction
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const ScalarField& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  double fa = f.eval(0.0, a, nullptr, 0);
  double fb = f.eval(0.0, b, nullptr, 0);
  double m = 0.5 * (a + b);
  double fm = f.eval(0.0, m, nullptr, 0);
  double whole = simpson(a, b, fa, fm, fb);
  return adaptive_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

MembraneFamily build_membranes(const MembraneDensity& density, double epsilon,
                               double x_lo, double x_hi) {
  if (density.d_min <= 0.0)
    raise(ErrorCode::NonPositiveDensity,
          "declared d_min = " + std::to_string(density.d_min));
  if (epsilon <= 0.0 || epsilon > 1.0)
    raise(ErrorCode::ConfigError, "epsilon must lie in (0, 1]");
  if (!(x_lo < 0.0 && 0.0 < x_hi))
    raise(ErrorCode::ConfigError, "membrane window must straddle 0");

  // Walk outward from a_0 = 0, accumulating one segment integral per index.
  // Per-segment tolerance keeps the accumulated error within the contract.
  const double seg_tol = 1e-14;
  std::deque<double> pts{0.0};
  int k_lo = 0, k_hi = 0;
  double acc = 0.0;
  for (int k = 0;; ++k) {
    double seg = integrate_adaptive(density.d, epsilon * k, epsilon * (k + 1), seg_tol);
    if (seg <= 0.0) raise(ErrorCode::NonPositiveDensity, "density integrates to <= 0");
    acc += seg;
    if (acc > x_hi) break;
    pts.push_back(acc);
    k_hi = k + 1;
  }
  acc = 0.0;
  for (int k = 0;; --k) {
    double seg = integrate_adaptive(density.d, epsilon * (k - 1), epsilon * k, seg_tol);
    if (seg <= 0.0) raise(ErrorCode::NonPositiveDensity, "density integrates to <= 0");
    acc -= seg;
    if (acc < x_lo) break;
    pts.push_front(acc);
    k_lo = k - 1;
  }

  if (pts.size() < 3)
    raise(ErrorCode::WindowTooSmall,
          "window [" + std::to_string(x_lo) + ", " + std::to_string(x_hi) +
              "] holds only " + std::to_string(pts.size()) + " membranes");

  MembraneFamily fam;
  fam.epsilon = epsilon;
  fam.window_lo = k_lo;
  fam.window_hi = k_hi;
  fam.points = Eigen::Map<Eigen::VectorXd>(std::vector<double>(pts.begin(), pts.end()).data(),
                                           static_cast<Eigen::Index>(pts.size()));
  for (Eigen::Index i = 1; i < fam.points.size(); ++i)
    if (!(fam.points[i] > fam.points[i - 1]))
      raise(ErrorCode::ValidationError, "membrane points not strictly increasing");
  return fam;
}

MembraneFamily single_membrane(double position, double epsilon) {
  MembraneFamily fam;
  fam.epsilon = epsilon;
  fam.points = Eigen::VectorXd::Constant(1, position);
  fam.window_lo = 0;
  fam.window_hi = 0;
  return fam;
}

double MembraneFamily::spacing_over_eps_min() const {
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < points.size(); ++i)
    m = std::min(m, (points[i] - points[i - 1]) / epsilon);
  return m;
}

double MembraneFamily::spacing_over_eps_max() const {
  double m = 0.0;
  for (Eigen::Index i = 1; i < points.size(); ++i)
    m = std::max(m, (points[i] - points[i - 1]) / epsilon);
  return m;
}

Eigen::Index MembraneFamily::nearest_index(double x) const {
  const double* begin = points.data();
  const double* end = begin + points.size();
  const double* it = std::lower_bound(begin, end, x);
  if (it == begin) return 0;
  if (it == end) return points.size() - 1;
  Eigen::Index i = it - begin;
  return (x - points[i - 1] <= points[i] - x) ? i - 1 : i;
}

double spacing_density_discrepancy(const MembraneFamily& family,
                                   const MembraneDensity& density) {
  double worst = 0.0;
  for (Eigen::Index i = 1; i < family.points.size(); ++i) {
    double ratio = (family.points[i] - family.points[i - 1]) / family.epsilon;
    worst = std::max(worst, std::abs(ratio - density(family.points[i - 1])));
  }
  return worst;
}

}  // namespace memlab
