#ifndef MEMLAB_MEMBRANES_HPP
#define MEMLAB_MEMBRANES_HPP

#include <Eigen/Dense>

#include "memlab/fields.hpp"

namespace memlab {

// Finite window of interface positions a_k, k in [window_lo, window_hi].
// Positions are strictly increasing with spacing of order epsilon.
struct MembraneFamily {
  double epsilon = 0.1;
  Eigen::VectorXd points;
  int window_lo = 0;
  int window_hi = 0;

  Eigen::Index size() const { return points.size(); }
  double spacing_over_eps_min() const;
  double spacing_over_eps_max() const;

  // Index of the membrane nearest to x (points must be nonempty).
  Eigen::Index nearest_index(double x) const;
};

// Positions a_k = integral of d over [0, eps*k] for every k whose position
// lands in [x_lo, x_hi]. Quadrature is adaptive Simpson with Richardson
// correction; per-point error <= 1e-10 * max(1, |eps*k|).
MembraneFamily build_membranes(const MembraneDensity& density, double epsilon,
                               double x_lo, double x_hi);

// A single explicitly placed interface (used by single-membrane studies).
MembraneFamily single_membrane(double position, double epsilon);

// Largest |spacing/eps - d(a_k)| over the family: the discrepancy in the
// membrane-spacing assumption, reported by validation.
double spacing_density_discrepancy(const MembraneFamily& family,
                                   const MembraneDensity& density);

// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate_adaptive(const ScalarField& f, double a, double b, double tol);

}  // namespace memlab

#endif  // MEMLAB_MEMBRANES_HPP
