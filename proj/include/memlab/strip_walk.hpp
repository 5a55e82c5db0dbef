#ifndef MEMLAB_STRIP_WALK_HPP
#define MEMLAB_STRIP_WALK_HPP

#include "memlab/euler.hpp"

namespace memlab {

// Event-driven sampler of the membrane-visit chain. At a visit to membrane
// a_k with frozen coefficients, the exit side of the surrounding strip
// (a_{k-1}, a_{k+1}) follows the skew exit law with alpha = (1+delta*beta)/2;
// sojourn time and local time default to their conditional means
// a_- a_+ / Sigma00 and 2 a_- a_+ / (a_- + a_+). Sums of the deviations from
// these means vanish at the homogenization scale, which is what makes
// mean-substitution admissible for the limit laws verified here.
//
// A start off the membrane set runs a mollified Euler leg to the first
// visit; the leftover interval [tau_last, T] runs a terminal Euler leg so
// the reported X_T is not lattice-valued.
//
// A family with a single membrane has no surrounding strip; in that case the
// sampler requires constant sigma, b == 0, y_dim == 0 and a start on the
// membrane, and draws (|X_T|, L_T) exactly from the reflected-Brownian joint
// law with an alpha-weighted sign flip (exact skew sampling, no bias).
PathBundle simulate_strip_walk(const CoefficientField& field,
                               const MembraneFamily& membranes,
                               const ScalingRegime& regime,
                               const SimConfig& cfg, RngLane& lane);

// Inverse-CDF sample of the exit time of a standard Brownian motion from
// (-a, b) started at 0, evaluated at uniform u in (0,1). Spectral series,
// terms truncated below 1e-12.
double sample_bm_exit_time(double a, double b, double u);

// Survival function P(tau > t) of the same exit time.
double bm_exit_time_survival(double a, double b, double t);

}  // namespace memlab

#endif  // MEMLAB_STRIP_WALK_HPP
