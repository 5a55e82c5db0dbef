#ifndef MEMLAB_VALIDATE_HPP
#define MEMLAB_VALIDATE_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "memlab/fields.hpp"
#include "memlab/membranes.hpp"
#include "memlab/regimes.hpp"

namespace memlab {

// Sampling box over which the standing assumptions are spot-checked.
struct ValidationBox {
  double t_hi = 1.0;
  double x_lo = -2.0;
  double x_hi = 2.0;
  double y_lo = -2.0;
  double y_hi = 2.0;
  int n_samples = 10000;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
  double worst_sigma00 = 0.0;        // smallest sampled Sigma00
  double spacing_discrepancy = 0.0;  // sup |spacing/eps - d(a_k)|
};

// Quasi-random spot check of boundedness, gamma >= 0 and the Sigma00 floor
// over the box. Throws ValidationError with the first violated invariant
// unless collect_only is set.
ValidationReport validate_field(const CoefficientField& field,
                                const ValidationBox& box,
                                bool collect_only = false);

// Checks declared density bounds and the sampled Lipschitz constant.
ValidationReport validate_density(const MembraneDensity& density,
                                  const ValidationBox& box,
                                  bool collect_only = false);

// Family invariants: monotone points, spacing ratio within declared bounds.
ValidationReport validate_family(const MembraneFamily& family,
                                 const MembraneDensity& density,
                                 bool collect_only = false);

// Half-width w such that a horizon-T path started in [x_lo, x_hi] leaves
// [x_lo - w, x_hi + w] with probability below ~1e-6 under a reflection bound.
double escape_window_padding(double sigma00_norm, double drift_norm, double T);

// Halton sequence point (element `index` in the given base).
double halton(std::uint64_t index, std::uint32_t base);

}  // namespace memlab

#endif  // MEMLAB_VALIDATE_HPP
