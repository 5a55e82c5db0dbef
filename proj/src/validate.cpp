#include "memlab/validate.hpp"

#include <cmath>
#include <sstream>

namespace memlab {

double halton(std::uint64_t index, std::uint32_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

namespace {

constexpr std::uint32_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

void record(ValidationReport& rep, bool collect_only, const std::string& msg) {
  rep.ok = false;
  rep.violations.push_back(msg);
  if (!collect_only) raise(ErrorCode::ValidationError, msg);
}

}  // namespace

ValidationReport validate_field(const CoefficientField& field,
                                const ValidationBox& box, bool collect_only) {
  ValidationReport rep;
  rep.worst_sigma00 = std::numeric_limits<double>::infinity();
  const int d = field.y_dim();
  const int m = field.noise_dim();
  const CoefficientBounds& bd = field.bounds();
  Eigen::VectorXd y(d);
  const double tol = 1e-12;

  for (int s = 0; s < box.n_samples; ++s) {
    std::uint64_t idx = static_cast<std::uint64_t>(s) + 1;
    double t = box.t_hi * halton(idx, kBases[0]);
    double x = box.x_lo + (box.x_hi - box.x_lo) * halton(idx, kBases[1]);
    for (int i = 0; i < d; ++i)
      y[i] = box.y_lo + (box.y_hi - box.y_lo) * halton(idx, kBases[2 + (i % 8)]);

    double s00 = 0.0;
    for (int i = 0; i <= d; ++i)
      for (int l = 0; l < m; ++l) {
        double v = field.sigma(i, l).eval(t, x, y.data(), d);
        if (std::abs(v) > bd.sigma_norm + tol) {
          std::ostringstream os;
          os << "coefficients.sigma[" << i << "][" << l << "] = " << v
             << " exceeds declared bound " << bd.sigma_norm;
          record(rep, collect_only, os.str());
        }
        if (i == 0) s00 += v * v;
      }
    rep.worst_sigma00 = std::min(rep.worst_sigma00, s00);
    if (s00 < bd.sigma00_floor - tol) {
      std::ostringstream os;
      os << "Sigma00 = " << s00 << " below declared floor " << bd.sigma00_floor
         << " at (t,x) = (" << t << "," << x << ")";
      record(rep, collect_only, os.str());
    }
    for (int i = 0; i <= d; ++i) {
      double v = field.b(i).eval(t, x, y.data(), d);
      if (std::abs(v) > bd.b_norm + tol)
        record(rep, collect_only, "coefficients.b exceeds declared bound");
    }
    double bv = field.beta().eval(t, x, y.data(), d);
    if (std::abs(bv) > bd.beta_norm + tol)
      record(rep, collect_only, "coefficients.beta exceeds declared bound");
    for (int i = 0; i < d; ++i) {
      double v = field.theta(i).eval(t, x, y.data(), d);
      if (std::abs(v) > bd.theta_norm + tol)
        record(rep, collect_only, "coefficients.theta exceeds declared bound");
    }
    double gv = field.gamma().eval(t, x, y.data(), d);
    if (gv < -tol)
      record(rep, collect_only, "coefficients.gamma is negative at a sampled point");
    if (std::abs(gv) > bd.gamma_norm + tol)
      record(rep, collect_only, "coefficients.gamma exceeds declared bound");
  }
  return rep;
}

ValidationReport validate_density(const MembraneDensity& density,
                                  const ValidationBox& box, bool collect_only) {
  ValidationReport rep;
  if (density.d_min <= 0.0)
    record(rep, collect_only, "membranes.d_min must be > 0");
  const double tol = 1e-12;
  double prev_x = box.x_lo;
  double prev_v = density(prev_x);
  for (int s = 0; s < box.n_samples; ++s) {
    double x = box.x_lo + (box.x_hi - box.x_lo) * halton(static_cast<std::uint64_t>(s) + 1, 2);
    double v = density(x);
    if (v < density.d_min - tol || v > density.d_max + tol) {
      std::ostringstream os;
      os << "membranes.d = " << v << " at x = " << x << " outside declared ["
         << density.d_min << ", " << density.d_max << "]";
      record(rep, collect_only, os.str());
    }
    if (std::abs(x - prev_x) > 1e-9 &&
        std::abs(v - prev_v) >
            density.lipschitz_const * std::abs(x - prev_x) + tol)
      record(rep, collect_only,
             "membranes.d violates the declared Lipschitz constant on a sampled pair");
    prev_x = x;
    prev_v = v;
  }
  return rep;
}

ValidationReport validate_family(const MembraneFamily& family,
                                 const MembraneDensity& density,
                                 bool collect_only) {
  ValidationReport rep;
  for (Eigen::Index i = 1; i < family.points.size(); ++i)
    if (!(family.points[i] > family.points[i - 1]))
      record(rep, collect_only, "membrane points not strictly increasing");
  if (family.points.size() >= 2) {
    const double tol = 1e-8;
    double lo = family.spacing_over_eps_min();
    double hi = family.spacing_over_eps_max();
    if (lo < density.d_min - tol || hi > density.d_max + tol) {
      std::ostringstream os;
      os << "membrane spacing/eps in [" << lo << ", " << hi
         << "] outside declared density range [" << density.d_min << ", "
         << density.d_max << "]";
      record(rep, collect_only, os.str());
    }
    rep.spacing_discrepancy = spacing_density_discrepancy(family, density);
  }
  return rep;
}

double escape_window_padding(double sigma00_norm, double drift_norm, double T) {
  // P(sup |W| > z sqrt(T)) <= 4 Phibar(z); z = 5.1 gives ~7e-7.
  return 5.1 * std::sqrt(sigma00_norm * T) + drift_norm * T;
}

}  // namespace memlab
