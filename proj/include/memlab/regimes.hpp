#ifndef MEMLAB_REGIMES_HPP
#define MEMLAB_REGIMES_HPP

#include <cmath>
#include <limits>
#include <string>

#include "memlab/errors.hpp"

namespace memlab {

// Small parameters (epsilon, delta, lambda). The ratios p = delta/eps,
// q = lambda/eps, r = lambda/delta are always recomputed from the stored
// triple, never cached.
struct ScalingRegime {
  double epsilon = 0.1;
  double delta = 0.1;
  double lambda = 0.0;

  double p_ratio() const { return delta / epsilon; }
  double q_ratio() const { return lambda / epsilon; }
  double r_ratio() const { return lambda / delta; }

  void validate(double beta_norm) const {
    auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!in_unit(epsilon)) raise(ErrorCode::ValidationError, "epsilon not in (0,1]");
    if (!in_unit(delta)) raise(ErrorCode::ValidationError, "delta not in (0,1]");
    if (lambda < 0.0 || lambda > 1.0)
      raise(ErrorCode::ValidationError, "lambda not in [0,1]");
    if (delta * beta_norm >= 1.0)
      raise(ErrorCode::ValidationError,
            "delta * |beta| = " + std::to_string(delta * beta_norm) +
                " must be < 1");
  }
};

// Limit ratio that may be infinite. Arithmetic on an infinite value is a
// logic error; regime dispatch must check is_infinite() first.
class ExtendedReal {
 public:
  ExtendedReal() = default;
  explicit ExtendedReal(double v) : value_(v) {
    if (v < 0.0) raise(ErrorCode::ConfigError, "limit ratio must be >= 0");
  }
  static ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }
  static ExtendedReal parse(const std::string& s) {
    if (s == "inf" || s == "infinity") return infinity();
    return ExtendedReal(std::stod(s));
  }

  bool is_infinite() const { return infinite_; }
  double finite_value() const {
    if (infinite_)
      raise(ErrorCode::RegimeMismatch, "arithmetic on an infinite limit ratio");
    return value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace memlab

#endif  // MEMLAB_REGIMES_HPP
