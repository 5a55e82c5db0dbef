#ifndef MEMLAB_FIELDS_HPP
#define MEMLAB_FIELDS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "memlab/errors.hpp"

namespace memlab {

// One scalar coefficient f(t, x, y) built from a named preset. Presets are
// deliberately simple closed forms so that configs stay declarative:
//   const:c
//   affine:c0,ct,cx[,cy1,...]
//   sin:c0,amp,wt,wx[,wy1,...]        c0 + amp*sin(wt*t + wx*x + <wy,y>)
//   rat:c0,amp                        c0 + amp*x^2/(1+x^2)
//   tab:x0,dx,v0,v1,...               uniform grid in x, linear interpolation
//   tab2:x0,dx,nx,y0,dy,ny,v(0,0),... bilinear in (x, y^1), row-major in x
class ScalarField {
 public:
  enum class Kind { Constant, Affine, Sinusoidal, Rational, Table1D, Table2D };

  ScalarField() = default;
  static ScalarField constant(double c) {
    ScalarField f;
    f.kind_ = Kind::Constant;
    f.c0_ = c;
    return f;
  }
  static ScalarField affine(double c0, double ct, double cx,
                            Eigen::VectorXd cy = {}) {
    ScalarField f;
    f.kind_ = Kind::Affine;
    f.c0_ = c0;
    f.ct_ = ct;
    f.cx_ = cx;
    f.cy_ = std::move(cy);
    return f;
  }
  static ScalarField sinusoidal(double c0, double amp, double wt, double wx,
                                Eigen::VectorXd wy = {}) {
    ScalarField f;
    f.kind_ = Kind::Sinusoidal;
    f.c0_ = c0;
    f.amp_ = amp;
    f.ct_ = wt;
    f.cx_ = wx;
    f.cy_ = std::move(wy);
    return f;
  }
  static ScalarField rational(double c0, double amp) {
    ScalarField f;
    f.kind_ = Kind::Rational;
    f.c0_ = c0;
    f.amp_ = amp;
    return f;
  }
  static ScalarField table1d(double x0, double dx, Eigen::VectorXd values);
  static ScalarField table2d(double x0, double dx, int nx, double y0, double dy,
                             int ny, Eigen::MatrixXd values);

  // Parses the "name:params" mini-syntax used in config files.
  static ScalarField parse(const std::string& spec);

  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  double constant_value() const { return c0_; }

  double operator()(double t, double x, const Eigen::VectorXd& y) const {
    return eval(t, x, y.data(), static_cast<int>(y.size()));
  }

  double eval(double t, double x, const double* y, int d) const {
    switch (kind_) {
      case Kind::Constant:
        return c0_;
      case Kind::Affine: {
        double v = c0_ + ct_ * t + cx_ * x;
        int n = static_cast<int>(cy_.size());
        for (int i = 0; i < n && i < d; ++i) v += cy_[i] * y[i];
        return v;
      }
      case Kind::Sinusoidal: {
        double ph = ct_ * t + cx_ * x;
        int n = static_cast<int>(cy_.size());
        for (int i = 0; i < n && i < d; ++i) ph += cy_[i] * y[i];
        return c0_ + amp_ * std::sin(ph);
      }
      case Kind::Rational:
        return c0_ + amp_ * x * x / (1.0 + x * x);
      case Kind::Table1D:
        return interp1(x);
      case Kind::Table2D:
        return interp2(x, d > 0 ? y[0] : 0.0);
    }
    return c0_;
  }

  std::string describe() const;

 private:
  double interp1(double x) const;
  double interp2(double x, double y1) const;

  Kind kind_ = Kind::Constant;
  double c0_ = 0.0;
  double ct_ = 0.0;
  double cx_ = 0.0;
  double amp_ = 0.0;
  Eigen::VectorXd cy_;
  Eigen::VectorXd table_;
  Eigen::MatrixXd table2_;
  double x0_ = 0.0, dx_ = 1.0;
  double y0_ = 0.0, dy_ = 1.0;
};

// Declared sup-norms and the ellipticity floor. The standing assumptions hold
// globally in the model; the artifact can only spot-check them on a sampling
// box, so the bounds are inputs, not derived quantities.
struct CoefficientBounds {
  double sigma_norm = 1.0;
  double b_norm = 0.0;
  double beta_norm = 0.0;
  double theta_norm = 0.0;
  double gamma_norm = 0.0;
  double sigma00_floor = 1.0;  // c_Sigma > 0
};

// The full coefficient set (sigma, b, beta, theta, gamma) of the interface
// SDE. Row 0 of sigma and entry 0 of b drive the transversal coordinate x;
// rows 1..d drive y. beta/theta/gamma are evaluated on membranes.
class CoefficientField {
 public:
  CoefficientField() = default;
  CoefficientField(int y_dim, int noise_dim)
      : y_dim_(y_dim),
        noise_dim_(noise_dim),
        sigma_(static_cast<std::size_t>((y_dim + 1) * noise_dim)),
        b_(static_cast<std::size_t>(y_dim + 1)),
        theta_(static_cast<std::size_t>(y_dim)) {
    if (y_dim < 0) raise(ErrorCode::ConfigError, "y_dim must be >= 0");
    if (noise_dim < 1) raise(ErrorCode::ConfigError, "noise_dim must be >= 1");
  }

  int y_dim() const { return y_dim_; }
  int noise_dim() const { return noise_dim_; }

  ScalarField& sigma(int i, int l) { return sigma_[idx(i, l)]; }
  const ScalarField& sigma(int i, int l) const { return sigma_[idx(i, l)]; }
  ScalarField& b(int i) { return b_.at(static_cast<std::size_t>(i)); }
  const ScalarField& b(int i) const { return b_.at(static_cast<std::size_t>(i)); }
  ScalarField& beta() { return beta_; }
  const ScalarField& beta() const { return beta_; }
  ScalarField& theta(int i) { return theta_.at(static_cast<std::size_t>(i)); }
  const ScalarField& theta(int i) const {
    return theta_.at(static_cast<std::size_t>(i));
  }
  ScalarField& gamma() { return gamma_; }
  const ScalarField& gamma() const { return gamma_; }

  CoefficientBounds& bounds() { return bounds_; }
  const CoefficientBounds& bounds() const { return bounds_; }

  bool sigma_is_constant() const {
    for (const auto& f : sigma_)
      if (!f.is_constant()) return false;
    return true;
  }
  bool b_is_zero() const {
    for (const auto& f : b_)
      if (!f.is_constant() || f.constant_value() != 0.0) return false;
    return true;
  }

  // sigma as a (d+1) x m matrix at (t, x, y).
  Eigen::MatrixXd sigma_at(double t, double x, const Eigen::VectorXd& y) const {
    Eigen::MatrixXd s(y_dim_ + 1, noise_dim_);
    for (int i = 0; i <= y_dim_; ++i)
      for (int l = 0; l < noise_dim_; ++l)
        s(i, l) = sigma_[idx(i, l)].eval(t, x, y.data(), y_dim_);
    return s;
  }

  Eigen::VectorXd b_at(double t, double x, const Eigen::VectorXd& y) const {
    Eigen::VectorXd v(y_dim_ + 1);
    for (int i = 0; i <= y_dim_; ++i)
      v[i] = b_[static_cast<std::size_t>(i)].eval(t, x, y.data(), y_dim_);
    return v;
  }

  double sigma00(double t, double x, const Eigen::VectorXd& y) const {
    return sigma00_raw(t, x, y.data());
  }

  double sigma00_raw(double t, double x, const double* y) const {
    double s = 0.0;
    for (int l = 0; l < noise_dim_; ++l) {
      double v = sigma_[idx(0, l)].eval(t, x, y, y_dim_);
      s += v * v;
    }
    return s;
  }

 private:
  std::size_t idx(int i, int l) const {
    return static_cast<std::size_t>(i * noise_dim_ + l);
  }

  int y_dim_ = 0;
  int noise_dim_ = 1;
  std::vector<ScalarField> sigma_;
  std::vector<ScalarField> b_;
  ScalarField beta_;
  std::vector<ScalarField> theta_;
  ScalarField gamma_;
  CoefficientBounds bounds_;
};

// Sigma = sigma * sigma^T, validated against the ellipticity floor.
Eigen::MatrixXd sigma_matrix(const CoefficientField& field, double t, double x,
                             const Eigen::VectorXd& y);

// Membrane spacing profile d(x) with its declared bounds.
struct MembraneDensity {
  ScalarField d;
  double d_min = 1.0;
  double d_max = 1.0;
  double lipschitz_const = 0.0;

  double operator()(double x) const { return d.eval(0.0, x, nullptr, 0); }
};

}  // namespace memlab

#endif  // MEMLAB_FIELDS_HPP
