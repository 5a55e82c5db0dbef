#include "memlab/fields.hpp"

#include <cmath>
#include <sstream>

namespace memlab {

namespace {

std::vector<double> parse_number_list(const std::string& s,
                                      const std::string& context) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      double v = std::stod(item, &pos);
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size())
        raise(ErrorCode::ConfigError, "bad number '" + item + "' in " + context);
      out.push_back(v);
    } catch (const std::invalid_argument&) {
      raise(ErrorCode::ConfigError, "bad number '" + item + "' in " + context);
    }
  }
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v, std::size_t from) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size() - from));
  for (std::size_t i = from; i < v.size(); ++i)
    out[static_cast<Eigen::Index>(i - from)] = v[i];
  return out;
}

}  // namespace

ScalarField ScalarField::table1d(double x0, double dx, Eigen::VectorXd values) {
  if (dx <= 0.0) raise(ErrorCode::ConfigError, "table1d needs dx > 0");
  if (values.size() < 2) raise(ErrorCode::ConfigError, "table1d needs >= 2 values");
  ScalarField f;
  f.kind_ = Kind::Table1D;
  f.x0_ = x0;
  f.dx_ = dx;
  f.table_ = std::move(values);
  return f;
}

ScalarField ScalarField::table2d(double x0, double dx, int nx, double y0,
                                 double dy, int ny, Eigen::MatrixXd values) {
  if (dx <= 0.0 || dy <= 0.0) raise(ErrorCode::ConfigError, "table2d needs positive steps");
  if (nx < 2 || ny < 2) raise(ErrorCode::ConfigError, "table2d needs >= 2x2 values");
  if (values.rows() != nx || values.cols() != ny)
    raise(ErrorCode::ConfigError, "table2d value count mismatch");
  ScalarField f;
  f.kind_ = Kind::Table2D;
  f.x0_ = x0;
  f.dx_ = dx;
  f.y0_ = y0;
  f.dy_ = dy;
  f.table2_ = std::move(values);
  return f;
}

double ScalarField::interp1(double x) const {
  const Eigen::Index n = table_.size();
  double u = (x - x0_) / dx_;
  if (u <= 0.0) return table_[0];
  if (u >= static_cast<double>(n - 1)) return table_[n - 1];
  Eigen::Index i = static_cast<Eigen::Index>(u);
  double w = u - static_cast<double>(i);
  return table_[i] * (1.0 - w) + table_[i + 1] * w;
}

double ScalarField::interp2(double x, double y1) const {
  const Eigen::Index nx = table2_.rows(), ny = table2_.cols();
  double u = (x - x0_) / dx_;
  double v = (y1 - y0_) / dy_;
  u = u <= 0.0 ? 0.0 : (u >= static_cast<double>(nx - 1) ? static_cast<double>(nx - 1) : u);
  v = v <= 0.0 ? 0.0 : (v >= static_cast<double>(ny - 1) ? static_cast<double>(ny - 1) : v);
  Eigen::Index i = static_cast<Eigen::Index>(u);
  Eigen::Index j = static_cast<Eigen::Index>(v);
  if (i == nx - 1) --i;
  if (j == ny - 1) --j;
  double wu = u - static_cast<double>(i);
  double wv = v - static_cast<double>(j);
  return table2_(i, j) * (1 - wu) * (1 - wv) + table2_(i + 1, j) * wu * (1 - wv) +
         table2_(i, j + 1) * (1 - wu) * wv + table2_(i + 1, j + 1) * wu * wv;
}

ScalarField ScalarField::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  std::vector<double> p = parse_number_list(args, "preset '" + spec + "'");

  auto need = [&](std::size_t n) {
    if (p.size() < n)
      raise(ErrorCode::ConfigError,
            "preset '" + spec + "' needs at least " + std::to_string(n) + " parameters");
  };

  if (name == "const") {
    need(1);
    return constant(p[0]);
  }
  if (name == "affine") {
    need(3);
    return affine(p[0], p[1], p[2], to_vector(p, 3));
  }
  if (name == "sin") {
    need(4);
    return sinusoidal(p[0], p[1], p[2], p[3], to_vector(p, 4));
  }
  if (name == "rat") {
    need(2);
    return rational(p[0], p[1]);
  }
  if (name == "tab") {
    need(4);
    return table1d(p[0], p[1], to_vector(p, 2));
  }
  if (name == "tab2") {
    need(6);
    int nx = static_cast<int>(p[2]);
    int ny = static_cast<int>(p[5]);
    need(6 + static_cast<std::size_t>(nx * ny));
    Eigen::MatrixXd vals(nx, ny);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        vals(i, j) = p[6 + static_cast<std::size_t>(i * ny + j)];
    return table2d(p[0], p[1], nx, p[3], p[4], ny, std::move(vals));
  }
  raise(ErrorCode::ConfigError, "unknown coefficient preset '" + name + "'");
}

std::string ScalarField::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant: os << "const:" << c0_; break;
    case Kind::Affine: os << "affine:" << c0_ << "," << ct_ << "," << cx_; break;
    case Kind::Sinusoidal: os << "sin:" << c0_ << "," << amp_ << "," << ct_ << "," << cx_; break;
    case Kind::Rational: os << "rat:" << c0_ << "," << amp_; break;
    case Kind::Table1D: os << "tab[" << table_.size() << "]"; break;
    case Kind::Table2D: os << "tab2[" << table2_.rows() << "x" << table2_.cols() << "]"; break;
  }
  return os.str();
}

Eigen::MatrixXd sigma_matrix(const CoefficientField& field, double t, double x,
                             const Eigen::VectorXd& y) {
  Eigen::MatrixXd s = field.sigma_at(t, x, y);
  Eigen::MatrixXd big = s * s.transpose();
  if (big(0, 0) < field.bounds().sigma00_floor)
    raise(ErrorCode::EllipticityViolation,
          "Sigma00 = " + std::to_string(big(0, 0)) + " below declared floor " +
              std::to_string(field.bounds().sigma00_floor));
  return big;
}

}  // namespace memlab
