#include <doctest.h>

#include "memlab/fields.hpp"
#include "memlab/validate.hpp"

using namespace memlab;

TEST_CASE("preset parsing and evaluation") {
  Eigen::VectorXd y(1);
  y << 2.0;

  ScalarField c = ScalarField::parse("const:1.5");
  CHECK(c(0.3, -1.0, y) == 1.5);
  CHECK(c.is_constant());

  ScalarField a = ScalarField::parse("affine:1.0,0.5,2.0,3.0");
  CHECK(a(2.0, 1.0, y) == doctest::Approx(1.0 + 0.5 * 2.0 + 2.0 * 1.0 + 3.0 * 2.0));

  ScalarField s = ScalarField::parse("sin:0.5,0.25,1.0,2.0");
  CHECK(s(0.1, 0.2, y) == doctest::Approx(0.5 + 0.25 * std::sin(0.1 + 0.4)));

  ScalarField r = ScalarField::parse("rat:1.0,1.0");
  CHECK(r(0.0, 1.0, y) == doctest::Approx(1.5));
  CHECK(r(0.0, 0.0, y) == doctest::Approx(1.0));

  CHECK_THROWS_AS(ScalarField::parse("nope:1"), Error);
  CHECK_THROWS_AS(ScalarField::parse("affine:1"), Error);
}

TEST_CASE("tabulated presets interpolate and clamp") {
  ScalarField t1 = ScalarField::parse("tab:0.0,0.5,1.0,2.0,4.0");
  Eigen::VectorXd y(0);
  CHECK(t1(0, 0.0, y) == doctest::Approx(1.0));
  CHECK(t1(0, 0.25, y) == doctest::Approx(1.5));
  CHECK(t1(0, 0.75, y) == doctest::Approx(3.0));
  CHECK(t1(0, -5.0, y) == doctest::Approx(1.0));   // clamped
  CHECK(t1(0, 99.0, y) == doctest::Approx(4.0));

  // 2x2 bilinear table in (x, y1): corners 0,1,2,3
  ScalarField t2 = ScalarField::parse("tab2:0,1,2,0,1,2,0,1,2,3");
  Eigen::VectorXd y1(1);
  y1 << 0.5;
  CHECK(t2(0, 0.5, y1) == doctest::Approx(0.5 * (0 + 1) * 0.5 + 0.5 * (2 + 3) * 0.5));
}

TEST_CASE("sigma_matrix forms sigma sigma^T with the ellipticity floor") {
  Eigen::VectorXd y0(1);
  y0 << 0.0;

  SUBCASE("identity") {
    CoefficientField f(1, 2);
    f.sigma(0, 0) = ScalarField::constant(1.0);
    f.sigma(0, 1) = ScalarField::constant(0.0);
    f.sigma(1, 0) = ScalarField::constant(0.0);
    f.sigma(1, 1) = ScalarField::constant(1.0);
    f.bounds().sigma00_floor = 0.5;
    Eigen::MatrixXd big = sigma_matrix(f, 0, 0, y0);
    CHECK(big.isApprox(Eigen::MatrixXd::Identity(2, 2)));
  }

  SUBCASE("mixed rows against a direct product oracle") {
    CoefficientField f(1, 2);
    f.sigma(0, 0) = ScalarField::constant(0.6);
    f.sigma(0, 1) = ScalarField::constant(0.8);
    f.sigma(1, 0) = ScalarField::constant(1.0);
    f.sigma(1, 1) = ScalarField::constant(0.0);
    f.bounds().sigma00_floor = 0.5;
    Eigen::MatrixXd big = sigma_matrix(f, 0, 0, y0);
    // oracle: accumulate sum_l s_il s_jl by hand
    double rows[2][2] = {{0.6, 0.8}, {1.0, 0.0}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double expect = 0.0;
        for (int l = 0; l < 2; ++l) expect += rows[i][l] * rows[j][l];
        CHECK(big(i, j) == doctest::Approx(expect).epsilon(1e-14));
      }
    CHECK(big(0, 0) == doctest::Approx(1.0));
    CHECK(big(0, 1) == doctest::Approx(0.6));
    CHECK((big - big.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  }

  SUBCASE("floor violation throws") {
    CoefficientField f(0, 1);
    f.sigma(0, 0) = ScalarField::constant(0.1);
    f.bounds().sigma00_floor = 0.5;
    Eigen::VectorXd none(0);
    CHECK_THROWS_AS(sigma_matrix(f, 0, 0, none), Error);
  }
}

TEST_CASE("sampled assumption checks catch violations") {
  CoefficientField f(0, 1);
  f.sigma(0, 0) = ScalarField::constant(1.0);
  f.b(0) = ScalarField::constant(0.0);
  f.beta() = ScalarField::constant(0.5);
  f.gamma() = ScalarField::constant(0.0);
  f.bounds().sigma_norm = 1.0;
  f.bounds().beta_norm = 0.5;
  f.bounds().sigma00_floor = 1.0;
  ValidationBox box;
  box.n_samples = 200;
  CHECK(validate_field(f, box).ok);

  SUBCASE("beta exceeding its declared bound") {
    f.bounds().beta_norm = 0.4;
    ValidationReport rep = validate_field(f, box, true);
    CHECK_FALSE(rep.ok);
    CHECK_THROWS_AS(validate_field(f, box), Error);
  }
  SUBCASE("negative gamma") {
    f.gamma() = ScalarField::constant(-0.1);
    f.bounds().gamma_norm = 0.1;
    ValidationReport rep = validate_field(f, box, true);
    CHECK_FALSE(rep.ok);
    bool mentions_gamma = false;
    for (const auto& v : rep.violations)
      if (v.find("gamma") != std::string::npos) mentions_gamma = true;
    CHECK(mentions_gamma);
  }
  SUBCASE("ellipticity floor under sinusoidal sigma") {
    f.sigma(0, 0) = ScalarField::parse("sin:0.5,0.5,0,3");  // dips to 0
    f.bounds().sigma00_floor = 0.25;
    ValidationReport rep = validate_field(f, box, true);
    CHECK_FALSE(rep.ok);
    CHECK(rep.worst_sigma00 < 0.25);
  }
}
