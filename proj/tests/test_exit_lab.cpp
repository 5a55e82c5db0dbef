#include <doctest.h>

#include <cmath>

#include "memlab/exit_lab.hpp"

using namespace memlab;

namespace {

CoefficientField lab_field(double b0, double beta) {
  CoefficientField f(0, 1);
  f.sigma(0, 0) = ScalarField::constant(1.0);
  f.b(0) = ScalarField::constant(b0);
  f.beta() = ScalarField::constant(beta);
  f.gamma() = ScalarField::constant(0.0);
  f.bounds().sigma_norm = 1.0;
  f.bounds().b_norm = std::abs(b0);
  f.bounds().beta_norm = std::abs(beta);
  f.bounds().sigma00_floor = 1.0;
  return f;
}

}  // namespace

TEST_CASE("theory helpers reproduce the strip asymptotics") {
  CHECK(theory_exit_probability_up(1.0, 2.0) == doctest::Approx(1.0 / 3.0));
  CHECK(theory_mean_local_time(1.0, 1.0, 0.1) == doctest::Approx(0.1));
  CHECK(theory_mean_local_time(1.0, 2.0, 0.1) == doctest::Approx(0.4 / 3.0));
  CHECK(theory_mean_exit_time(1.0, 1.0, 0.1, 1.0) == doctest::Approx(0.01));
  // two-term displacement: b0 a- a+ eps^2 / S + beta 2a-a+/(a-+a+) eps delta
  CHECK(theory_mean_displacement(1.0, 1.0, 0.05, 0.05, 1.0, 1.0, 1.0) ==
        doctest::Approx(0.0025 + 0.0025));
  CHECK(theory_mean_displacement(1.0, 1.0, 0.05, 0.05, 1.0, 0.5, 1.0) ==
        doctest::Approx(0.0025 + 0.00125));
}

TEST_CASE("symmetric exit statistics at reduced scale") {
  CoefficientField f = lab_field(0.0, 0.0);
  ScalingRegime regime{0.2, 0.2, 0.0};
  StepParams step;
  step.mollifier_rho = 0.2 / 32.0;
  step.euler_h = default_euler_h(step.mollifier_rho, 1.0);
  ExitLabCase c;
  c.a_minus = 1.0;
  c.a_plus = 1.0;
  c.start_y = Eigen::VectorXd(0);
  c.n_paths = 4000;
  c.threads = 2;
  ExitStats st = single_membrane_exit_mc(f, regime, step, c, 777);
  CHECK(st.n_paths == 4000);
  CHECK(st.n_capped == 0);
  CHECK(std::abs(st.p_up - 0.5) <= 4.0 * st.p_up_ci / 1.96);
  CHECK(st.mean_exit_time == doctest::Approx(0.04).epsilon(0.10));
  CHECK(st.mean_local_time == doctest::Approx(0.2).epsilon(0.10));
  CHECK(st.p_up_ci == doctest::Approx(1.96 * std::sqrt(0.25 / 4000.0)).epsilon(0.1));
}

TEST_CASE("asymmetric strip shifts the side probability") {
  CoefficientField f = lab_field(0.0, 0.0);
  ScalingRegime regime{0.2, 0.2, 0.0};
  StepParams step;
  step.mollifier_rho = 0.2 / 32.0;
  step.euler_h = default_euler_h(step.mollifier_rho, 1.0);
  ExitLabCase c;
  c.a_minus = 1.0;
  c.a_plus = 2.0;
  c.start_y = Eigen::VectorXd(0);
  c.n_paths = 4000;
  c.threads = 2;
  ExitStats st = single_membrane_exit_mc(f, regime, step, c, 778);
  CHECK(std::abs(st.p_up - 1.0 / 3.0) <= 4.0 * st.p_up_ci / 1.96 + 0.01);
}

TEST_CASE("bridge correction leaves the side law intact") {
  CoefficientField f = lab_field(0.0, 0.0);
  ScalingRegime regime{0.2, 0.2, 0.0};
  StepParams step;
  step.mollifier_rho = 0.2 / 16.0;
  step.euler_h = default_euler_h(step.mollifier_rho, 1.0);
  step.bridge_correction = true;
  ExitLabCase c;
  c.a_minus = 1.0;
  c.a_plus = 1.0;
  c.start_y = Eigen::VectorXd(0);
  c.n_paths = 3000;
  c.threads = 2;
  ExitStats st = single_membrane_exit_mc(f, regime, step, c, 779);
  CHECK(std::abs(st.p_up - 0.5) <= 4.5 * st.p_up_ci / 1.96);
  // bridge detection shortens measured exit times relative to grid detection
  CHECK(st.mean_exit_time < 0.04 * 1.05);
}

TEST_CASE("argument guards") {
  CHECK_THROWS_AS(skew_exit_probability(0.5, -1.0, 1.0), Error);
  CHECK_THROWS_AS(skew_exit_probability(1.5, 1.0, 1.0), Error);
  CoefficientField f = lab_field(0.0, 0.0);
  ScalingRegime regime{0.2, 0.2, 0.0};
  StepParams step;
  ExitLabCase c;
  c.a_minus = 0.0;
  CHECK_THROWS_AS(single_membrane_exit_mc(f, regime, step, c, 1), Error);
}

TEST_CASE("drift-induced error decays with the strip width" *
          doctest::timeout(300)) {
  // With b0 = 1 the exit side deviates from a-/(a-+a+) by O(eps); the
  // measured deviation must be nonincreasing over the eps ladder.
  CoefficientField f = lab_field(1.0, 0.0);
  std::vector<double> devs;
  for (double eps : {0.2, 0.1, 0.05}) {
    ScalingRegime regime{eps, eps, 0.0};
    StepParams step;
    step.mollifier_rho = eps / 16.0;
    step.euler_h = default_euler_h(step.mollifier_rho, 1.0);
    ExitLabCase c;
    c.a_minus = 1.0;
    c.a_plus = 1.0;
    c.start_y = Eigen::VectorXd(0);
    c.n_paths = 20000;
    c.threads = 2;
    ExitStats st = single_membrane_exit_mc(f, regime, step, c, 881);
    devs.push_back(std::abs(st.p_up - 0.5));
  }
  CHECK(devs[0] > devs[1]);
  CHECK(devs[1] > devs[2]);
  CHECK(devs[0] > 0.05);  // the eps = 0.2 deviation is genuinely macroscopic
}
