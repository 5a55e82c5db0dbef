#include <doctest.h>

#include <cmath>
#include <vector>

#include "memlab/exit_lab.hpp"
#include "memlab/stats.hpp"
#include "memlab/strip_walk.hpp"

using namespace memlab;

namespace {

CoefficientField walk_field(double beta, double gamma = 0.0) {
  CoefficientField f(0, 1);
  f.sigma(0, 0) = ScalarField::constant(1.0);
  f.b(0) = ScalarField::constant(0.0);
  f.beta() = ScalarField::constant(beta);
  f.gamma() = ScalarField::constant(gamma);
  f.bounds().sigma_norm = 1.0;
  f.bounds().beta_norm = std::abs(beta);
  f.bounds().gamma_norm = std::abs(gamma);
  f.bounds().sigma00_floor = 1.0;
  return f;
}

MembraneFamily lattice(double eps, double span) {
  MembraneDensity d;
  d.d = ScalarField::constant(1.0);
  d.d_min = d.d_max = 1.0;
  return build_membranes(d, eps, -span, span);
}

SimConfig walk_cfg(double T, double eps, std::int64_t n_paths = 1) {
  SimConfig cfg;
  cfg.initial_x = 0.0;
  cfg.initial_y = Eigen::VectorXd(0);
  cfg.horizon_T = T;
  cfg.n_paths = n_paths;
  cfg.scheme = Scheme::StripWalk;
  cfg.grid = SimConfig::uniform_grid(T, 4);
  cfg.step.mollifier_rho = eps / 8.0;
  cfg.step.euler_h = default_euler_h(cfg.step.mollifier_rho, 1.0);
  return cfg;
}

// Exit probability of the discrete skew random walk on {-N,...,M}: fair
// except at 0 where it steps +1 with probability alpha. The harmonic system
// p(x) = 1/2 p(x-1) + 1/2 p(x+1) (skewed at 0), p(-N)=0, p(M)=1 is solved
// directly by a tridiagonal elimination, independent of the closed formula.
double lattice_skew_exit_up(double alpha, int n_down, int m_up) {
  const int n = n_down + m_up - 1;  // interior unknowns x = -N+1 .. M-1
  std::vector<double> diag(n, 1.0), lower(n, -0.5), upper(n, -0.5), rhs(n, 0.0);
  int zero_idx = n_down - 1;  // position x = 0
  lower[zero_idx] = -(1.0 - alpha);
  upper[zero_idx] = -alpha;
  rhs[n - 1] = 0.5;  // neighbor of the absorbing top
  if (zero_idx == n - 1) rhs[n - 1] = alpha;
  // forward elimination
  for (int i = 1; i < n; ++i) {
    double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> p(n);
  p[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i) p[i] = (rhs[i] - upper[i] * p[i + 1]) / diag[i];
  return p[zero_idx];
}

}  // namespace

TEST_CASE("lattice oracle agrees with the skew exit formula") {
  for (double alpha : {0.5, 0.6, 0.75}) {
    for (auto [n, m] : std::vector<std::pair<int, int>>{{10, 10}, {10, 20}, {7, 31}}) {
      double oracle = lattice_skew_exit_up(alpha, n, m);
      double formula = skew_exit_probability(alpha, n, m);
      CHECK(oracle == doctest::Approx(formula).epsilon(1e-6));
    }
  }
  CHECK(skew_exit_probability(0.75, 1, 1) == doctest::Approx(0.75));
  CHECK(skew_exit_probability(1.0, 1, 2) == 1.0);
  CHECK(skew_exit_probability(0.5, 1, 2) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("strip walk: symmetric visits split evenly, skew shifts them") {
  MembraneFamily mem = lattice(0.1, 3.0);
  ScalingRegime regime{0.1, 0.4, 0.0};
  SimConfig cfg = walk_cfg(0.0101, 0.1);  // one visit, negligible terminal leg

  auto up_fraction = [&](double beta, std::uint64_t seed) {
    CoefficientField f = walk_field(beta);
    ScalingRegime rg = regime;
    int ups = 0, total = 0;
    for (int i = 0; i < 12000; ++i) {
      RngLane lane(seed, static_cast<std::uint64_t>(i));
      PathBundle b = simulate_strip_walk(f, mem, rg, cfg, lane);
      double xT = b.terminal_x();
      if (std::abs(xT) < 1e-12) continue;  // no completed transition
      ++total;
      if (xT > 0) ++ups;
    }
    REQUIRE(total > 6000);
    return std::pair<double, int>(double(ups) / total, total);
  };

  auto [p_sym, n_sym] = up_fraction(0.0, 101);
  CHECK(std::abs(p_sym - 0.5) <= 3.5 * std::sqrt(0.25 / n_sym));

  auto [p_skew, n_skew] = up_fraction(1.0, 102);  // delta*beta = 0.4
  CHECK(std::abs(p_skew - 0.7) <= 3.5 * std::sqrt(0.21 / n_skew));
}

TEST_CASE("mean-substituted local time and sojourn per visit") {
  // a- = a+ = eps = 0.1, Sigma00 = 1: dL = 0.1, dtau = 0.01 per visit exactly
  CoefficientField f = walk_field(0.0, 2.0);
  MembraneFamily mem = lattice(0.1, 3.0);
  ScalingRegime regime{0.1, 0.1, 0.5};
  SimConfig cfg = walk_cfg(0.0501, 0.1);
  RngLane lane(55, 1);
  PathBundle b = simulate_strip_walk(f, mem, regime, cfg, lane);
  // five completed visits in [0, 0.05]; terminal Euler leg may add a little
  double l_after_walk = b.local_time_total[b.grid_size() - 1];
  CHECK(l_after_walk >= 5 * 0.1 - 1e-9);
  CHECK(l_after_walk <= 5 * 0.1 + 0.05);
  // A = t + lambda * gamma * L
  double a_T = b.terminal_a();
  CHECK(a_T == doctest::Approx(0.0501 + 0.5 * 2.0 * l_after_walk).epsilon(1e-6));
}

TEST_CASE("exact sojourn sampling matches the exit-time law") {
  // survival checks
  CHECK(bm_exit_time_survival(1.0, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(bm_exit_time_survival(1.0, 1.0, 50.0) <= 1e-12);
  // mean of tau for (-a,b) is a*b
  RngLane lane(77, 0);
  for (auto [a, bnd] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {0.3, 2.5}}) {
    double sum = 0.0, sumsq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      double t = sample_bm_exit_time(a, bnd, lane.next_uniform());
      sum += t;
      sumsq += t * t;
    }
    double mean = sum / n;
    double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - a * bnd) <= 4.0 * se);
  }
  // monotone survival
  CHECK(bm_exit_time_survival(1, 2, 0.5) > bm_exit_time_survival(1, 2, 1.5));
}

TEST_CASE("scaling relation: exit-side law is scale invariant") {
  // chi-squared homogeneity of first-transition side counts at eps vs eps/4
  ScalingRegime r1{0.2, 0.4, 0.0}, r2{0.05, 0.4, 0.0};
  CoefficientField f = walk_field(1.0);  // delta*beta = 0.4 both
  long up1 = 0, n1 = 0, up2 = 0, n2 = 0;
  for (int i = 0; i < 8000; ++i) {
    {
      MembraneFamily mem = lattice(0.2, 3.0);
      SimConfig cfg = walk_cfg(0.2 * 0.2 * 1.01, 0.2);
      RngLane lane(61, static_cast<std::uint64_t>(i));
      double xT = simulate_strip_walk(f, mem, r1, cfg, lane).terminal_x();
      if (std::abs(xT) > 1e-12) {
        ++n1;
        if (xT > 0) ++up1;
      }
    }
    {
      MembraneFamily mem = lattice(0.05, 1.0);
      SimConfig cfg = walk_cfg(0.05 * 0.05 * 1.01, 0.05);
      RngLane lane(62, static_cast<std::uint64_t>(i));
      double xT = simulate_strip_walk(f, mem, r2, cfg, lane).terminal_x();
      if (std::abs(xT) > 1e-12) {
        ++n2;
        if (xT > 0) ++up2;
      }
    }
  }
  REQUIRE(n1 > 3000);
  REQUIRE(n2 > 3000);
  double p_pool = double(up1 + up2) / double(n1 + n2);
  double chi2 = 0.0;
  for (auto [u, n] : {std::pair<long, long>{up1, n1}, {up2, n2}}) {
    double e_up = p_pool * n, e_dn = (1 - p_pool) * n;
    chi2 += (u - e_up) * (u - e_up) / e_up +
            ((n - u) - e_dn) * ((n - u) - e_dn) / e_dn;
  }
  CHECK(chi2 < 6.635);  // 1 dof, p > 0.01
}

TEST_CASE("single-membrane exact mode matches the skew marginal") {
  CoefficientField f = walk_field(1.0, 1.5);
  MembraneFamily mem = single_membrane(0.0, 1.0);
  ScalingRegime regime{1.0, 0.4, 0.2};
  SimConfig cfg;
  cfg.initial_x = 0.0;
  cfg.initial_y = Eigen::VectorXd(0);
  cfg.horizon_T = 1.0;
  cfg.scheme = Scheme::StripWalk;
  cfg.grid = SimConfig::uniform_grid(1.0, 1);

  const int n = 20000;
  const double alpha = 0.7;
  Eigen::VectorXd xs(n);
  for (int i = 0; i < n; ++i) {
    RngLane lane(88, static_cast<std::uint64_t>(i));
    PathBundle b = simulate_strip_walk(f, mem, regime, cfg, lane);
    xs[i] = b.terminal_x();
    // A = T + lambda*gamma*L with L >= 0
    CHECK(b.terminal_a() >= 1.0 - 1e-12);
  }
  auto sbm_cdf = [&](double v) {
    double phi = normal_cdf(v);  // sigma = 1, T = 1
    return v < 0 ? 2.0 * (1.0 - alpha) * phi
                 : (1.0 - alpha) + alpha * (2.0 * phi - 1.0);
  };
  DistanceReport ks = ks_distance_to_cdf(xs, sbm_cdf, 0);
  CHECK(ks.value <= 1.6 * ks_null_threshold(n, 0));
}

TEST_CASE("single-membrane mode guards its exactness conditions") {
  MembraneFamily mem = single_membrane(0.0, 1.0);
  ScalingRegime regime{1.0, 0.4, 0.0};
  SimConfig cfg;
  cfg.initial_x = 0.25;  // off the membrane
  cfg.initial_y = Eigen::VectorXd(0);
  cfg.horizon_T = 1.0;
  cfg.scheme = Scheme::StripWalk;
  cfg.grid = SimConfig::uniform_grid(1.0, 1);
  CoefficientField f = walk_field(1.0);
  RngLane lane(1, 1);
  CHECK_THROWS_AS(simulate_strip_walk(f, mem, regime, cfg, lane), Error);
}
