#include <doctest.h>

#include "memlab/errors.hpp"
#include "memlab/rng.hpp"
#include "memlab/stats.hpp"

using namespace memlab;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}
}  // namespace

TEST_CASE("two-sample KS on the pinned examples") {
  CHECK(ks_distance(vec({1, 2, 3}), vec({1, 2, 3}), 0).value == 0.0);
  CHECK(ks_distance(vec({0, 0, 0, 0}), vec({1, 1, 1, 1}), 0).value == 1.0);
  CHECK(ks_distance(vec({1, 2, 3}), vec({2, 3, 4}), 0).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("W1 on the pinned examples") {
  CHECK(wasserstein1(vec({1, 2}), vec({1, 2}), 0).value == 0.0);
  CHECK(wasserstein1(vec({0, 1}), vec({1, 2}), 0).value == doctest::Approx(1.0));
  CHECK(wasserstein1(vec({0, 0, 3}), vec({1, 1, 1}), 0).value ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("symmetry and the triangle inequality on fixed sets") {
  Eigen::VectorXd a = vec({0, 1, 2, 5}), b = vec({1, 1, 3, 4}), c = vec({-1, 0, 2, 2});
  for (auto dist : {&ks_distance, &wasserstein1}) {
    double ab = dist(a, b, 0, 1).value;
    double ba = dist(b, a, 0, 1).value;
    double ac = dist(a, c, 0, 1).value;
    double cb = dist(c, b, 0, 1).value;
    CHECK(ab == doctest::Approx(ba));
    CHECK(ab <= ac + cb + 1e-12);
  }
}

TEST_CASE("empty samples are rejected") {
  Eigen::VectorXd none(0), one = vec({1.0});
  CHECK_THROWS_AS(ks_distance(none, one), Error);
  CHECK_THROWS_AS(wasserstein1(one, none), Error);
  CHECK_THROWS_AS(summarize(none), Error);
}

TEST_CASE("bootstrap CI brackets the point value") {
  RngLane lane(3, 3);
  Eigen::VectorXd a(300), b(300);
  for (int i = 0; i < 300; ++i) {
    a[i] = lane.next_normal();
    b[i] = lane.next_normal() + 0.3;
  }
  DistanceReport r = ks_distance(a, b, 100);
  CHECK(r.bootstrap_ci.first <= r.value);
  CHECK(r.bootstrap_ci.second >= r.value);
  CHECK(r.value > 0.0);
  CHECK(r.value <= 1.0);
}

TEST_CASE("one-sample KS against the exact CDF") {
  RngLane lane(7, 7);
  Eigen::VectorXd u(20000);
  for (int i = 0; i < 20000; ++i) u[i] = lane.next_uniform();
  DistanceReport r = ks_distance_to_cdf(u, [](double x) {
    return x < 0 ? 0.0 : (x > 1 ? 1.0 : x);
  }, 0);
  CHECK(r.n_b == 0);
  CHECK(r.value < 2.0 * ks_null_threshold(20000, 0));
}

TEST_CASE("null threshold formulas") {
  CHECK(ks_null_threshold(10000, 10000) ==
        doctest::Approx(1.358 * std::sqrt(2.0 / 10000.0)));
  CHECK(ks_null_threshold(10000, 0) == doctest::Approx(1.358 / 100.0));
}

TEST_CASE("summaries") {
  SampleSummary s = summarize(vec({1, 2, 3, 4}));
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.median == doctest::Approx(2.5));
  CHECK(s.n == 4);
  CHECK(s.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
}
