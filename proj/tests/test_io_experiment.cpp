#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "memlab/experiment.hpp"
#include "memlab/io.hpp"
#include "memlab/rng.hpp"
#include "memlab/scenarios.hpp"

using namespace memlab;

TEST_CASE("bundle files round-trip bitwise") {
  RngLane lane(1, 2);
  std::vector<PathBundle> bundles(3);
  for (PathBundle& b : bundles) {
    const int n = 6;
    b.times.setLinSpaced(n, 0.0, 1.0);
    b.x.resize(n);
    b.y.resize(n, 2);
    b.local_time_total.resize(n);
    b.ltime_beta.resize(n);
    b.ltime_theta.resize(n, 2);
    b.ltime_gamma.resize(n);
    b.a_functional.resize(n);
    for (int j = 0; j < n; ++j) {
      b.x[j] = lane.next_normal();
      b.y(j, 0) = lane.next_normal();
      b.y(j, 1) = lane.next_normal();
      b.local_time_total[j] = j * 0.25;
      b.ltime_beta[j] = lane.next_uniform();
      b.ltime_theta(j, 0) = lane.next_uniform();
      b.ltime_theta(j, 1) = lane.next_uniform();
      b.ltime_gamma[j] = lane.next_uniform();
      b.a_functional[j] = b.times[j] + j * 0.1;
    }
  }
  bundles[1].escaped_window = true;

  BundleFileHeader hdr;
  hdr.config_hash = 0xDEADBEEFCAFE1234ull;
  hdr.seed = 42;
  hdr.grid = bundles[0].times;
  const std::string path = "test_bundles.bin";
  write_bundles(path, hdr, bundles);

  BundleFileHeader hdr2;
  std::vector<PathBundle> back = read_bundles(path, &hdr2);
  CHECK(hdr2.config_hash == hdr.config_hash);
  CHECK(hdr2.seed == 42);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].x == bundles[i].x);
    CHECK(back[i].y == bundles[i].y);
    CHECK(back[i].a_functional == bundles[i].a_functional);
    CHECK(back[i].escaped_window == bundles[i].escaped_window);
  }
  std::remove(path.c_str());
}

TEST_CASE("CSV header carries config hash and 17-digit cells round-trip") {
  const std::string path = "test_table.csv";
  {
    CsvWriter csv(path, 0xABCull, 7, {"a", "b"});
    csv.row({CsvWriter::num(1.0 / 3.0), CsvWriter::num(std::int64_t(5))});
  }
  std::ifstream in(path);
  std::string l1, l2, l3;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  CHECK(l1.find("0000000000000abc") != std::string::npos);
  CHECK(l1.find("seed=7") != std::string::npos);
  CHECK(l2 == "a,b");
  double v = std::stod(l3.substr(0, l3.find(',')));
  CHECK(v == 1.0 / 3.0);  // bit-exact after the 17-digit round trip
  std::remove(path.c_str());
}

TEST_CASE("verdict JSON is machine readable") {
  Verdict v;
  v.add("alpha", 0.5, 1.0, "<=", true);
  v.add("beta", 2.0, 1.0, "<=", false, "too big");
  const std::string path = "test_verdict.json";
  write_verdict(path, v, 0x1, 9, "demo");
  std::ifstream in(path);
  nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j["scenario"] == "demo");
  CHECK(j["pass"] == false);
  REQUIRE(j["assertions"].size() == 2);
  CHECK(j["assertions"][0]["pass"] == true);
  CHECK(j["assertions"][1]["detail"] == "too big");
  CHECK_FALSE(v.all_pass());
  std::remove(path.c_str());
}

TEST_CASE("experiments resolve from scenario configs") {
  Experiment ex = load_experiment(scenario_config("exa1"));
  CHECK(ex.field.y_dim() == 1);
  CHECK(ex.field.noise_dim() == 2);
  CHECK(ex.regime.epsilon == 0.05);
  CHECK(ex.sim.n_paths == 20000);
  // defaults: rho = eps d_min / 8, h = rho^2 / (10 Sigma00-bound)
  StepParams sp = ex.step_for(0.05);
  CHECK(sp.mollifier_rho == doctest::Approx(0.05 / 8.0));
  CHECK(sp.euler_h == doctest::Approx(sp.mollifier_rho * sp.mollifier_rho / 20.0));
  MembraneFamily fam = ex.make_membranes();
  CHECK(fam.points.size() > 100);
  CHECK(fam.nearest_index(0.0) >= 0);
}

TEST_CASE("malformed configs fail with named keys") {
  // negative stickiness bound
  Config bad = scenario_config("exa2-sticky");
  bad.set_override("coefficients.bounds.gamma", "-3.0");
  CHECK_THROWS_WITH_AS(load_experiment(bad), doctest::Contains("gamma"), Error);

  // negative gamma caught by sampling validation
  Config bad2 = scenario_config("exa2-sticky");
  bad2.set_override("coefficients.gamma", "\"const:-1.0\"");
  CHECK_THROWS_WITH_AS(load_experiment(bad2), doctest::Contains("gamma"), Error);

  // wrong sigma shape
  Config bad3 = scenario_config("exa1");
  bad3.set_override("coefficients.sigma", "[[\"const:1.0\"]]");
  CHECK_THROWS_WITH_AS(load_experiment(bad3), doctest::Contains("sigma"), Error);

  // delta too large for the declared beta norm
  Config bad4 = scenario_config("exa2-sticky");
  bad4.set_override("scaling.delta", "0.3");  // 0.3 * 4 >= 1
  CHECK_THROWS_AS(load_experiment(bad4), Error);
}

TEST_CASE("scaling regime recomputes ratios") {
  ScalingRegime r{0.1, 0.05, 0.02};
  CHECK(r.p_ratio() == doctest::Approx(0.5));
  CHECK(r.q_ratio() == doctest::Approx(0.2));
  CHECK(r.r_ratio() == doctest::Approx(0.4));
  r.delta = 0.2;
  CHECK(r.p_ratio() == doctest::Approx(2.0));
}
