#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "cptp/experiments.hpp"
#include "helpers.hpp"

using namespace cptp;

TEST_CASE("convergence table step counts") {
  CHECK(convergence_steps(1) == std::vector<int>{1600, 3200, 6400, 12800});
  CHECK(convergence_steps(2) == std::vector<int>{200, 400, 800, 1600});
  CHECK(convergence_steps(3) == std::vector<int>{45, 90, 180, 360});
  CHECK(convergence_steps(4) == std::vector<int>{32, 64, 128, 256});
  CHECK_THROWS_AS(convergence_steps(5), ConfigError);
}

TEST_CASE("convergence runs are deterministic") {
  ConvergenceOptions o;
  o.orders = {2};
  o.families = {FlowFamily::Explicit};
  o.steps = {50, 100};
  const auto a = run_convergence(o);
  const auto b = run_convergence(o);
  REQUIRE(a.size() == 2);
  CHECK(std::isnan(a[0].rate));
  CHECK(a[1].rate == doctest::Approx(std::log2(a[0].error / a[1].error)));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].error == b[i].error);
}

TEST_CASE("an unstable step size is reported as divergent") {
  ConvergenceOptions o;
  o.orders = {1};
  o.families = {FlowFamily::Explicit};
  o.steps = {4};
  o.t_final = 60.0;
  o.renormalize = false;
  const auto rows = run_convergence(o);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].divergent);
  CHECK_FALSE(rows[0].error <= kDivergenceError);
}

TEST_CASE("qudit-cavity model without dissipation stays rank one") {
  QuditCavityOptions o;
  o.model = qudit_cavity_config(false);
  for (auto& s : o.model.subsystems) {
    s.t1 = std::numeric_limits<Real>::infinity();
    s.t2 = std::numeric_limits<Real>::infinity();
  }
  o.steps = 20;
  o.t_final = 100.0;
  const auto r = run_qudit_cavity(o);
  for (const Index k : r.trajectory.ranks) CHECK(k == 1);
  REQUIRE(r.populations.size() == r.trajectory.times.size());
  for (const auto& pops : r.populations) {
    REQUIRE(pops.size() == 2);
    CHECK(pops[0].size() == 3);
    CHECK(pops[1].size() == 20);
    CHECK(pops[0].sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("qudit-cavity configuration") {
  const ModelConfig c = qudit_cavity_config();
  REQUIRE(c.subsystems.size() == 2);
  CHECK(c.subsystems[0].levels == 3);
  CHECK(c.subsystems[1].levels == 20);
  CHECK(c.subsystems[0].omega == c.subsystems[0].rot_freq);
  CHECK(c.build().dim() == 60);
  CHECK(qudit_cavity_config(false).couplings.at(0).xi == 0.0);
}

TEST_CASE("Jaynes-Cummings helpers") {
  CHECK(jc_revival_time(150, 1.0) == doctest::Approx(2.0 * std::numbers::pi * std::sqrt(50.0)));
  CHECK(jc_revival_time(150, 1.0) == doctest::Approx(44.43).epsilon(1e-3));
  const Matrix v = jc_initial_factor(30);
  CHECK(v.rows() == 60);
  CHECK(v.cols() == 1);
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v.topRows(30).norm() == 0.0);

  const std::vector<Real> t{0.0, 5.0, 10.0, 15.0, 20.0};
  CHECK(jc_cost(t, std::vector<Real>(5, 0.5), 10.0) == 0.0);
  const Real c = jc_cost(t, {1.0, 0.9, 0.2, 0.7, 0.4}, 10.0);
  CHECK(c > 0.0);
  // Only the window around the revival time carries weight.
  const Real w = std::exp(-std::pow(0.5 / 0.6, 10));
  const Real expected = 5.0 * (w * 0.16 + 0.09 + w * 0.04);
  CHECK(c == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(jc_cost(t, {0.5}, 10.0), Error);
}

TEST_CASE("single-cell scan reproduces the revival cost") {
  JcOptions o;
  o.cavity_levels = 12;
  o.steps = 120;
  o.amplitude = 0.1;
  o.width = 0.3;
  const JcResult direct = run_jc_revival(o);
  CHECK(direct.times.size() == 121);
  CHECK(direct.times.back() == doctest::Approx(o.horizon * direct.revival_time));
  for (std::size_t i = 0; i < direct.times.size(); ++i) {
    CHECK(direct.excited[i] + direct.ground[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto scan = run_jc_scan({0.1}, {0.3}, o, 1);
  REQUIRE(scan.cost.rows() == 1);
  REQUIRE(scan.cost.cols() == 1);
  CHECK(scan.cost(0, 0) == direct.cost);
  CHECK(scan.failures.empty());
}

TEST_CASE("uniform grids") {
  CHECK(uniform_grid(0.0, 0.39, 0.01).size() == 40);
  CHECK(uniform_grid(0.01, 0.60, 0.01).size() == 60);
  CHECK(uniform_grid(1.0, 1.0, 0.5).size() == 1);
  CHECK(uniform_grid(0.0, 0.39, 0.01).back() == doctest::Approx(0.39));
  CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 0.1), ConfigError);
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 0.0), ConfigError);
}
