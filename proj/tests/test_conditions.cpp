#include "meanfield/conditions.hpp"

#include <cmath>

#include "doctest.h"

using namespace meanfield::solver;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("beta constants: zero Lipschitz constant") {
  const auto c = beta_constants(0.0, 1.0, 2.0, 1.0, 0.8);
  CHECK(c.beta1 == doctest::Approx(0.0));
  REQUIRE(c.beta2.has_value());
  CHECK(*c.beta2 == doctest::Approx(0.0));
}

TEST_CASE("beta constants: recomputed reference point") {
  // K = 0.01, M = 1, delta = pi^2 - 1, C~2 = 1, H = 0.8
  const double delta = kPi * kPi - 1.0;
  const auto c = beta_constants(0.01, 1.0, delta, 1.0, 0.8);
  CHECK(c.beta1 == doctest::Approx(0.04 / delta).epsilon(1e-12));
  CHECK(c.beta1 == doctest::Approx(0.004509783998380721).epsilon(1e-12));
  REQUIRE(c.c_delta_h.has_value());
  CHECK(*c.c_delta_h == doctest::Approx(0.4722348940770616).epsilon(1e-12));
  REQUIRE(c.beta2.has_value());
  CHECK(*c.beta2 == doctest::Approx(0.0051129332824396785).epsilon(1e-12));
  // the alternate placement drops one delta factor
  REQUIRE(c.beta2_alternate.has_value());
  CHECK(*c.beta2_alternate ==
        doctest::Approx(c.beta1 + (*c.beta2 - c.beta1) / delta).epsilon(1e-10));
}

TEST_CASE("beta constants: H <= 3/4 leaves beta2 undefined") {
  const auto c = beta_constants(1.0, 1.0, 1.0, 1.0, 0.7);
  CHECK_FALSE(c.beta2.has_value());
  CHECK_FALSE(c.c_delta_h.has_value());
  const auto rep = check_existence_conditions(c);
  CHECK(rep.cond1p == Verdict::indeterminate);
  CHECK_FALSE(rep.cond1p_lhs.has_value());
}

TEST_CASE("beta constants: domain violations") {
  CHECK_THROWS_AS(beta_constants(1.0, 1.0, 0.0, 1.0, 0.8), std::invalid_argument);
  CHECK_THROWS_AS(beta_constants(-1.0, 1.0, 1.0, 1.0, 0.8), std::invalid_argument);
  CHECK_THROWS_AS(beta_constants(1.0, 0.5, 1.0, 1.0, 0.8), std::invalid_argument);
  CHECK_THROWS_AS(beta_constants(1.0, 1.0, 1.0, 1.0, 1.2), std::invalid_argument);
}

TEST_CASE("condition checker: zero constants all pass") {
  const auto rep = check_existence_conditions(beta_constants(0.0, 1.0, 1.0, 1.0, 0.8));
  CHECK(rep.cond1_lhs == doctest::Approx(0.0));
  CHECK(*rep.cond1p_lhs == doctest::Approx(0.0));
  CHECK(rep.cond2_lhs == doctest::Approx(0.0));
  CHECK(rep.all_hold());
}

TEST_CASE("condition checker: frozen regression values") {
  // recomputed independently before the build:
  //   cond1  = 2 K M^2 (1/delta^2 + 1/(2 delta)) = 1.3816728959958149e-3
  //   cond1+ = (beta2/delta)(1 + beta2/delta)    = 5.767879186273699e-4
  const auto c = example1_constants(0.01, 0.01, 0.01, 0.8);
  CHECK(c.k == doctest::Approx(0.01).epsilon(1e-15));
  const auto rep = check_existence_conditions(c);
  CHECK(rep.cond1_lhs == doctest::Approx(1.3816728959958149e-3).epsilon(1e-12));
  REQUIRE(rep.cond1p_lhs.has_value());
  CHECK(*rep.cond1p_lhs == doctest::Approx(5.767879186273699e-4).epsilon(1e-12));
  CHECK(rep.cond1 == Verdict::holds);
  CHECK(rep.cond1p == Verdict::holds);
  CHECK(rep.cond2 == Verdict::holds);
  REQUIRE(rep.l1_plus_l2.has_value());
  CHECK(*rep.l1_plus_l2 ==
        doctest::Approx(0.4722348940770616 * 0.4722348940770616).epsilon(1e-10));
}

TEST_CASE("condition checker: large constants fail") {
  // M = 1, delta = 0.1, K = 1, C~2 = 1: cond1 = 2(100 + 5) = 210
  const auto rep = check_existence_conditions(beta_constants(1.0, 1.0, 0.1, 1.0, 0.8));
  CHECK(rep.cond1_lhs == doctest::Approx(210.0).epsilon(1e-12));
  CHECK(rep.cond1 == Verdict::fails);
}

TEST_CASE("condition LHS monotone in K and 1/delta") {
  const double hurst = 0.8;
  double prev1 = -1.0, prev1p = -1.0, prev2 = -1.0;
  for (int i = 0; i < 10; ++i) {
    const double k = 0.01 + 0.05 * i;
    const auto rep = check_existence_conditions(beta_constants(k, 1.0, 2.0, 1.0, hurst));
    CHECK(rep.cond1_lhs >= prev1);
    CHECK(*rep.cond1p_lhs >= prev1p);
    CHECK(rep.cond2_lhs >= prev2);
    prev1 = rep.cond1_lhs;
    prev1p = *rep.cond1p_lhs;
    prev2 = rep.cond2_lhs;
  }
  prev1 = prev1p = prev2 = -1.0;
  for (int i = 0; i < 10; ++i) {
    const double delta = 5.0 / (1.0 + i);  // decreasing delta = increasing 1/delta
    const auto rep =
        check_existence_conditions(beta_constants(0.05, 1.0, delta, 1.0, hurst));
    CHECK(rep.cond1_lhs >= prev1);
    CHECK(*rep.cond1p_lhs >= prev1p);
    CHECK(rep.cond2_lhs >= prev2);
    prev1 = rep.cond1_lhs;
    prev1p = *rep.cond1p_lhs;
    prev2 = rep.cond2_lhs;
  }
}

TEST_CASE("example1 Lipschitz constant") {
  CHECK(example1_lipschitz_k(0, 0, 0) == doctest::Approx(0.0));
  CHECK(example1_lipschitz_k(0.01, 0.01, 0.01) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(example1_lipschitz_k(0, 0, 1.0) == doctest::Approx(1.0));
  // first branch dominates for large c1
  CHECK(example1_lipschitz_k(2.0, 0, 0) ==
        doctest::Approx(2.0 * (4.0 / 4.0 + 4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(example1_lipschitz_k(-0.1, 0, 0), std::invalid_argument);
}

TEST_CASE("example1 constants use M = 1, delta = pi^2 - 1") {
  const auto c = example1_constants(0.05, 0.05, 0.05, 0.8);
  CHECK(c.m == 1.0);
  CHECK(c.delta == doctest::Approx(kPi * kPi - 1.0));
  CHECK(c.ctilde2 == 1.0);
}

TEST_CASE("example2 constants") {
  SUBCASE("zero envelope") {
    const auto e = example2_constants(1.0, 0.0, 2.0);
    CHECK(e.k1 == doctest::Approx(0.0));
    CHECK(e.k2 == doctest::Approx(0.0));
  }
  SUBCASE("unit case") {
    const auto e = example2_constants(1.0, 1.0, 8.0);
    CHECK(e.k1 == doctest::Approx(1.0));
    CHECK(e.k2 == doctest::Approx(1.0));
    CHECK(e.k == doctest::Approx(1.0));
    CHECK(e.m == 1.0);
    CHECK(e.delta == doctest::Approx(4.0));
  }
  SUBCASE("doubling nu halves K1 only") {
    const auto a = example2_constants(1.5, 0.7, 2.0);
    const auto b = example2_constants(1.5, 0.7, 4.0);
    CHECK(b.k1 == doctest::Approx(a.k1 / 2.0).epsilon(1e-14));
    CHECK(b.k2 == doctest::Approx(a.k2).epsilon(1e-14));
  }
  SUBCASE("invalid nu") {
    CHECK_THROWS_AS(example2_constants(1.0, 1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("gronwall bound") {
  const std::vector<double> none = {0.0};
  const std::vector<double> one = {1.0};
  const std::vector<double> two = {2.0};
  CHECK(gronwall_bound(3.5, none, two) == doctest::Approx(3.5));
  CHECK(gronwall_bound(1.0, one, two) == doctest::Approx(2.0));
  // multiple kernels: beta = 0.5 + 0.25, dmin = min(2, 3) = 2
  const std::vector<double> betas = {0.5, 0.25};
  const std::vector<double> deltas = {2.0, 3.0};
  CHECK(gronwall_bound(1.0, betas, deltas) == doctest::Approx(2.0 / 1.25));
  // boundary: beta -> dmin
  const std::vector<double> bad = {2.0};
  CHECK_THROWS_AS(gronwall_bound(1.0, bad, two), std::domain_error);
}

TEST_CASE("condition report JSON has stable fields") {
  const auto rep = check_existence_conditions(example1_constants(0.01, 0.01, 0.01, 0.8));
  const auto json = rep.to_json();
  CHECK(json.find("\"cond1\"") != std::string::npos);
  CHECK(json.find("\"cond1_plus\"") != std::string::npos);
  CHECK(json.find("\"cond2\"") != std::string::npos);
  CHECK(json.find("\"l1_plus_l2\"") != std::string::npos);
}
