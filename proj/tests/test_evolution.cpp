#include "meanfield/evolution.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace meanfield;
using namespace meanfield::evolution;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> z(n);
  for (auto& v : z) v = g(rng);
  return z;
}

double norm(const std::vector<double>& z) { return std::sqrt(squared_norm(z)); }

}  // namespace

TEST_CASE("heat family identity and basic errors") {
  SpectralHeatFamily fam(8);
  std::mt19937_64 rng(1);
  const auto z = random_state(rng, 8);
  const auto same = fam.apply(z, 2.0, 2.0);
  for (std::size_t k = 0; k < z.size(); ++k)
    CHECK(same[k] == doctest::Approx(z[k]).epsilon(1e-14));
  CHECK_THROWS_AS(fam.apply(z, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("heat family with zeroed modulation reduces to the pure semigroup") {
  SpectralHeatFamily fam(4, [](double) { return 0.0; });
  std::vector<double> z = {1.0, 1.0, 1.0, 1.0};
  const auto out = fam.apply(z, 0.1, 0.0);
  // mode 1 factor is exp(-pi^2/10); recomputed directly
  CHECK(out[0] == doctest::Approx(std::exp(-kPi * kPi * 0.1)).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(std::exp(-4.0 * kPi * kPi * 0.1)).epsilon(1e-12));
}

TEST_CASE("heat family cocycle and decay") {
  SpectralHeatFamily fam(16);
  std::mt19937_64 rng(2);
  SUBCASE("cocycle residual below 1e-10") {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
      double r = u(rng), s = u(rng), t = u(rng);
      if (r > s) std::swap(r, s);
      if (s > t) std::swap(s, t);
      if (r > s) std::swap(r, s);
      const auto z = random_state(rng, 16);
      const auto two_step = fam.apply(fam.apply(z, s, r), t, s);
      const auto one_step = fam.apply(z, t, r);
      CHECK(squared_distance(two_step, one_step) < 1e-20);  // norm < 1e-10
    }
  }
  SUBCASE("decay bound with M = 1, delta = pi^2 - 1") {
    std::uniform_real_distribution<double> gap(0.0, 5.0);
    std::uniform_real_distribution<double> start(-5.0, 5.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const double s = start(rng), dt = gap(rng);
      const auto z = random_state(rng, 16);
      const auto out = fam.apply(z, s + dt, s);
      CHECK(norm(out) <= std::exp(-(kPi * kPi - 1.0) * dt) * norm(z) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("modulation integral is additive (quadrature sanity)") {
  SpectralHeatFamily fam(1);
  const double a = fam.modulation_integral(0.0, 1.3);
  const double b = fam.modulation_integral(1.3, 2.7);
  const double c = fam.modulation_integral(0.0, 2.7);
  CHECK(a + b == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("weighted shift group") {
  const double nu = 1.0;
  WeightedShiftGroup grp(nu, 50.0, 10001);

  SUBCASE("zero shift is the identity") {
    std::mt19937_64 rng(3);
    const auto u = random_state(rng, grp.nodes());
    const auto v = grp.apply(u, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(v[i] == doctest::Approx(u[i]));
  }
  SUBCASE("indicator norm ratio matches e^{-nu t} at aligned shifts") {
    std::vector<double> u(grp.nodes(), 0.0);
    const auto xs = grp.grid();
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (xs[i] >= 0.0 && xs[i] < 1.0) u[i] = 1.0;
    const double n0 = grp.weighted_norm(u);
    const auto shifted = grp.apply(u, 0.5);
    const double n1 = grp.weighted_norm(shifted);
    CHECK(n1 * n1 / (n0 * n0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-3));
  }
  SUBCASE("group law on interior smooth data") {
    WeightedShiftGroup small(2.0, 10.0, 2001);
    std::vector<double> u(small.nodes());
    const auto xs = small.grid();
    for (std::size_t i = 0; i < xs.size(); ++i) u[i] = std::exp(-xs[i] * xs[i]);
    const auto ab = small.apply(small.apply(u, 0.7), 0.3);
    const auto once = small.apply(u, 1.0);
    // compare away from the truncation boundary
    for (std::size_t i = 200; i + 200 < xs.size(); ++i)
      CHECK(ab[i] == doctest::Approx(once[i]).epsilon(1e-6));
  }
  SUBCASE("smooth norm identity within grid tolerance") {
    std::vector<double> u(grp.nodes());
    const auto xs = grp.grid();
    for (std::size_t i = 0; i < xs.size(); ++i) u[i] = std::exp(-(xs[i] - 1.0) * (xs[i] - 1.0));
    const double n0 = grp.weighted_norm(u);
    const double t = 0.3217;  // deliberately off-grid
    const double n1 = grp.weighted_norm(grp.apply(u, t));
    CHECK(n1 / n0 == doctest::Approx(std::exp(-nu * t / 2.0)).epsilon(1e-3));
  }
  SUBCASE("shift beyond the margin is rejected") {
    std::vector<double> u(grp.nodes(), 0.0);
    CHECK_THROWS_AS(grp.apply(u, 40.0), std::invalid_argument);
  }
  SUBCASE("truncation bound reported") {
    CHECK(grp.truncation_bound() == doctest::Approx(std::exp(-50.0)));
  }
}

TEST_CASE("bi-automorphy recurrence check") {
  SUBCASE("zero shifts give zero error") {
    auto spec = scalar_decay_family(1.0);
    std::vector<double> shifts = {0.0, 0.0, 0.0, 0.0};
    std::vector<std::vector<double>> probes = {{1.0}, {0.5}};
    std::vector<std::pair<double, double>> pairs = {{1.0, 0.0}, {2.0, 0.5}};
    const auto rep = check_bi_automorphy(spec, shifts, probes, pairs, 1e-12);
    for (double e : rep.errors) CHECK(e == doctest::Approx(0.0));
    CHECK(rep.subsequence_below_tol);
  }
  SUBCASE("autonomous family is shift-invariant") {
    auto spec = scalar_decay_family(0.7);
    std::vector<double> shifts = {1.0, 10.0, 100.0, 1000.0};
    std::vector<std::vector<double>> probes = {{1.0}, {-2.0}};
    std::vector<std::pair<double, double>> pairs = {{0.5, 0.0}, {3.0, 1.0}};
    const auto rep = check_bi_automorphy(spec, shifts, probes, pairs, 1e-18);
    for (double e : rep.errors) CHECK(e < 1e-20);
    CHECK(rep.subsequence_below_tol);
  }
  SUBCASE("heat family recurs along simultaneous approximation shifts") {
    auto fam = std::make_shared<const SpectralHeatFamily>(4);
    auto spec = heat_family_spec(fam);
    // 2 pi q with q from the continued fraction of pi: q pi nearly integer
    std::vector<double> shifts = {2 * kPi * 1, 2 * kPi * 7, 2 * kPi * 113,
                                  2 * kPi * 33102};
    std::mt19937_64 rng(5);
    std::vector<std::vector<double>> probes = {random_state(rng, 4),
                                               random_state(rng, 4)};
    std::vector<std::pair<double, double>> pairs = {{0.3, 0.0}, {1.0, 0.4}};
    const auto rep = check_bi_automorphy(spec, shifts, probes, pairs, 1e-4);
    // errors decrease along the reported subsequence
    REQUIRE(rep.subsequence.size() >= 2);
    for (std::size_t i = 1; i < rep.subsequence.size(); ++i)
      CHECK(rep.errors[rep.subsequence[i]] < rep.errors[rep.subsequence[i - 1]]);
    CHECK(rep.subsequence_below_tol);
    const auto json = rep.to_json();
    CHECK(json.find("\"errors\"") != std::string::npos);
    CHECK(json.find("\"subsequence\"") != std::string::npos);
  }
  SUBCASE("t < s pairs are rejected") {
    auto spec = scalar_decay_family(1.0);
    std::vector<double> shifts = {1.0};
    std::vector<std::vector<double>> probes = {{1.0}};
    std::vector<std::pair<double, double>> pairs = {{0.0, 1.0}};
    CHECK_THROWS_AS(check_bi_automorphy(spec, shifts, probes, pairs, 1.0),
                    std::invalid_argument);
  }
}
