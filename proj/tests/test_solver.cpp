#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "psikit/psikit.hpp"

using namespace psikit;

namespace {

PsiFamily constant_family(double value) {
  PsiFamily f;
  f.name = "constant";
  f.theta = ParameterDomain::real_line();
  f.observations = ParameterDomain::real_line();
  f.psi = [value](double, double) { return value; };
  return f;
}

PsiFamily without_closed_form(PsiFamily f) {
  f.two_point_closed_form = nullptr;
  return f;
}

}  // namespace

TEST_CASE("weighted psi sum evaluates and validates") {
  const auto p3 = make_power_p(3);
  const auto s = WeightedSample::uniform({0, 1, 4});

  // exact integer arithmetic inside doubles
  CHECK(psi_sum(p3, s, 0.0) == 65.0);
  CHECK(psi_sum(p3, s, 2.0) == -1.0);

  const auto narrow = make_power_p(3, ParameterDomain::open(0, 1));
  const auto inside = WeightedSample::uniform({0.25, 0.5});
  CHECK_THROWS_AS(psi_sum(narrow, inside, 2.0), DomainError);

  const auto lomax = make_lomax(1.0);
  CHECK_THROWS_AS(psi_sum(lomax, WeightedSample::uniform({-1.0}), 1.0), DomainError);
}

TEST_CASE("estimate validates the sample") {
  const auto p3 = make_power_p(3);
  CHECK_THROWS_AS(estimate(p3, WeightedSample{}), DomainError);
  CHECK_THROWS_AS(estimate(p3, WeightedSample::of({1, 2}, {1, -1})), DomainError);
  CHECK_THROWS_AS(estimate(p3, WeightedSample::of({1, 2}, {0, 0})), DomainError);
  CHECK_THROWS_AS(estimate(p3, WeightedSample::uniform({std::nan("")})), DomainError);
  CHECK_THROWS_AS(estimate(p3, WeightedSample::uniform({1}), 0.0), ParameterError);
  CHECK_THROWS_AS(estimate(p3, WeightedSample::uniform({1}), -1.0), ParameterError);
}

TEST_CASE("estimate finds exact roots on the probe ladder") {
  const auto am = make_arithmetic();

  // center of the real line is 0 and the sum vanishes there
  const auto symmetric = estimate(am, WeightedSample::uniform({-1, 1}));
  CHECK(symmetric.theta == 0.0);
  CHECK(symmetric.bracket_width == 0.0);
  CHECK(symmetric.status == SolveStatus::root_found);

  // first rightward probe lands on the mean of (1, 3) exactly
  const auto shifted = estimate(am, WeightedSample::uniform({1, 3}));
  CHECK(shifted.theta == 2.0);
  CHECK(shifted.status == SolveStatus::root_found);
}

TEST_CASE("estimate brackets generic samples") {
  const auto p3 = make_power_p(3);
  const auto s = WeightedSample::uniform({0, 1, 4});
  const auto res = estimate(p3, s, 1e-13);

  CHECK(res.theta == Catch::Approx(1.9628150402072666).margin(1e-11));
  CHECK(res.status == SolveStatus::sign_change_bracketed);
  CHECK(res.bracket_width <= 1e-12 * std::abs(res.theta) + 1e-14);

  // the reported radius really straddles the sign change
  const double pad = 2.0 * res.bracket_width + 1e-13 * (1.0 + std::abs(res.theta));
  CHECK(psi_sum(p3, s, res.theta - pad) > 0.0);
  CHECK(psi_sum(p3, s, res.theta + pad) < 0.0);

  const double oracle = testkit::oracle_estimate(p3, testkit::to_obs(s));
  CHECK(res.theta == Catch::Approx(oracle).margin(1e-10));
  CHECK(oracle == Catch::Approx(1.9628150402072666).margin(1e-12));
}

TEST_CASE("estimate honours bounded parameter domains") {
  const auto fam = make_power_p(3, ParameterDomain::open(0, 10));
  const auto s = WeightedSample::uniform({9, 9.9});
  const auto res = estimate(fam, s);
  CHECK(res.theta == Catch::Approx(9.45).margin(1e-9));

  const auto lomax = make_lomax(0.7);
  const auto heavy = WeightedSample::of({0.5, 80}, {3, 0.25});
  const double oracle = testkit::oracle_estimate(lomax, testkit::to_obs(heavy));
  CHECK(estimate(lomax, heavy).theta == Catch::Approx(oracle).margin(1e-9));
}

TEST_CASE("estimate reports missing sign changes") {
  CHECK_THROWS_AS(estimate(constant_family(1.0), WeightedSample::uniform({0})), BracketError);
  CHECK_THROWS_AS(estimate(constant_family(-1.0), WeightedSample::uniform({0})), BracketError);
  CHECK(probe_sign_change(make_power_p(3), 1.0));
  CHECK_FALSE(probe_sign_change(constant_family(2.0), 1.0));
}

TEST_CASE("estimate surfaces NaN psi values as numeric errors") {
  PsiFamily f;
  f.name = "nan";
  f.theta = ParameterDomain::real_line();
  f.observations = ParameterDomain::real_line();
  f.psi = [](double, double) { return std::nan(""); };
  CHECK_THROWS_AS(estimate(f, WeightedSample::uniform({0})), NumericError);
}

TEST_CASE("pair estimator uses the closed form and the solver consistently") {
  const auto p3 = make_power_p(3);
  const auto bare = without_closed_form(p3);
  Rng rng(404);
  for (int trial = 0; trial < 40; ++trial) {
    const double x1 = rng.uniform(-8, 8);
    const double x2 = rng.uniform(-8, 8);
    const double w1 = rng.uniform(0.05, 3);
    const double w2 = rng.uniform(0.05, 3);
    const double closed = two_point_estimate(p3, x1, w1, x2, w2);
    const double solved = two_point_estimate(bare, x1, w1, x2, w2);
    CHECK(std::abs(closed - solved) <= 1e-9 * std::max(1.0, std::abs(closed)));
  }
}

TEST_CASE("pair estimator validates the pair") {
  const auto p3 = make_power_p(3);
  CHECK_THROWS_AS(two_point_estimate(p3, 1, 0, 2, 0), DomainError);
  CHECK_THROWS_AS(two_point_estimate(p3, 1, -1, 2, 1), DomainError);
  const auto lomax = make_lomax(1.0);
  CHECK_THROWS_AS(two_point_estimate(lomax, -1, 1, 2, 1), DomainError);
}

TEST_CASE("single-observation estimates") {
  CHECK(single_estimate(make_arithmetic(), 7.0) == Catch::Approx(7.0).margin(1e-11));
  CHECK(single_estimate(make_power_p(5), -3.5) == Catch::Approx(-3.5).margin(1e-11));
  CHECK(single_estimate(make_harmonic(), 4.0) == Catch::Approx(4.0).margin(1e-11));
  CHECK(single_estimate(make_lomax(0.5), 4.0) == Catch::Approx(2.0).margin(1e-11));
}
