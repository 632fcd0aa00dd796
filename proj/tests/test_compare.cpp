#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "psikit/psikit.hpp"

using namespace psikit;

TEST_CASE("comparative function construction") {
  const auto diff = make_difference();
  CHECK(diff.eval(3.0, 3.0) == 0.0);
  CHECK(diff.eval(5.0, 2.0) == 3.0);

  const auto ratio = make_ratio();
  CHECK(ratio.eval(6.0, 3.0) == 2.0);
  CHECK(ratio.domain.lower == 0.0);

  // an open interval with lower endpoint zero never contains zero
  CHECK_NOTHROW(make_ratio(ParameterDomain::open(0.0, 5.0)));
  CHECK_NOTHROW(make_ratio(ParameterDomain::open(1.0, 5.0)));
  CHECK_THROWS_AS(make_ratio(ParameterDomain::open(-1.0, 5.0)), DomainError);
  CHECK_THROWS_AS(make_ratio(ParameterDomain::real_line()), DomainError);
}

TEST_CASE("worst case of a family against itself is zero") {
  const auto p3 = make_power_p(3);
  const auto wc = two_point_worst_case(p3, p3, make_difference(), {-1.0, 0.0, 2.0}, 5);
  CHECK(wc.value == 0.0);
}

TEST_CASE("worst case reproduces the sharp mean-ratio constant") {
  const auto am = make_arithmetic(ParameterDomain::positive_half_line());
  const auto hm = make_harmonic();

  SECTION("pair (1, 4)") {
    const auto wc = two_point_worst_case(am, hm, make_ratio(), {1.0, 4.0}, 100);
    CHECK(wc.value == Catch::Approx(1.5625).margin(1e-12));
    CHECK(wc.x == 1.0);
    CHECK(wc.y == 4.0);
    CHECK(wc.k == 1);
    CHECK(wc.m == 1);
  }

  SECTION("pair (2, 3)") {
    const auto wc = two_point_worst_case(am, hm, make_ratio(), {2.0, 3.0}, 100);
    CHECK(wc.value == Catch::Approx(25.0 / 24.0).margin(1e-12));
    CHECK(wc.k == 1);
    CHECK(wc.m == 1);
  }

  SECTION("pair (1, 100)") {
    const auto wc = two_point_worst_case(am, hm, make_ratio(), {1.0, 100.0}, 100);
    CHECK(wc.value == Catch::Approx(25.5025).margin(1e-9));
    CHECK(wc.x == 1.0);
    CHECK(wc.y == 100.0);
    CHECK(wc.k == 1);
    CHECK(wc.m == 1);
  }
}

TEST_CASE("worst case carries the smallest replication witness") {
  // with the interior point in the grid the same maximum appears at larger
  // replications too; the first, smallest witness must be kept
  const auto am = make_arithmetic(ParameterDomain::positive_half_line());
  const auto hm = make_harmonic();
  const auto wc = two_point_worst_case(am, hm, make_ratio(), {1.0, 2.5, 4.0}, 12);
  CHECK(wc.value == Catch::Approx(1.5625).margin(1e-9));
  CHECK(wc.k + wc.m == 2);
}

TEST_CASE("worst case validates inputs") {
  const auto p3 = make_power_p(3);
  CHECK_THROWS_AS(two_point_worst_case(p3, p3, make_difference(), {}, 5), ParameterError);
  CHECK_THROWS_AS(two_point_worst_case(p3, p3, make_difference(), {1.0}, 0), ParameterError);

  const auto hm = make_harmonic();
  CHECK_THROWS_AS(two_point_worst_case(hm, hm, make_difference(), {-1.0, 2.0}, 5),
                  DomainError);

  // estimates of these grid points are negative, outside the ratio domain
  CHECK_THROWS_AS(
      two_point_worst_case(p3, p3, make_ratio(ParameterDomain::positive_half_line()),
                           {-2.0, -1.0}, 5),
      DomainError);
}

TEST_CASE("sample sweep confirms the mean-ratio bound") {
  const auto am = make_arithmetic(ParameterDomain::positive_half_line());
  const auto hm = make_harmonic();
  const double bound = schweitzer_bound(1.0, 4.0);

  Rng rng(606);
  std::vector<WeightedSample> samples;
  for (int i = 0; i < 500; ++i) {
    WeightedSample s;
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 5));
    for (int j = 0; j < n; ++j) s.points.push_back({rng.uniform(1.0, 4.0), 1.0});
    samples.push_back(s);
  }

  CHECK(general_sample_check(am, hm, make_ratio(), samples, bound).empty());

  // an impossible threshold flags every sample
  const auto all = general_sample_check(am, am, make_difference(), samples, -1.0);
  CHECK(all.size() == samples.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all[i].index == i);
    CHECK(all[i].value == 0.0);
  }

  CHECK_THROWS_AS(general_sample_check(am, hm, make_ratio(), samples, bound, -1e-9),
                  ParameterError);
}

TEST_CASE("sharp constant closed forms") {
  CHECK(schweitzer_bound(1.0, 4.0) == 1.5625);
  CHECK(schweitzer_bound(2.0, 3.0) == Catch::Approx(25.0 / 24.0).epsilon(1e-15));
  CHECK(schweitzer_bound(1.0, 100.0) == Catch::Approx(25.5025).epsilon(1e-15));

  for (auto [a, b] : {std::pair{1.0, 4.0}, {2.0, 3.0}, {1.0, 100.0}, {0.3, 17.0}}) {
    CHECK(schweitzer_interior_value(a, b) ==
          Catch::Approx(schweitzer_bound(a, b)).epsilon(1e-13));
  }

  CHECK_THROWS_AS(schweitzer_bound(4.0, 1.0), ParameterError);
  CHECK_THROWS_AS(schweitzer_bound(2.0, 2.0), ParameterError);
  CHECK_THROWS_AS(schweitzer_bound(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(schweitzer_bound(-1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(schweitzer_bound(1.0, std::numeric_limits<double>::infinity()),
                  ParameterError);
}

TEST_CASE("grid oracle stays below the closed constant") {
  // mixing weight t on a, 1 - t on b: the ratio of the two means peaks at
  // one half with value exactly the closed constant
  const double a = 1.0, b = 4.0;
  const double closed = schweitzer_bound(a, b);
  double best = 0.0;
  for (int i = 1; i < 4096; ++i) {
    const double t = static_cast<double>(i) / 4096.0;
    const double ratio = (t * a + (1 - t) * b) * (t / a + (1 - t) / b);
    CHECK(ratio <= closed + 1e-12);
    best = std::max(best, ratio);
  }
  CHECK(best == Catch::Approx(closed).margin(1e-6));
}
