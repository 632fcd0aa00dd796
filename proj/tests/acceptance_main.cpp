// Acceptance gate: every release-blocking property on one line each.
// Exit code 0 only when all of them hold.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "psikit/psikit.hpp"

using namespace psikit;

namespace {

int failed = 0;

void line(bool ok, const std::string& name, const std::string& detail) {
  std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failed;
}

std::string fmt(double v) {
  char b[48];
  std::snprintf(b, sizeof(b), "%.3g", v);
  return b;
}

struct DrawCase {
  PsiFamily fam;
  double lo, hi;
};

std::vector<DrawCase> closed_form_pool() {
  std::vector<DrawCase> pool;
  pool.push_back({make_power_p(3), -10.0, 10.0});
  pool.push_back({make_lomax(1.3), 0.1, 40.0});
  pool.push_back({make_arithmetic(), -25.0, 25.0});
  pool.push_back({make_harmonic(), 0.1, 40.0});
  return pool;
}

std::vector<DrawCase> full_pool() {
  auto pool = closed_form_pool();
  pool.push_back({make_power_p(5), -5.0, 5.0});
  pool.push_back({make_power_p(7), -3.0, 3.0});
  pool.push_back({make_lomax(0.5), 0.1, 40.0});
  return pool;
}

WeightedSample draw_sample(Rng& rng, const DrawCase& c, int n) {
  WeightedSample s;
  for (int i = 0; i < n; ++i) {
    s.points.push_back({rng.uniform(c.lo, c.hi), rng.uniform(0.05, 4.0)});
  }
  return s;
}

// 1: the two-observation closed forms against plain scan-and-bisect.
void check_closed_forms() {
  Rng rng(11);
  double worst = 0.0;
  long long trials = 0;
  auto run_pair = [&](const PsiFamily& fam, double lo, double hi) {
    const double x1 = rng.uniform(lo, hi);
    const double x2 = rng.uniform(lo, hi);
    const double w1 = rng.uniform(0.05, 4.0);
    const double w2 = rng.uniform(0.05, 4.0);
    const double c = fam.two_point_closed_form(x1, w1, x2, w2);
    const double o = testkit::oracle_estimate(fam, {{x1, w1}, {x2, w2}});
    worst = std::max(worst, std::abs(c - o) / std::max(1.0, std::abs(c)));
    ++trials;
  };
  for (long long p : {3LL, 5LL, 7LL}) {
    const auto fam = make_power_p(p);
    for (int i = 0; i < 1000; ++i) run_pair(fam, -10.0, 10.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const auto fam = make_lomax(rng.uniform(0.01, 10.0));
    run_pair(fam, 0.01, 100.0);
  }
  line(worst <= 1e-9, "closed forms match independent bisection",
       std::to_string(trials) + " pairs, max relative gap " + fmt(worst));
}

// 2: the estimator never leaves the range of its single-observation values.
void check_containment() {
  Rng rng(22);
  const auto pool = full_pool();
  long long violations = 0;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto& c = pool[static_cast<std::size_t>(i) % pool.size()];
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 7));
    const auto s = draw_sample(rng, c, n);
    const double theta = estimate(c.fam, s).theta;
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (const auto& p : s.points) {
      const double v = single_estimate(c.fam, p.value);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    const double slack = 1e-9 * std::max(1.0, std::abs(theta));
    const double breach = std::max(mn - theta, theta - mx);
    worst = std::max(worst, breach);
    if (breach > slack) ++violations;
  }
  line(violations == 0, "estimates stay between the extreme single-observation values",
       "10000 samples, worst signed breach " + fmt(worst));
}

// 3: enclosures contain the direct estimate and tighten as the cap grows.
void check_enclosures() {
  Rng rng(33);
  long long outside = 0;
  long long loosened = 0;
  double worst_gap = -std::numeric_limits<double>::infinity();
  std::uint64_t matrices = 0;
  for (int inst = 0; inst < 200; ++inst) {
    PsiFamily fam = make_power_p(3);
    double lo = -10.0, hi = 10.0;
    switch (inst % 4) {
      case 0:
        fam = make_power_p(3);
        break;
      case 1:
        fam = make_power_p(5);
        lo = -6.0;
        hi = 6.0;
        break;
      case 2:
        fam = make_power_p(7);
        lo = -4.0;
        hi = 4.0;
        break;
      default:
        fam = make_lomax(rng.uniform(0.2, 5.0));
        lo = 0.1;
        hi = 50.0;
        break;
    }
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 2));
    std::vector<double> xs;
    std::vector<long long> k_vec;
    std::vector<double> weights;
    for (int i = 0; i < n; ++i) {
      xs.push_back(rng.uniform(lo, hi));
      k_vec.push_back(1 + rng.uniform_int(0, 2));
      weights.push_back(static_cast<double>(k_vec.back()));
    }
    const double direct = estimate(fam, WeightedSample::of(xs, weights)).theta;
    const double slack = 1e-8 * std::max(1.0, std::abs(direct));
    double prev_lower = -std::numeric_limits<double>::infinity();
    double prev_upper = std::numeric_limits<double>::infinity();
    for (long long cap : {1LL, 2LL, 4LL}) {
      EncloseOptions opt;
      opt.k_limit = cap;
      opt.workers = 2;
      const auto enc = enclose(fam, xs, k_vec, opt);
      matrices += enc.matrices_evaluated;
      const double gap = std::max(enc.lower - direct, direct - enc.upper);
      worst_gap = std::max(worst_gap, gap);
      if (gap > slack) ++outside;
      if (enc.lower < prev_lower - 1e-10 || enc.upper > prev_upper + 1e-10) ++loosened;
      prev_lower = enc.lower;
      prev_upper = enc.upper;
    }
  }
  line(outside == 0 && loosened == 0,
       "enclosures contain the direct estimate and tighten with the cap",
       "200 instances, " + std::to_string(matrices) + " matrices, worst gap " +
           fmt(worst_gap));
}

// 4: with two observations the enclosure is a single point.
void check_pair_collapse() {
  Rng rng(44);
  const auto pool = closed_form_pool();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto& c = pool[static_cast<std::size_t>(i) % pool.size()];
    const std::vector<double> xs{rng.uniform(c.lo, c.hi), rng.uniform(c.lo, c.hi)};
    const std::vector<long long> k_vec{1 + rng.uniform_int(0, 2), 1 + rng.uniform_int(0, 2)};
    EncloseOptions opt;
    opt.k_limit = 1;
    const auto enc = enclose(c.fam, xs, k_vec, opt);
    worst = std::max(worst, enc.upper - enc.lower);
  }
  line(worst <= 2e-12, "two-observation enclosures collapse to a point",
       "100 instances, widest interval " + fmt(worst));
}

// 5: the three-observation candidate family equals a brute-force filter.
void check_enumeration() {
  bool ok = true;
  std::string sizes;
  for (long long cap = 1; cap <= 3; ++cap) {
    const auto enumerated = testkit::canonical_set(collect_members(3, {1, 1, 1}, cap));
    const auto brute = testkit::brute_canonical_members_3(cap);
    ok = ok && enumerated == brute;
    if (!sizes.empty()) sizes += "/";
    sizes += std::to_string(enumerated.size());
  }
  line(ok, "three-observation candidates match the brute-force filter",
       "caps 1..3, canonical counts " + sizes);
}

// 6: the worst mean ratio over replicated pairs equals the sharp constant,
// and no random sample beats it.
void check_sharp_constant() {
  const auto am = make_arithmetic(ParameterDomain::positive_half_line());
  const auto hm = make_harmonic();
  bool ok = true;
  double worst_gap = 0.0;
  long long violations = 0;
  Rng rng(66);
  for (auto [a, b] : {std::pair{1.0, 4.0}, {2.0, 3.0}, {1.0, 100.0}}) {
    const double closed = schweitzer_bound(a, b);
    const auto wc = two_point_worst_case(am, hm, make_ratio(), {a, b}, 100);
    worst_gap = std::max(worst_gap, std::abs(wc.value - closed));
    ok = ok && std::abs(wc.value - closed) <= 1e-9;
    ok = ok && wc.x == a && wc.y == b && wc.k == 1 && wc.m == 1;

    for (int chunk = 0; chunk < 10; ++chunk) {
      std::vector<WeightedSample> samples;
      samples.reserve(10000);
      for (int i = 0; i < 10000; ++i) {
        WeightedSample s;
        const int n = 1 + static_cast<int>(rng.uniform_int(0, 7));
        for (int j = 0; j < n; ++j) {
          s.points.push_back({rng.uniform(a, b), rng.uniform(0.1, 3.0)});
        }
        samples.push_back(std::move(s));
      }
      violations +=
          static_cast<long long>(general_sample_check(am, hm, make_ratio(), samples, closed).size());
    }
  }
  line(ok && violations == 0, "worst mean ratio equals the sharp constant",
       "3 interval pairs, closed-form gap " + fmt(worst_gap) + ", " +
           std::to_string(violations) + " of 300000 samples above the bound");
}

// 7: replication search lands inside random target intervals.
void check_sensitivity() {
  const auto p3 = make_power_p(3);
  Rng rng(77);
  int hits = 0;
  long long largest = 0;
  for (int i = 0; i < 100; ++i) {
    const double u = rng.uniform(0.05, 0.944);
    const double v = u + rng.uniform(0.001, 0.005);
    const auto hit = sensitivity_search(p3, 0.0, 1.0, u, v, 10000);
    if (!hit) continue;
    const double t = two_point_estimate(p3, 0.0, static_cast<double>(hit->k), 1.0,
                                        static_cast<double>(hit->m));
    if (t > u && t < v && hit->k + hit->m <= 10000) {
      ++hits;
      largest = std::max(largest, hit->k + hit->m);
    }
  }
  line(hits == 100, "replication search hits random target intervals",
       std::to_string(hits) + "/100 intervals, largest replication total " +
           std::to_string(largest));
}

// 8: permutation, weight-scale, and candidate-scale invariance.
void check_invariances() {
  Rng rng(88);
  const auto pool = full_pool();
  double worst = 0.0;

  for (int i = 0; i < 1000; ++i) {
    const auto& c = pool[static_cast<std::size_t>(i) % pool.size()];
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 6));
    auto s = draw_sample(rng, c, n);
    const double theta = estimate(c.fam, s).theta;

    auto shuffled = s;
    for (int j = n - 1; j > 0; --j) {
      const auto k = static_cast<std::size_t>(rng.uniform_int(0, j));
      std::swap(shuffled.points[static_cast<std::size_t>(j)], shuffled.points[k]);
    }
    const double theta_perm = estimate(c.fam, shuffled).theta;

    auto rescaled = s;
    const double factor = rng.uniform(0.1, 10.0);
    for (auto& p : rescaled.points) p.weight *= factor;
    const double theta_scaled = estimate(c.fam, rescaled).theta;

    const double scale = std::max(1.0, std::abs(theta));
    worst = std::max(worst, std::abs(theta_perm - theta) / scale);
    worst = std::max(worst, std::abs(theta_scaled - theta) / scale);
  }

  const auto closed = closed_form_pool();
  std::vector<std::vector<PairMatrix>> members;
  members.push_back(collect_members(3, {1, 1, 1}, 2));
  members.push_back(collect_members(4, {1, 1, 1, 1}, 2));
  for (int i = 0; i < 1000; ++i) {
    const auto& c = closed[static_cast<std::size_t>(i) % closed.size()];
    const auto& pool_n = members[static_cast<std::size_t>(i % 2)];
    const int n = i % 2 == 0 ? 3 : 4;
    std::vector<double> xs;
    for (int j = 0; j < n; ++j) xs.push_back(rng.uniform(c.lo, c.hi));
    const auto& m = pool_n[static_cast<std::size_t>(rng.uniform_int(
        0, static_cast<std::int64_t>(pool_n.size()) - 1))];
    const auto big = scaled(m, 2 + rng.uniform_int(0, 2));
    const double dmin = std::abs(matrix_min_value(c.fam, xs, big) -
                                 matrix_min_value(c.fam, xs, m));
    const double dmax = std::abs(matrix_max_value(c.fam, xs, big) -
                                 matrix_max_value(c.fam, xs, m));
    worst = std::max(worst, std::max(dmin, dmax));
  }

  line(worst <= 1e-10, "permutation, weight-scale, and candidate-scale invariance",
       "3000 trials, worst relative deviation " + fmt(worst));
}

// 9: same-seed verification reports are byte-identical and enclosure bounds
// do not depend on the worker count.
void check_determinism() {
  const auto r1 = run_verification(424242, false);
  const auto r2 = run_verification(424242, false);
  const std::string j1 = render_verification_json(r1);
  const std::string j2 = render_verification_json(r2);
  bool ok = j1 == j2 && r1.all_passed;

  const auto p3 = make_power_p(3);
  const std::vector<double> xs{0.0, 1.0, 4.0, 2.5};
  for (int workers : {2, 4, 8}) {
    EncloseOptions seq;
    seq.k_limit = 3;
    EncloseOptions par = seq;
    par.workers = workers;
    const auto a = enclose(p3, xs, seq);
    const auto b = enclose(p3, xs, par);
    ok = ok && a.lower == b.lower && a.upper == b.upper &&
         a.lower_witness.entries == b.lower_witness.entries &&
         a.upper_witness.entries == b.upper_witness.entries;
  }
  line(ok, "verification reports and enclosure bounds are deterministic",
       "two seeded runs, worker counts 1/2/4/8");
}

}  // namespace

int main() {
  check_closed_forms();
  check_containment();
  check_enclosures();
  check_pair_collapse();
  check_enumeration();
  check_sharp_constant();
  check_sensitivity();
  check_invariances();
  check_determinism();
  if (failed == 0) {
    std::printf("all 9 acceptance checks passed\n");
  } else {
    std::printf("%d acceptance check(s) failed\n", failed);
  }
  return failed == 0 ? 0 : 1;
}
