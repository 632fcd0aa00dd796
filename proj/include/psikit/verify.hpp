#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "compare.hpp"
#include "enclosure.hpp"
#include "enumerate.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "pair_matrix.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "sensitivity.hpp"
#include "solver.hpp"

namespace psikit {

struct PropertyResult {
  std::string name;
  long long trials = 0;
  long long failures = 0;
  std::string detail;
  bool passed() const { return failures == 0; }
};

struct VerificationReport {
  std::uint64_t seed = 0;
  bool fault_injected = false;
  std::vector<PropertyResult> properties;
  bool all_passed = true;
};

namespace verify_detail {

struct FamilyCase {
  PsiFamily family;
  double lo, hi;  // observation draw range inside X
};

inline std::vector<FamilyCase> family_pool() {
  std::vector<FamilyCase> out;
  out.push_back({make_power_p(3), -10.0, 10.0});
  out.push_back({make_power_p(5), -5.0, 5.0});
  out.push_back({make_power_p(7), -3.0, 3.0});
  out.push_back({make_lomax(0.5), 0.1, 40.0});
  out.push_back({make_lomax(1.5), 0.1, 40.0});
  out.push_back({make_arithmetic(), -25.0, 25.0});
  out.push_back({make_harmonic(), 0.1, 40.0});
  return out;
}

inline WeightedSample draw_sample(Rng& rng, const FamilyCase& fc, int n,
                                  bool allow_zero_weights = true) {
  WeightedSample s;
  s.points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(fc.lo, fc.hi);
    double w = rng.uniform(0.05, 4.0);
    if (allow_zero_weights && rng.unit() < 0.1) w = 0.0;
    s.points.push_back({x, w});
  }
  bool any = false;
  for (const auto& p : s.points) any = any || p.weight > 0.0;
  if (!any) s.points[0].weight = 1.0;
  return s;
}

inline std::string deviation_detail(double worst) {
  return "max deviation " + format_number(worst);
}

// Closed-form two-point values against the bisection solver.
inline PropertyResult check_closed_forms(std::uint64_t seed) {
  PropertyResult r;
  r.name = "two-point-closed-form-vs-solver";
  Rng rng(seed ^ 0x1001);
  double worst = 0.0;
  for (const auto& fc : family_pool()) {
    if (!fc.family.two_point_closed_form) continue;
    for (int t = 0; t < 150; ++t) {
      ++r.trials;
      const double x1 = rng.uniform(fc.lo, fc.hi);
      const double x2 = rng.uniform(fc.lo, fc.hi);
      double w1 = rng.uniform(0.05, 4.0);
      double w2 = rng.uniform(0.05, 4.0);
      if (rng.unit() < 0.15) w1 = 0.0;
      const double closed = fc.family.two_point_closed_form(x1, w1, x2, w2);
      WeightedSample s;
      s.points = {{x1, w1}, {x2, w2}};
      const double solved = estimate(fc.family, s, 1e-13).theta;
      const double dev = std::abs(closed - solved) / std::max(1.0, std::abs(closed));
      worst = std::max(worst, dev);
      if (dev > 1e-9) ++r.failures;
    }
  }
  r.detail = deviation_detail(worst);
  return r;
}

inline PropertyResult check_permutation_invariance(std::uint64_t seed) {
  PropertyResult r;
  r.name = "permutation-invariance";
  Rng rng(seed ^ 0x1002);
  const auto pool = family_pool();
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    ++r.trials;
    const auto& fc = pool[static_cast<std::size_t>(rng.uniform_int(0, 6))];
    const int n = static_cast<int>(rng.uniform_int(2, 7));
    WeightedSample s = draw_sample(rng, fc, n);
    const double a = estimate(fc.family, s).theta;
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_int(0, i));
      std::swap(s.points[static_cast<std::size_t>(i)], s.points[static_cast<std::size_t>(j)]);
    }
    const double b = estimate(fc.family, s).theta;
    const double dev = std::abs(a - b) / std::max(1.0, std::abs(a));
    worst = std::max(worst, dev);
    if (dev > 1e-10) ++r.failures;
  }
  r.detail = deviation_detail(worst);
  return r;
}

inline PropertyResult check_weight_scale_invariance(std::uint64_t seed) {
  PropertyResult r;
  r.name = "weight-scale-invariance";
  Rng rng(seed ^ 0x1003);
  const auto pool = family_pool();
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    ++r.trials;
    const auto& fc = pool[static_cast<std::size_t>(rng.uniform_int(0, 6))];
    const int n = static_cast<int>(rng.uniform_int(2, 7));
    WeightedSample s = draw_sample(rng, fc, n);
    const double a = estimate(fc.family, s).theta;
    const double c = rng.uniform(0.1, 10.0);
    WeightedSample scaled_sample = s;
    for (auto& p : scaled_sample.points) p.weight *= c;
    const double b = estimate(fc.family, scaled_sample).theta;
    const double dev = std::abs(a - b) / std::max(1.0, std::abs(a));
    worst = std::max(worst, dev);
    if (dev > 1e-10) ++r.failures;
  }
  r.detail = deviation_detail(worst);
  return r;
}

// Estimator of a concatenation lies between the smallest and largest
// estimator of the parts, for a random partition into groups.
inline PropertyResult check_mean_type_containment(std::uint64_t seed) {
  PropertyResult r;
  r.name = "mean-type-containment";
  Rng rng(seed ^ 0x1004);
  const auto pool = family_pool();
  double worst = 0.0;
  for (int t = 0; t < 400; ++t) {
    ++r.trials;
    const auto& fc = pool[static_cast<std::size_t>(rng.uniform_int(0, 6))];
    const int n = static_cast<int>(rng.uniform_int(2, 8));
    WeightedSample s = draw_sample(rng, fc, n, false);
    const int groups = static_cast<int>(rng.uniform_int(1, n));
    std::vector<WeightedSample> parts(static_cast<std::size_t>(groups));
    for (int i = 0; i < n; ++i) {
      const auto g = static_cast<std::size_t>(rng.uniform_int(0, groups - 1));
      parts[g].points.push_back(s.points[static_cast<std::size_t>(i)]);
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& part : parts) {
      if (part.points.empty()) continue;
      const double v = estimate(fc.family, part).theta;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double whole = estimate(fc.family, s).theta;
    const double slack = 1e-9 * std::max(1.0, std::abs(whole));
    const double breach = std::max(lo - whole, whole - hi);
    worst = std::max(worst, breach);
    if (breach > slack) ++r.failures;
  }
  r.detail = "max containment breach " + format_number(worst);
  return r;
}

inline PropertyResult check_sign_bracket(std::uint64_t seed) {
  PropertyResult r;
  r.name = "sign-bracket-validity";
  Rng rng(seed ^ 0x1005);
  const auto pool = family_pool();
  for (int t = 0; t < 300; ++t) {
    ++r.trials;
    const auto& fc = pool[static_cast<std::size_t>(rng.uniform_int(0, 6))];
    const int n = static_cast<int>(rng.uniform_int(1, 6));
    WeightedSample s = draw_sample(rng, fc, n);
    const auto res = estimate(fc.family, s);
    double scale = 0.0;
    for (const auto& p : s.points) {
      scale += p.weight * std::abs(fc.family.psi(p.value, res.theta == 0.0 ? 1e-3 : res.theta));
    }
    const double noise = 1e-12 * (1.0 + scale);
    const double left = res.theta - res.bracket_width;
    const double right = res.theta + res.bracket_width;
    bool ok = true;
    if (fc.family.theta.contains(left) && psi_sum(fc.family, s, left) < -noise) ok = false;
    if (fc.family.theta.contains(right) && psi_sum(fc.family, s, right) > noise) ok = false;
    if (!ok) ++r.failures;
  }
  r.detail = "psi sum signs checked at both bracket ends";
  return r;
}

inline PropertyResult check_enclosure_containment(std::uint64_t seed) {
  PropertyResult r;
  r.name = "enclosure-containment";
  Rng rng(seed ^ 0x1006);
  std::vector<FamilyCase> pool;
  pool.push_back({make_power_p(3), -10.0, 10.0});
  pool.push_back({make_lomax(1.5), 0.1, 40.0});
  pool.push_back({make_arithmetic(), -25.0, 25.0});
  pool.push_back({make_harmonic(), 0.1, 40.0});
  double worst = 0.0;
  for (int t = 0; t < 24; ++t) {
    ++r.trials;
    const auto& fc = pool[static_cast<std::size_t>(rng.uniform_int(0, 3))];
    const int n = static_cast<int>(rng.uniform_int(3, 4));
    std::vector<double> xs;
    std::vector<long long> k_vec;
    WeightedSample direct;
    for (int i = 0; i < n; ++i) {
      xs.push_back(rng.uniform(fc.lo, fc.hi));
      k_vec.push_back(rng.uniform_int(1, 3));
      direct.points.push_back({xs.back(), static_cast<double>(k_vec.back())});
    }
    EncloseOptions opt;
    opt.k_limit = static_cast<long long>(rng.uniform_int(1, 2));
    const Enclosure e = enclose(fc.family, xs, k_vec, opt);
    const double theta = estimate(fc.family, direct).theta;
    const double slack = 1e-9 * std::max(1.0, std::abs(theta));
    const double breach = std::max({e.lower - theta, theta - e.upper, e.lower - e.upper});
    worst = std::max(worst, breach);
    if (breach > slack) ++r.failures;
  }
  r.detail = "max containment breach " + format_number(worst);
  return r;
}

inline PropertyResult check_enclosure_monotonicity(std::uint64_t seed) {
  PropertyResult r;
  r.name = "enclosure-monotonicity";
  Rng rng(seed ^ 0x1007);
  std::vector<FamilyCase> pool;
  pool.push_back({make_power_p(3), -10.0, 10.0});
  pool.push_back({make_harmonic(), 0.1, 40.0});
  for (int t = 0; t < 12; ++t) {
    ++r.trials;
    const auto& fc = pool[static_cast<std::size_t>(rng.uniform_int(0, 1))];
    const int n = static_cast<int>(rng.uniform_int(3, 4));
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) xs.push_back(rng.uniform(fc.lo, fc.hi));
    double last_lower = -std::numeric_limits<double>::infinity();
    double last_upper = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (long long cap = 1; cap <= 3; ++cap) {
      EncloseOptions opt;
      opt.k_limit = cap;
      const Enclosure e = enclose(fc.family, xs, opt);
      if (e.lower < last_lower - 1e-12 || e.upper > last_upper + 1e-12) ok = false;
      last_lower = e.lower;
      last_upper = e.upper;
    }
    if (!ok) ++r.failures;
  }
  r.detail = "bounds tighten as the scale cap grows";
  return r;
}

inline PropertyResult check_pair_collapse(std::uint64_t seed) {
  PropertyResult r;
  r.name = "two-observation-collapse";
  Rng rng(seed ^ 0x1008);
  const auto pool = family_pool();
  double worst = 0.0;
  for (int t = 0; t < 60; ++t) {
    ++r.trials;
    const auto& fc = pool[static_cast<std::size_t>(rng.uniform_int(0, 6))];
    const std::vector<double> xs = {rng.uniform(fc.lo, fc.hi), rng.uniform(fc.lo, fc.hi)};
    const std::vector<long long> k_vec = {rng.uniform_int(1, 3), rng.uniform_int(1, 3)};
    const Enclosure e = enclose(fc.family, xs, k_vec, {});
    const double direct = two_point_estimate(fc.family, xs[0], static_cast<double>(k_vec[0]),
                                             xs[1], static_cast<double>(k_vec[1]));
    const double dev =
        std::max(std::abs(e.lower - direct), std::abs(e.upper - direct));
    worst = std::max(worst, dev);
    if (dev > 2e-12 * std::max(1.0, std::abs(direct))) ++r.failures;
  }
  r.detail = deviation_detail(worst);
  return r;
}

// Enumerated three-observation members against a brute-force filter.
inline PropertyResult check_three_member_enumeration(std::uint64_t) {
  PropertyResult r;
  r.name = "three-observation-enumeration";
  const std::vector<long long> unit = {1, 1, 1};
  const long long cap = 2;
  std::set<std::vector<long long>> enumerated;
  for (const auto& m : collect_members(3, unit, cap)) {
    enumerated.insert(canonical_entries(m));
  }
  std::set<std::vector<long long>> brute;
  for (long long e01 = 0; e01 <= cap; ++e01)
    for (long long e02 = 0; e02 <= cap; ++e02)
      for (long long e10 = 0; e10 <= cap; ++e10)
        for (long long e12 = 0; e12 <= cap; ++e12)
          for (long long e20 = 0; e20 <= cap; ++e20)
            for (long long e21 = 0; e21 <= cap; ++e21) {
              PairMatrix m(3, 1);
              m.at(0, 1) = e01;
              m.at(0, 2) = e02;
              m.at(1, 0) = e10;
              m.at(1, 2) = e12;
              m.at(2, 0) = e20;
              m.at(2, 1) = e21;
              const long long r0 = e01 + e02;
              if (r0 < 1 || r0 != e10 + e12 || r0 != e20 + e21) continue;
              m.scale = r0;
              if (!validate_member(m, unit)) continue;
              brute.insert(canonical_entries(m));
            }
  r.trials = static_cast<long long>(brute.size());
  r.failures = enumerated == brute ? 0 : 1;
  r.detail = "enumerated " + std::to_string(enumerated.size()) + ", brute force " +
             std::to_string(brute.size());
  return r;
}

inline PropertyResult check_matrix_scale_invariance(std::uint64_t seed) {
  PropertyResult r;
  r.name = "matrix-scale-invariance";
  Rng rng(seed ^ 0x1009);
  const PsiFamily family = make_power_p(3);
  const std::vector<long long> unit4 = {1, 1, 1, 1};
  const auto members = collect_members(4, unit4, 2);
  double worst = 0.0;
  for (int t = 0; t < 150; ++t) {
    ++r.trials;
    const auto& m =
        members[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(members.size()) - 1))];
    const long long c = rng.uniform_int(2, 4);
    const PairMatrix big = scaled(m, c);
    std::vector<double> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(rng.uniform(-10.0, 10.0));
    const double dev =
        std::max(std::abs(matrix_min_value(family, xs, m) - matrix_min_value(family, xs, big)),
                 std::abs(matrix_max_value(family, xs, m) - matrix_max_value(family, xs, big)));
    worst = std::max(worst, dev);
    if (dev > 1e-10) ++r.failures;
    if (!validate_member(big, unit4)) ++r.failures;
  }
  r.detail = deviation_detail(worst);
  return r;
}

inline PropertyResult check_comparative_monotonicity(std::uint64_t seed) {
  PropertyResult r;
  r.name = "comparative-monotonicity";
  Rng rng(seed ^ 0x100a);
  const auto diff = make_difference();
  const auto ratio = make_ratio();
  for (int t = 0; t < 1000; ++t) {
    ++r.trials;
    bool ok = true;
    {
      const double s1 = rng.uniform(-20.0, 20.0);
      const double s2 = s1 + rng.uniform(0.001, 5.0);
      const double t1 = rng.uniform(-20.0, 20.0);
      const double t2 = t1 + rng.uniform(0.001, 5.0);
      if (diff.eval(s1, t1) > diff.eval(s2, t1)) ok = false;
      if (diff.eval(s1, t1) < diff.eval(s1, t2)) ok = false;
    }
    {
      const double s1 = rng.uniform(0.01, 20.0);
      const double s2 = s1 + rng.uniform(0.001, 5.0);
      const double t1 = rng.uniform(0.01, 20.0);
      const double t2 = t1 + rng.uniform(0.001, 5.0);
      if (ratio.eval(s1, t1) > ratio.eval(s2, t1)) ok = false;
      if (ratio.eval(s1, t1) < ratio.eval(s1, t2)) ok = false;
    }
    if (!ok) ++r.failures;
  }
  r.detail = "difference and ratio move the right way in each argument";
  return r;
}

inline PropertyResult check_schweitzer(std::uint64_t) {
  PropertyResult r;
  r.name = "schweitzer-kantorovich";
  const ParameterDomain positive = ParameterDomain::positive_half_line();
  const PsiFamily am = make_arithmetic(positive);
  const PsiFamily hm = make_harmonic();
  const auto ratio = make_ratio();
  double worst = 0.0;
  const double pairs[3][2] = {{1.0, 4.0}, {2.0, 3.0}, {1.0, 100.0}};
  for (const auto& p : pairs) {
    ++r.trials;
    const double closed = schweitzer_bound(p[0], p[1]);
    const double interior = schweitzer_interior_value(p[0], p[1]);
    const auto wc = two_point_worst_case(am, hm, ratio, {p[0], p[1]}, 40);
    const double dev =
        std::max(std::abs(closed - interior), std::abs(closed - wc.value));
    worst = std::max(worst, dev);
    if (dev > 1e-9 * closed) ++r.failures;
    if (wc.k != 1 || wc.m != 1 || wc.x != p[0] || wc.y != p[1]) ++r.failures;
  }
  r.detail = deviation_detail(worst);
  return r;
}

inline PropertyResult check_sensitivity(std::uint64_t seed) {
  PropertyResult r;
  r.name = "sensitivity-search";
  Rng rng(seed ^ 0x100b);
  const PsiFamily family = make_arithmetic();
  for (int t = 0; t < 25; ++t) {
    ++r.trials;
    const double x = rng.uniform(-5.0, 0.0);
    const double y = rng.uniform(1.0, 6.0);
    const double width = rng.uniform(0.01, 0.3);
    const double u = rng.uniform(x + 0.05, y - 0.05 - width);
    const double v = u + width;
    const auto hit = sensitivity_search(family, x, y, u, v, 10000);
    bool ok = hit.has_value();
    if (ok) {
      const double val = two_point_estimate(family, x, static_cast<double>(hit->k), y,
                                            static_cast<double>(hit->m));
      ok = hit->k >= 1 && hit->m >= 1 && hit->k + hit->m <= 10000 && val > u && val < v;
    }
    if (!ok) ++r.failures;
  }
  {
    ++r.trials;
    const auto miss = sensitivity_search(family, 0.0, 1.0, 0.49, 0.51, 1);
    if (miss.has_value()) ++r.failures;
  }
  r.detail = "weighted pairs land inside every target interval";
  return r;
}

inline PropertyResult check_injected_fault() {
  PropertyResult r;
  r.name = "injected-constant-family";
  r.trials = 1;
  PsiFamily broken;
  broken.name = "constant";
  broken.theta = ParameterDomain::real_line();
  broken.observations = ParameterDomain::real_line();
  broken.psi = [](double, double) { return 1.0; };
  try {
    (void)estimate(broken, WeightedSample::uniform({0.0, 1.0}));
    r.detail = "estimate unexpectedly succeeded on a sign-fixed family";
    ++r.failures;
  } catch (const BracketError& e) {
    // The solver correctly refuses, which this run surfaces as a numerical
    // assumption failure in the report.
    r.detail = std::string("bracket-failure: ") + e.what();
    ++r.failures;
  }
  return r;
}

}  // namespace verify_detail

inline VerificationReport run_verification(std::uint64_t seed, bool inject_fault = false) {
  using namespace verify_detail;
  VerificationReport rep;
  rep.seed = seed;
  rep.fault_injected = inject_fault;
  rep.properties.push_back(check_closed_forms(seed));
  rep.properties.push_back(check_permutation_invariance(seed));
  rep.properties.push_back(check_weight_scale_invariance(seed));
  rep.properties.push_back(check_mean_type_containment(seed));
  rep.properties.push_back(check_sign_bracket(seed));
  rep.properties.push_back(check_enclosure_containment(seed));
  rep.properties.push_back(check_enclosure_monotonicity(seed));
  rep.properties.push_back(check_pair_collapse(seed));
  rep.properties.push_back(check_three_member_enumeration(seed));
  rep.properties.push_back(check_matrix_scale_invariance(seed));
  rep.properties.push_back(check_comparative_monotonicity(seed));
  rep.properties.push_back(check_schweitzer(seed));
  rep.properties.push_back(check_sensitivity(seed));
  if (inject_fault) rep.properties.push_back(check_injected_fault());
  for (const auto& p : rep.properties) rep.all_passed = rep.all_passed && p.passed();
  return rep;
}

inline std::string render_verification_json(const VerificationReport& rep) {
  JsonWriter w;
  w.begin_object();
  w.key("command");
  w.value("verify");
  w.key("config");
  w.begin_object();
  w.key("seed");
  w.value(static_cast<std::uint64_t>(rep.seed));
  w.key("inject_fault");
  w.value(rep.fault_injected);
  w.end_object();
  w.key("result");
  w.begin_object();
  w.key("all_passed");
  w.value(rep.all_passed);
  w.key("properties");
  w.begin_array();
  for (const auto& p : rep.properties) {
    w.begin_object();
    w.key("name");
    w.value(p.name);
    w.key("trials");
    w.value(p.trials);
    w.key("failures");
    w.value(p.failures);
    w.key("passed");
    w.value(p.passed());
    w.key("detail");
    w.value(p.detail);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  w.end_object();
  return w.str();
}

inline std::string render_verification_text(const VerificationReport& rep) {
  std::string out;
  for (const auto& p : rep.properties) {
    out += p.passed() ? "[PASS] " : "[FAIL] ";
    out += p.name;
    out += " (trials ";
    out += std::to_string(p.trials);
    out += ", failures ";
    out += std::to_string(p.failures);
    out += "): ";
    out += p.detail;
    out += "\n";
  }
  out += rep.all_passed ? "all properties passed\n" : "some properties failed\n";
  return out;
}

}  // namespace psikit
