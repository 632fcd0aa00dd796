#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "domain.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "solver.hpp"

namespace psikit {

// C(s, t) used to compare two estimators of the same sample. Assumed
// nondecreasing in s, nonincreasing in t, and continuous in s; both built-ins
// are strictly monotone. Under those assumptions the worst case over all
// samples is already attained on replicated pairs, which is what
// two_point_worst_case enumerates.
struct ComparativeFunction {
  std::string name;
  ParameterDomain domain;  // both arguments must lie here
  std::function<double(double s, double t)> eval;
};

inline ComparativeFunction make_difference(
    ParameterDomain domain = ParameterDomain::real_line()) {
  return {"difference", domain, [](double s, double t) { return s - t; }};
}

// Ratio comparison; the domain must not reach below zero so that the sign of
// the denominator is fixed. A zero lower endpoint is allowed because the
// domain is open.
inline ComparativeFunction make_ratio(
    ParameterDomain domain = ParameterDomain::positive_half_line()) {
  if (domain.lower < 0.0) {
    throw DomainError("ratio comparison needs a domain bounded below by zero");
  }
  return {"ratio", domain, [](double s, double t) { return s / t; }};
}

struct WorstCase {
  double value = 0.0;
  double x = 0.0;
  double y = 0.0;
  long long k = 1;
  long long m = 1;
};

// Maximum of C over estimator pairs of replicated two-point samples built
// from the grid, with nonnegative replication counts k + m between 1 and
// k_limit. Candidates are visited with the total replication ascending, so
// the reported witness uses the smallest replication pair attaining the
// maximum. Candidates within one part in 10^12 of the running maximum count
// as ties: replicating both counts by a common factor leaves the estimators
// unchanged in exact arithmetic but not in floating point, and a strict
// comparison would hand the witness to whichever replication rounds highest.
inline WorstCase two_point_worst_case(const PsiFamily& psi, const PsiFamily& phi,
                                      const ComparativeFunction& comparative,
                                      const std::vector<double>& grid, long long k_limit,
                                      double tol = 1e-12) {
  if (grid.empty()) throw ParameterError("grid must not be empty");
  if (k_limit < 1) throw ParameterError("replication cap must be at least 1");
  for (double g : grid) {
    if (!psi.observation_ok(g) || !phi.observation_ok(g)) {
      throw DomainError("grid point lies outside an observation domain");
    }
  }
  WorstCase best;
  bool have = false;
  for (long long s = 1; s <= k_limit; ++s) {
    for (long long k = 0; k <= s; ++k) {
      const long long m = s - k;
      for (double x : grid) {
        for (double y : grid) {
          const double a = two_point_estimate(psi, x, static_cast<double>(k), y,
                                              static_cast<double>(m), tol);
          const double b = two_point_estimate(phi, x, static_cast<double>(k), y,
                                              static_cast<double>(m), tol);
          if (!comparative.domain.contains(a) || !comparative.domain.contains(b)) {
            throw DomainError("estimator value lies outside the comparative domain");
          }
          const double c = comparative.eval(a, b);
          const double tie = 1e-12 * std::max(1.0, std::abs(best.value));
          if (!have || c > best.value + tie) {
            best = {c, x, y, k, m};
            have = true;
          }
        }
      }
    }
  }
  return best;
}

struct SampleViolation {
  std::size_t index = 0;
  double value = 0.0;
};

// Evaluates C on the two estimators of every sample and reports the ones
// exceeding the threshold by more than slack.
inline std::vector<SampleViolation> general_sample_check(
    const PsiFamily& psi, const PsiFamily& phi, const ComparativeFunction& comparative,
    const std::vector<WeightedSample>& samples, double threshold, double slack = 1e-9,
    double tol = 1e-12) {
  if (!(slack >= 0.0)) throw ParameterError("slack must be nonnegative");
  std::vector<SampleViolation> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double a = estimate(psi, samples[i], tol).theta;
    const double b = estimate(phi, samples[i], tol).theta;
    if (!comparative.domain.contains(a) || !comparative.domain.contains(b)) {
      throw DomainError("estimator value lies outside the comparative domain");
    }
    const double c = comparative.eval(a, b);
    if (c > threshold + slack) out.push_back({i, c});
  }
  return out;
}

// Sharp constant (a + b)^2 / (4 a b) bounding the ratio of the arithmetic
// mean to the harmonic mean over samples from [a, b].
inline double schweitzer_bound(double a, double b) {
  if (!(0.0 < a) || !(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterError("schweitzer bound requires 0 < a < b, both finite");
  }
  return (a + b) * (a + b) / (4.0 * a * b);
}

// The same constant written as the value at one half of the worst-case mixing
// curve: 1/4 + (a/b + b/a)/4 + 1/4. Checked against schweitzer_bound to
// guard the closed form against edits.
inline double schweitzer_interior_value(double a, double b) {
  if (!(0.0 < a) || !(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterError("schweitzer bound requires 0 < a < b, both finite");
  }
  const double v = 0.25 + (a / b + b / a) / 4.0 + 0.25;
  const double closed = schweitzer_bound(a, b);
  if (std::abs(v - closed) > 1e-12 * std::max(1.0, closed)) {
    throw NumericError("interior diagnostic disagrees with the closed constant");
  }
  return v;
}

}  // namespace psikit
