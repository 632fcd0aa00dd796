#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "domain.hpp"
#include "errors.hpp"
#include "family.hpp"

namespace psikit {

enum class SolveStatus { root_found, sign_change_bracketed };

inline const char* to_string(SolveStatus s) {
  return s == SolveStatus::root_found ? "root-found" : "sign-change-bracketed";
}

struct SignChangeResult {
  double theta = 0.0;
  // Conservative enclosure radius: psi_sum is >= 0 at theta - bracket_width
  // and <= 0 at theta + bracket_width whenever those points lie in Theta.
  double bracket_width = 0.0;
  SolveStatus status = SolveStatus::sign_change_bracketed;
};

// Weighted psi sum at t. Validates t against Theta and every observation
// against X; weight zero entries still require a valid observation.
inline double psi_sum(const PsiFamily& family, const WeightedSample& sample, double t) {
  validate_weights(sample);
  if (!family.theta.contains(t)) {
    throw DomainError("evaluation point lies outside the parameter domain");
  }
  double acc = 0.0;
  for (const auto& p : sample.points) {
    if (!family.observation_ok(p.value)) {
      throw DomainError("observation lies outside the observation domain");
    }
    acc += p.weight * family.psi(p.value, t);
  }
  return acc;
}

namespace detail {

inline double domain_center(const ParameterDomain& d) {
  const bool lo = d.bounded_below();
  const bool hi = d.bounded_above();
  if (lo && hi) return 0.5 * d.lower + 0.5 * d.upper;
  if (lo) return d.lower + std::max(1.0, std::abs(d.lower) * 1e-9);
  if (hi) return d.upper - std::max(1.0, std::abs(d.upper) * 1e-9);
  return 0.0;
}

// j-th probe toward the lower end of the domain, starting from center c.
inline double probe_left(const ParameterDomain& d, double c, int j) {
  if (d.bounded_below()) return d.lower + (c - d.lower) * std::ldexp(1.0, -j);
  return c - std::ldexp(1.0, j);
}

inline double probe_right(const ParameterDomain& d, double c, int j) {
  if (d.bounded_above()) return d.upper - (d.upper - c) * std::ldexp(1.0, -j);
  return c + std::ldexp(1.0, j);
}

constexpr int kProbeBudget = 60;
constexpr int kBisectCap = 200;
constexpr double kAbsTolFloor = 1e-15;

// Bisection on [a, b] with f(a) > 0 > f(b). Stops once the bracket width
// drops below max(tol * |midpoint|, the absolute floor) or the bracket can
// no longer be split in double precision.
template <typename F>
SignChangeResult bisect(F&& f, double a, double b, double tol) {
  for (int i = 0; i < kBisectCap; ++i) {
    const double mid = a + 0.5 * (b - a);
    if (!(mid > a) || !(mid < b)) break;
    const double fm = f(mid);
    if (std::isnan(fm)) throw NumericError("psi sum evaluated to NaN");
    if (fm == 0.0) return {mid, 0.0, SolveStatus::root_found};
    if (fm > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
    if (b - a <= std::max(tol * std::abs(mid), kAbsTolFloor)) break;
  }
  const double theta = a + 0.5 * (b - a);
  return {theta, b - a, SolveStatus::sign_change_bracketed};
}

// Seeds a sign-change bracket by walking a geometric ladder from the domain
// center toward the endpoint indicated by the sign at the center, then
// bisects. f must be callable on every point of Theta.
template <typename F>
SignChangeResult solve_sign_change(const ParameterDomain& theta, F&& f, double tol) {
  const double c = domain_center(theta);
  if (!theta.contains(c)) {
    throw BracketError("parameter domain is too narrow to probe");
  }
  const double fc = f(c);
  if (std::isnan(fc)) throw NumericError("psi sum evaluated to NaN");
  if (fc == 0.0) return {c, 0.0, SolveStatus::root_found};

  const bool walk_right = fc > 0.0;
  double inner = c;  // side with the sign found at the center
  for (int j = 1; j <= kProbeBudget; ++j) {
    const double t = walk_right ? probe_right(theta, c, j) : probe_left(theta, c, j);
    if (!theta.contains(t)) break;
    const double ft = f(t);
    if (std::isnan(ft)) throw NumericError("psi sum evaluated to NaN");
    if (ft == 0.0) return {t, 0.0, SolveStatus::root_found};
    if ((ft > 0.0) == walk_right) {
      inner = t;  // still the same sign, tighten and keep walking
      continue;
    }
    return walk_right ? bisect(f, inner, t, tol) : bisect(f, t, inner, tol);
  }
  throw BracketError(
      "no sign change within the probe budget; the family may not change sign "
      "on this sample");
}

}  // namespace detail

// Point of sign change of the weighted psi sum. The returned enclosure
// satisfies psi_sum(theta - w) >= 0 and psi_sum(theta + w) <= 0 for
// w = bracket_width whenever those points lie in Theta.
inline SignChangeResult estimate(const PsiFamily& family, const WeightedSample& sample,
                                 double tol = 1e-12) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw ParameterError("tolerance must be positive and finite");
  }
  validate_weights(sample);
  for (const auto& p : sample.points) {
    if (!family.observation_ok(p.value)) {
      throw DomainError("observation lies outside the observation domain");
    }
  }
  auto f = [&](double t) {
    double acc = 0.0;
    for (const auto& p : sample.points) acc += p.weight * family.psi(p.value, t);
    return acc;
  };
  return detail::solve_sign_change(family.theta, f, tol);
}

// Estimator of the pair {(x1, w1), (x2, w2)}. Uses the family closed form
// when available, otherwise the solver. One of the weights may be zero, in
// which case the value degenerates to the single-observation estimator.
inline double two_point_estimate(const PsiFamily& family, double x1, double w1,
                                 double x2, double w2, double tol = 1e-12) {
  if (std::isnan(w1) || std::isnan(w2) || w1 < 0.0 || w2 < 0.0 ||
      std::isinf(w1) || std::isinf(w2)) {
    throw DomainError("weights must be finite and nonnegative");
  }
  if (w1 + w2 <= 0.0) throw DomainError("at least one weight must be positive");
  if (!family.observation_ok(x1) || !family.observation_ok(x2)) {
    throw DomainError("observation lies outside the observation domain");
  }
  if (family.two_point_closed_form) {
    return family.two_point_closed_form(x1, w1, x2, w2);
  }
  WeightedSample s;
  s.points = {{x1, w1}, {x2, w2}};
  return estimate(family, s, tol).theta;
}

// Single-observation estimator.
inline double single_estimate(const PsiFamily& family, double x, double tol = 1e-12) {
  return two_point_estimate(family, x, 1.0, x, 1.0, tol);
}

// True when the single-observation psi sum changes sign on Theta for this
// observation, probed with the solver ladder.
inline bool probe_sign_change(const PsiFamily& family, double x) {
  try {
    (void)estimate(family, WeightedSample::uniform({x}));
    return true;
  } catch (const BracketError&) {
    return false;
  }
}

}  // namespace psikit
