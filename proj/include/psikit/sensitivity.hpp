#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "errors.hpp"
#include "family.hpp"
#include "solver.hpp"

namespace psikit {

struct ReplicationPair {
  long long k = 0;  // copies of x
  long long m = 0;  // copies of y
};

// Searches for positive integers (k, m) with k + m <= budget such that the
// estimator of k copies of x and m copies of y lands strictly inside (u, v).
// Requires single_estimate(x) < u < v < single_estimate(y).
//
// The walk descends the Stern-Brocot tree on the ratio k/m: the estimator is
// continuous in the ratio and moves from single_estimate(y) at ratio 0 to
// single_estimate(x) as the ratio grows, so mediant refinement either lands
// inside the interval or exhausts the budget. For a monotone estimator the
// first hit has the smallest possible k + m. A small exhaustive sweep backs
// up the walk when the budget is tiny.
inline std::optional<ReplicationPair> sensitivity_search(const PsiFamily& family,
                                                         double x, double y, double u,
                                                         double v, long long budget,
                                                         double tol = 1e-12) {
  if (budget < 1) throw ParameterError("budget must be at least 1");
  if (!family.observation_ok(x) || !family.observation_ok(y)) {
    throw DomainError("observation lies outside the observation domain");
  }
  if (!(u < v)) throw OrderError("target interval requires u < v");
  const double tx = single_estimate(family, x, tol);
  const double ty = single_estimate(family, y, tol);
  if (!(tx < u) || !(v < ty)) {
    throw OrderError("single-observation estimators must straddle the interval");
  }

  auto value = [&](long long k, long long m) {
    return two_point_estimate(family, x, static_cast<double>(k), y,
                              static_cast<double>(m), tol);
  };

  // Endpoints of the current ratio interval; lo acts like ratio 0 (value near
  // ty, too high), hi like an infinite ratio (value near tx, too low).
  long long lo_k = 0, lo_m = 1;
  long long hi_k = 1, hi_m = 0;
  while (true) {
    const long long k = lo_k + hi_k;
    const long long m = lo_m + hi_m;
    if (k + m > budget) break;
    const double t = value(k, m);
    if (t > u && t < v) return ReplicationPair{k, m};
    if (t >= v) {
      lo_k = k;
      lo_m = m;
    } else {
      hi_k = k;
      hi_m = m;
    }
  }

  // The mediant path can overshoot a tiny budget even when a hit exists for a
  // non-monotone family; sweep the remaining small search space directly.
  if (budget <= 512) {
    for (long long s = 2; s <= budget; ++s) {
      for (long long k = 1; k < s; ++k) {
        const double t = value(k, s - k);
        if (t > u && t < v) return ReplicationPair{k, s - k};
      }
    }
  }
  return std::nullopt;
}

}  // namespace psikit
