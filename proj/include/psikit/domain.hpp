#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace psikit {

// Open interval (lower, upper); either endpoint may be infinite.
struct ParameterDomain {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  static ParameterDomain real_line() { return {}; }

  static ParameterDomain positive_half_line() {
    return {0.0, std::numeric_limits<double>::infinity()};
  }

  static ParameterDomain open(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
      throw ParameterError("domain endpoints must satisfy lower < upper");
    }
    return {lo, hi};
  }

  bool contains(double t) const { return t > lower && t < upper; }
  bool bounded_below() const { return std::isfinite(lower); }
  bool bounded_above() const { return std::isfinite(upper); }
};

struct WeightedObservation {
  double value = 0.0;
  double weight = 1.0;
};

// Observations paired with nonnegative real weights; at least one weight
// must be strictly positive for an estimate to exist.
struct WeightedSample {
  std::vector<WeightedObservation> points;

  static WeightedSample uniform(const std::vector<double>& xs) {
    WeightedSample s;
    s.points.reserve(xs.size());
    for (double x : xs) s.points.push_back({x, 1.0});
    return s;
  }

  static WeightedSample of(const std::vector<double>& xs,
                           const std::vector<double>& ws) {
    if (xs.size() != ws.size()) {
      throw ShapeError("observation and weight counts differ");
    }
    WeightedSample s;
    s.points.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) s.points.push_back({xs[i], ws[i]});
    return s;
  }

  std::size_t size() const { return points.size(); }

  double total_weight() const {
    double t = 0.0;
    for (const auto& p : points) t += p.weight;
    return t;
  }
};

inline void validate_weights(const WeightedSample& sample) {
  if (sample.points.empty()) throw DomainError("sample is empty");
  bool any_positive = false;
  for (const auto& p : sample.points) {
    if (std::isnan(p.weight) || p.weight < 0.0 || std::isinf(p.weight)) {
      throw DomainError("weights must be finite and nonnegative");
    }
    if (p.weight > 0.0) any_positive = true;
  }
  if (!any_positive) throw DomainError("at least one weight must be positive");
}

}  // namespace psikit
