#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "domain.hpp"
#include "errors.hpp"

namespace psikit {

// A psi family bundles the kernel psi(x, t), the parameter domain Theta, the
// observation domain X, and an optional closed form for the two-observation
// weighted estimator. The kernel is assumed to be of decreasing type in t:
// for every admissible sample the weighted sum is positive left of the
// estimator and negative right of it. That property is not checked at
// construction; the solver reports a bracket failure when it does not hold.
// Instances are immutable after construction and safe to share across threads.
struct PsiFamily {
  std::string name;
  ParameterDomain theta;
  ParameterDomain observations;  // X
  std::function<double(double x, double t)> psi;
  // Closed form for the estimator of {(x1, w1), (x2, w2)}, empty when the
  // family has none. Must accept a zero weight on either side.
  std::function<double(double x1, double w1, double x2, double w2)> two_point_closed_form;
  std::vector<std::pair<std::string, double>> params;  // echoed in reports

  bool observation_ok(double x) const {
    return std::isfinite(x) && observations.contains(x);
  }
};

namespace detail {

// base^exp for integer exp >= 0 by squaring. Signs survive overflow to inf.
inline double int_pow(double base, long long exp) {
  double r = 1.0;
  double b = base;
  long long e = exp;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

}  // namespace detail

// psi(x, t) = (x - t)^p on Theta x Theta for odd p >= 3. The estimator is the
// weighted p-th power mean of the observations.
inline PsiFamily make_power_p(long long p,
                              ParameterDomain theta = ParameterDomain::real_line()) {
  if (p < 3 || p % 2 == 0) {
    throw ParameterError("power family requires an odd exponent p >= 3");
  }
  PsiFamily f;
  f.name = "power";
  f.theta = theta;
  f.observations = theta;
  f.params = {{"p", static_cast<double>(p)}};
  f.psi = [p](double x, double t) { return detail::int_pow(x - t, p); };
  f.two_point_closed_form = [p](double x1, double w1, double x2, double w2) {
    const double a = std::pow(w1, 1.0 / static_cast<double>(p));
    const double b = std::pow(w2, 1.0 / static_cast<double>(p));
    return (a * x1 + b * x2) / (a + b);
  };
  return f;
}

// psi(x, t) = (alpha * x - t) / (t * (t + x)) on (0, inf) x (0, inf).
// Estimates alpha times a generalized mean of the observations; the
// single-observation estimator is alpha * x.
inline PsiFamily make_lomax(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParameterError("lomax family requires finite alpha > 0");
  }
  PsiFamily f;
  f.name = "lomax";
  f.theta = ParameterDomain::positive_half_line();
  f.observations = ParameterDomain::positive_half_line();
  f.params = {{"alpha", alpha}};
  f.psi = [alpha](double x, double t) { return (alpha * x - t) / (t * (t + x)); };
  f.two_point_closed_form = [alpha](double x1, double w1, double x2, double w2) {
    const double c1 = (alpha * w1 - w2) * x1;
    const double c2 = (alpha * w2 - w1) * x2;
    const double cross =
        alpha * w1 * w1 + (alpha * alpha + 4.0 * alpha + 1.0) * w1 * w2 + alpha * w2 * w2;
    const double disc = c1 * c1 + c2 * c2 + 2.0 * cross * x1 * x2;
    return (c1 + c2 + std::sqrt(disc)) / (2.0 * (w1 + w2));
  };
  return f;
}

// psi(x, t) = x - t. The estimator is the weighted arithmetic mean.
inline PsiFamily make_arithmetic(ParameterDomain theta = ParameterDomain::real_line()) {
  PsiFamily f;
  f.name = "arith";
  f.theta = theta;
  f.observations = ParameterDomain::real_line();
  f.psi = [](double x, double t) { return x - t; };
  f.two_point_closed_form = [](double x1, double w1, double x2, double w2) {
    return (w1 * x1 + w2 * x2) / (w1 + w2);
  };
  return f;
}

// psi(x, t) = 1/t - 1/x on (0, inf) x (0, inf). The estimator is the
// weighted harmonic mean.
inline PsiFamily make_harmonic() {
  PsiFamily f;
  f.name = "harm";
  f.theta = ParameterDomain::positive_half_line();
  f.observations = ParameterDomain::positive_half_line();
  f.psi = [](double x, double t) { return 1.0 / t - 1.0 / x; };
  f.two_point_closed_form = [](double x1, double w1, double x2, double w2) {
    return (w1 + w2) / (w1 / x1 + w2 / x2);
  };
  return f;
}

}  // namespace psikit
