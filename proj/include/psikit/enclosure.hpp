#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "enumerate.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "pair_matrix.hpp"
#include "solver.hpp"

namespace psikit {

namespace detail {

// Key for a pair-estimator evaluation: ordered observation indices plus the
// gcd-reduced replication pair, so scaled copies of an edge share one entry.
struct EdgeKey {
  int i, j;
  long long a, b;
  bool operator==(const EdgeKey& o) const {
    return i == o.i && j == o.j && a == o.a && b == o.b;
  }
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    mix(static_cast<std::uint64_t>(k.i));
    mix(static_cast<std::uint64_t>(k.j));
    mix(static_cast<std::uint64_t>(k.a));
    mix(static_cast<std::uint64_t>(k.b));
    return static_cast<std::size_t>(h);
  }
};

using EdgeCache = std::unordered_map<EdgeKey, double, EdgeKeyHash>;

inline double edge_value(const PsiFamily& family, const std::vector<double>& xs,
                         int i, int j, long long a, long long b, double tol,
                         EdgeCache& cache) {
  const long long g = std::gcd(a, b);
  EdgeKey key{i, j, a / g, b / g};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double v =
      two_point_estimate(family, xs[static_cast<std::size_t>(i)], static_cast<double>(key.a),
                         xs[static_cast<std::size_t>(j)], static_cast<double>(key.b), tol);
  cache.emplace(key, v);
  return v;
}

struct MatrixSpan {
  double min_value;
  double max_value;
};

// Smallest and largest pair estimator over the matrix's pair support. The
// observation on the row side of an edge carries that row's entry as weight.
inline MatrixSpan evaluate_matrix(const PsiFamily& family, const std::vector<double>& xs,
                                  const PairMatrix& m, double tol, EdgeCache& cache) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int i = 0; i < m.n; ++i) {
    for (int j = i + 1; j < m.n; ++j) {
      const long long a = m.at(i, j);
      const long long b = m.at(j, i);
      if (a + b < 1) continue;
      const double v = edge_value(family, xs, i, j, a, b, tol, cache);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      any = true;
    }
  }
  if (!any) throw DomainError("matrix has an empty pair support");
  return {lo, hi};
}

}  // namespace detail

// Smallest pair estimator over the pair support of m.
inline double matrix_min_value(const PsiFamily& family, const std::vector<double>& xs,
                               const PairMatrix& m, double tol = 1e-12) {
  if (static_cast<std::size_t>(m.n) != xs.size()) {
    throw ShapeError("matrix size disagrees with the observation count");
  }
  detail::EdgeCache cache;
  return detail::evaluate_matrix(family, xs, m, tol, cache).min_value;
}

// Largest pair estimator over the pair support of m.
inline double matrix_max_value(const PsiFamily& family, const std::vector<double>& xs,
                               const PairMatrix& m, double tol = 1e-12) {
  if (static_cast<std::size_t>(m.n) != xs.size()) {
    throw ShapeError("matrix size disagrees with the observation count");
  }
  detail::EdgeCache cache;
  return detail::evaluate_matrix(family, xs, m, tol, cache).max_value;
}

struct EncloseOptions {
  long long k_limit = 4;
  double tol = 1e-12;
  // Hard cap on candidate matrices; enumeration stops once it is reached.
  std::uint64_t max_matrices = std::numeric_limits<std::uint64_t>::max();
  // Wall-clock cap in seconds for the enumeration phase, 0 disables it. The
  // evaluation of already enumerated candidates always runs to completion,
  // which keeps bounds identical across worker counts.
  double max_seconds = 0.0;
  int workers = 1;
};

enum class EnumerationStop { complete, matrix_budget, time_budget };

inline const char* to_string(EnumerationStop s) {
  switch (s) {
    case EnumerationStop::matrix_budget: return "matrix-budget";
    case EnumerationStop::time_budget: return "time-budget";
    default: return "complete";
  }
}

struct Enclosure {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  PairMatrix lower_witness;
  PairMatrix upper_witness;
  long long k_max_used = 0;
  std::uint64_t matrices_evaluated = 0;
  EnumerationStop stop = EnumerationStop::complete;
};

namespace detail {

struct BestTracker {
  double value;
  std::uint64_t index;
};

// Per-candidate spans reduced to (best lower, best upper) with enumeration
// index as the tie break, so results do not depend on thread scheduling.
inline void reduce_spans(const std::vector<MatrixSpan>& spans, std::uint64_t offset,
                         BestTracker& lower, BestTracker& upper) {
  for (std::uint64_t t = 0; t < spans.size(); ++t) {
    const std::uint64_t idx = offset + t;
    const MatrixSpan& s = spans[static_cast<std::size_t>(t)];
    if (s.min_value > lower.value || (s.min_value == lower.value && idx < lower.index)) {
      lower = {s.min_value, idx};
    }
    if (s.max_value < upper.value || (s.max_value == upper.value && idx < upper.index)) {
      upper = {s.max_value, idx};
    }
  }
}

}  // namespace detail

// Certified enclosure of the full-sample estimator from pair estimators.
// Every candidate's smallest pair value is a valid lower bound and its
// largest a valid upper bound, so any truncation of the enumeration still
// returns sound bounds; more candidates only tighten them. Witnesses are the
// first candidates attaining each bound in enumeration order.
inline Enclosure enclose(const PsiFamily& family, const std::vector<double>& xs,
                         const std::vector<long long>& k_vec,
                         const EncloseOptions& options = {}) {
  if (xs.size() < 2) {
    throw ParameterError("enclosure needs at least two observations");
  }
  validate_replication(k_vec);
  if (k_vec.size() != xs.size()) {
    throw ShapeError("replication vector length disagrees with the sample");
  }
  if (options.k_limit < 1) throw ParameterError("scale cap must be at least 1");
  if (!(options.tol > 0.0)) throw ParameterError("tolerance must be positive");
  if (options.workers < 1) throw ParameterError("worker count must be positive");
  for (double x : xs) {
    if (!family.observation_ok(x)) {
      throw DomainError("observation lies outside the observation domain");
    }
  }
  if (options.max_matrices == 0) {
    throw BudgetError("candidate budget exhausted before any matrix");
  }

  const auto deadline_enabled = options.max_seconds > 0.0;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(options.max_seconds));

  std::vector<PairMatrix> candidates;
  EnumerationStop stop = EnumerationStop::complete;
  enumerate_members(static_cast<int>(xs.size()), k_vec, options.k_limit,
                    [&](const PairMatrix& m) {
                      candidates.push_back(m);
                      if (candidates.size() >= options.max_matrices) {
                        stop = EnumerationStop::matrix_budget;
                        return false;
                      }
                      if (deadline_enabled && std::chrono::steady_clock::now() >= deadline) {
                        stop = EnumerationStop::time_budget;
                        return false;
                      }
                      return true;
                    });
  if (candidates.empty()) {
    throw BudgetError("time budget exhausted before any matrix");
  }

  const std::uint64_t count = candidates.size();
  const int workers =
      static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(options.workers), count));

  detail::BestTracker lower{-std::numeric_limits<double>::infinity(), 0};
  detail::BestTracker upper{std::numeric_limits<double>::infinity(), 0};

  if (workers <= 1) {
    detail::EdgeCache cache;
    std::vector<detail::MatrixSpan> spans;
    spans.reserve(static_cast<std::size_t>(count));
    for (const auto& m : candidates) {
      spans.push_back(detail::evaluate_matrix(family, xs, m, options.tol, cache));
    }
    detail::reduce_spans(spans, 0, lower, upper);
  } else {
    std::vector<std::vector<detail::MatrixSpan>> spans(static_cast<std::size_t>(workers));
    std::vector<std::uint64_t> offsets(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (count + static_cast<std::uint64_t>(workers) - 1) /
                                static_cast<std::uint64_t>(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t begin = static_cast<std::uint64_t>(w) * chunk;
      const std::uint64_t end = std::min(count, begin + chunk);
      offsets[static_cast<std::size_t>(w)] = begin;
      pool.emplace_back([&, w, begin, end] {
        try {
          detail::EdgeCache cache;
          auto& local = spans[static_cast<std::size_t>(w)];
          local.reserve(static_cast<std::size_t>(end - begin));
          for (std::uint64_t t = begin; t < end; ++t) {
            local.push_back(detail::evaluate_matrix(
                family, xs, candidates[static_cast<std::size_t>(t)], options.tol, cache));
          }
        } catch (...) {
          std::lock_guard<std::mutex> hold(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    for (int w = 0; w < workers; ++w) {
      detail::reduce_spans(spans[static_cast<std::size_t>(w)],
                           offsets[static_cast<std::size_t>(w)], lower, upper);
    }
  }

  Enclosure out;
  out.lower = lower.value;
  out.upper = upper.value;
  out.lower_witness = candidates[static_cast<std::size_t>(lower.index)];
  out.upper_witness = candidates[static_cast<std::size_t>(upper.index)];
  out.k_max_used = 0;
  for (const auto& m : candidates) out.k_max_used = std::max(out.k_max_used, m.scale);
  out.matrices_evaluated = count;
  out.stop = stop;
  return out;
}

inline Enclosure enclose(const PsiFamily& family, const std::vector<double>& xs,
                         const EncloseOptions& options = {}) {
  return enclose(family, xs, std::vector<long long>(xs.size(), 1), options);
}

struct RefineOptions {
  std::uint64_t extra_matrices = 0;
  std::uint64_t seed = 0;
  double tol = 1e-12;
};

// Anytime improvement pass: seeded single-unit mass moves around the current
// witnesses, then continued enumeration at scales past k_max_used, together
// spending at most extra_matrices evaluations. Bounds only ever tighten.
inline Enclosure refine(const PsiFamily& family, const std::vector<double>& xs,
                        const std::vector<long long>& k_vec, const Enclosure& base,
                        const RefineOptions& options = {}) {
  if (xs.size() < 2) throw ParameterError("enclosure needs at least two observations");
  validate_replication(k_vec);
  if (k_vec.size() != xs.size()) {
    throw ShapeError("replication vector length disagrees with the sample");
  }
  Enclosure out = base;
  if (options.extra_matrices == 0) return out;

  std::uint64_t left = options.extra_matrices;
  detail::EdgeCache cache;
  const int n = static_cast<int>(xs.size());

  auto consider = [&](const PairMatrix& m) {
    const auto span = detail::evaluate_matrix(family, xs, m, options.tol, cache);
    ++out.matrices_evaluated;
    if (span.min_value > out.lower) {
      out.lower = span.min_value;
      out.lower_witness = m;
    }
    if (span.max_value < out.upper) {
      out.upper = span.max_value;
      out.upper_witness = m;
    }
  };

  // Local moves: shift one unit of row mass between two incident entries of a
  // witness. Row sums are preserved; a move that inflates the pair support
  // past n - 1 edges is discarded.
  std::mt19937_64 rng(options.seed);
  const std::uint64_t move_budget = std::min<std::uint64_t>(left / 2, 512);
  for (int which = 0; which < 2 && left > 0; ++which) {
    PairMatrix current = which == 0 ? base.lower_witness : base.upper_witness;
    if (current.n != n) continue;
    for (std::uint64_t step = 0; step < move_budget / 2 && left > 0; ++step) {
      PairMatrix next = current;
      const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      const int l = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      if (i == j || i == l || j == l) continue;
      if (next.at(i, j) < 1) continue;
      next.at(i, j) -= 1;
      next.at(i, l) += 1;
      if (!validate_member(next, k_vec)) continue;
      consider(next);
      --left;
      current = next;  // random walk over valid neighbours
    }
  }

  // Continue the scale ladder past what the base enclosure consumed. The cap
  // keeps the pass finite when no new canonical members exist (n = 2).
  if (left > 0) {
    const long long start = out.k_max_used;
    enumerate_members(n, k_vec, start + 64, [&](const PairMatrix& m) {
      if (m.scale <= start) return true;  // covered by the base run
      consider(m);
      out.k_max_used = std::max(out.k_max_used, m.scale);
      return --left > 0;
    });
  }
  return out;
}

}  // namespace psikit
