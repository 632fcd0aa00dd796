#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace psikit {

// Square nonnegative integer matrix with zero diagonal. A valid member at
// replication vector (k_1, ..., k_n) and scale k has off-diagonal row sums
// k_i * k and at most n - 1 index pairs (i, j), i < j, with
// m[i][j] + m[j][i] >= 1.
struct PairMatrix {
  int n = 0;
  long long scale = 1;
  std::vector<long long> entries;  // n * n, row major

  PairMatrix() = default;
  PairMatrix(int size, long long k)
      : n(size), scale(k), entries(static_cast<std::size_t>(size) * size, 0) {}

  long long at(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
  long long& at(int i, int j) { return entries[static_cast<std::size_t>(i) * n + j]; }
};

// Index pairs (i, j) with i < j and m[i][j] + m[j][i] >= 1, in row order.
inline std::vector<std::pair<int, int>> delta_set(const PairMatrix& m) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < m.n; ++i) {
    for (int j = i + 1; j < m.n; ++j) {
      if (m.at(i, j) + m.at(j, i) >= 1) out.emplace_back(i, j);
    }
  }
  return out;
}

// Entries divided by their positive gcd. Matrices that are integer multiples
// of each other share this key and induce the same pair estimators.
inline std::vector<long long> canonical_entries(const PairMatrix& m) {
  long long g = 0;
  for (long long v : m.entries) g = std::gcd(g, v);
  if (g <= 1) return m.entries;
  std::vector<long long> out = m.entries;
  for (long long& v : out) v /= g;
  return out;
}

inline PairMatrix scaled(const PairMatrix& m, long long c) {
  if (c < 1) throw ParameterError("matrix scale factor must be positive");
  PairMatrix out = m;
  out.scale = m.scale * c;
  for (long long& v : out.entries) v *= c;
  return out;
}

inline void validate_replication(const std::vector<long long>& k_vec) {
  if (k_vec.size() < 2) throw ParameterError("replication vector needs at least two entries");
  for (long long k : k_vec) {
    if (k < 1) throw DomainError("replication counts must be positive integers");
  }
}

// Membership test against the replication vector at the matrix's own scale.
// Dimension mismatches are errors; every other defect makes this false.
inline bool validate_member(const PairMatrix& m, const std::vector<long long>& k_vec) {
  validate_replication(k_vec);
  if (m.n < 2 || static_cast<std::size_t>(m.n) != k_vec.size() ||
      m.entries.size() != static_cast<std::size_t>(m.n) * m.n) {
    throw ShapeError("matrix dimensions disagree with the replication vector");
  }
  if (m.scale < 1) return false;
  for (int i = 0; i < m.n; ++i) {
    if (m.at(i, i) != 0) return false;
    long long row = 0;
    for (int j = 0; j < m.n; ++j) {
      if (m.at(i, j) < 0) return false;
      if (j != i) row += m.at(i, j);
    }
    if (row != k_vec[static_cast<std::size_t>(i)] * m.scale) return false;
  }
  return delta_set(m).size() <= static_cast<std::size_t>(m.n - 1);
}

}  // namespace psikit
