#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "pair_matrix.hpp"

namespace psikit {

namespace detail {

struct EntryVectorHash {
  std::size_t operator()(const std::vector<long long>& v) const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (long long x : v) {
      std::uint64_t u = static_cast<std::uint64_t>(x);
      for (int b = 0; b < 8; ++b) {
        h ^= (u >> (8 * b)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

using SeenSet = std::unordered_set<std::vector<long long>, EntryVectorHash>;

// Edge subsets of the complete graph on n vertices with at most n - 1 edges
// that still touch every vertex. Every member's pair support is such a
// subset, because positive row sums force every vertex onto some edge.
inline std::vector<std::vector<std::pair<int, int>>> cover_supports(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  std::vector<std::vector<std::pair<int, int>>> out;
  const int total = static_cast<int>(edges.size());
  std::vector<int> pick;
  // Subsets in size order, lexicographic within a size.
  std::function<void(int, int)> grow = [&](int start, int want) {
    if (want == 0) {
      std::vector<bool> covered(static_cast<std::size_t>(n), false);
      for (int idx : pick) {
        covered[static_cast<std::size_t>(edges[static_cast<std::size_t>(idx)].first)] = true;
        covered[static_cast<std::size_t>(edges[static_cast<std::size_t>(idx)].second)] = true;
      }
      for (bool c : covered) {
        if (!c) return;
      }
      std::vector<std::pair<int, int>> s;
      s.reserve(pick.size());
      for (int idx : pick) s.push_back(edges[static_cast<std::size_t>(idx)]);
      out.push_back(std::move(s));
      return;
    }
    for (int e = start; e + want <= total; ++e) {
      pick.push_back(e);
      grow(e + 1, want - 1);
      pick.pop_back();
    }
  };
  const int min_edges = (n + 1) / 2;
  for (int size = min_edges; size <= n - 1; ++size) grow(0, size);
  return out;
}

}  // namespace detail

// Streams every member with scale k in 1..k_limit exactly once up to the
// canonical (gcd-reduced) key; the representative passed to the callback is
// the first member encountered in a fixed order (scale ascending, support
// subsets in size then lexicographic order, row masses in nested descending
// first-slot order). Return false from the callback to stop early.
//
// The walk fixes a covering support of at most n - 1 edges first and then
// distributes each row's mass k_i * k over that row's incident edges, so
// every matrix it produces is a valid member and every valid member is
// produced at least once (its own pair support is one of the supports).
inline void enumerate_members(int n, const std::vector<long long>& k_vec, long long k_limit,
                              const std::function<bool(const PairMatrix&)>& yield) {
  if (n < 2) throw ParameterError("enumeration needs at least two observations");
  if (k_limit < 1) throw ParameterError("scale cap must be at least 1");
  validate_replication(k_vec);
  if (static_cast<std::size_t>(n) != k_vec.size()) {
    throw ShapeError("replication vector length disagrees with n");
  }

  const auto supports = detail::cover_supports(n);
  detail::SeenSet seen;

  // Slots of row i: the off-diagonal positions (i, j) for edges {i, j} in the
  // current support. Filled by nested compositions, first slot descending.
  PairMatrix m(n, 1);
  std::vector<std::vector<int>> row_slots(static_cast<std::size_t>(n));
  bool keep_going = true;

  std::function<void(int)> fill_row;
  std::function<void(int, int, long long)> fill_slot =
      [&](int row, int slot_idx, long long remaining) {
        if (!keep_going) return;
        const auto& slots = row_slots[static_cast<std::size_t>(row)];
        if (slot_idx + 1 == static_cast<int>(slots.size())) {
          m.entries[static_cast<std::size_t>(slots[static_cast<std::size_t>(slot_idx)])] =
              remaining;
          fill_row(row + 1);
          return;
        }
        for (long long v = remaining; v >= 0 && keep_going; --v) {
          m.entries[static_cast<std::size_t>(slots[static_cast<std::size_t>(slot_idx)])] = v;
          fill_slot(row, slot_idx + 1, remaining - v);
        }
      };
  fill_row = [&](int row) {
    if (!keep_going) return;
    if (row == n) {
      auto key = canonical_entries(m);
      if (seen.insert(std::move(key)).second) keep_going = yield(m);
      return;
    }
    if (row_slots[static_cast<std::size_t>(row)].empty()) return;  // uncovered row
    fill_slot(row, 0, k_vec[static_cast<std::size_t>(row)] * m.scale);
  };

  for (long long k = 1; k <= k_limit && keep_going; ++k) {
    m.scale = k;
    for (const auto& support : supports) {
      if (!keep_going) break;
      for (auto& s : row_slots) s.clear();
      for (const auto& [i, j] : support) {
        row_slots[static_cast<std::size_t>(i)].push_back(i * n + j);
        row_slots[static_cast<std::size_t>(j)].push_back(j * n + i);
      }
      std::fill(m.entries.begin(), m.entries.end(), 0);
      fill_row(0);
    }
  }
}

inline std::vector<PairMatrix> collect_members(int n, const std::vector<long long>& k_vec,
                                               long long k_limit) {
  std::vector<PairMatrix> out;
  enumerate_members(n, k_vec, k_limit, [&](const PairMatrix& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

}  // namespace psikit
