// Copyright 2026 The knotfold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KNOTFOLD_GRID_SEARCH_HPP_
#define KNOTFOLD_GRID_SEARCH_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "knotfold/error.hpp"
#include "knotfold/gauss_code.hpp"
#include "knotfold/grid_diagram.hpp"

namespace knotfold {

inline constexpr int kMaxSearchGridSize = 7;

struct GridSearchResult {
  std::optional<GridDiagram> diagram;
  std::int64_t candidates = 0;  // marker placements examined
  double seconds = 0.0;
};

namespace detail {

/// Crossing count of the closed diagram given by the two marker permutations.
inline int permutation_crossings(const std::vector<int>& plus, const std::vector<int>& minus,
                                 const std::vector<int>& plus_inv, const std::vector<int>& minus_inv) {
  const int n = static_cast<int>(plus.size());
  int count = 0;
  for (int r = 0; r < n; ++r) {
    const int c_lo = std::min(plus[r], minus[r]);
    const int c_hi = std::max(plus[r], minus[r]);
    for (int c = c_lo + 1; c < c_hi; ++c) {
      const int r_a = plus_inv[c];
      const int r_b = minus_inv[c];
      if (std::min(r_a, r_b) < r && r < std::max(r_a, r_b)) ++count;
    }
  }
  return count;
}

inline bool permutation_single_cycle(const std::vector<int>& minus, const std::vector<int>& plus_inv) {
  // walk: row r from its +1 to its -1 column, then that column's other marker row
  const int n = static_cast<int>(minus.size());
  int r = 0;
  int steps = 0;
  do {
    const int c = minus[r];
    r = plus_inv[c];
    ++steps;
  } while (r != 0 && steps <= n);
  return steps == n;
}

/// Opens, traces and compares against an already canonical target.
inline bool diagram_matches(const GridDiagram& g, const GaussCode& canonical_target) {
  if (eligible_corners(g).empty()) return false;
  try {
    const auto og = open_diagram(g);
    const auto poly = trace_polyline(og, 1.0, 1.0);
    return canonicalize(planar_gauss_code(poly)) == canonical_target;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace detail

/// Smallest-N grid diagram whose opened trace has the same canonical Gauss
/// code as `code`. For each N, marker placements are enumerated in
/// lexicographic order of the (+1 columns, -1 columns) permutation pair and
/// the first match wins, independent of the worker count.
inline GridSearchResult grid_search(const GaussCode& code, int n_max, int workers = 0) {
  if (n_max > kMaxSearchGridSize) {
    throw Error(ErrorCode::kInvalidArgument, "grid search is limited to N <= 7");
  }
  const auto start = std::chrono::steady_clock::now();
  const GaussCode target = canonicalize(code);
  const int crossings = static_cast<int>(code.crossing_count());
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  GridSearchResult result;
  std::atomic<std::int64_t> examined{0};
  for (int n = 2; n <= n_max && !result.diagram; ++n) {
    std::vector<std::vector<int>> plus_perms;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do plus_perms.push_back(perm); while (std::next_permutation(perm.begin(), perm.end()));

    const std::size_t none = std::numeric_limits<std::size_t>::max();
    std::atomic<std::size_t> next_index{0};
    std::atomic<std::size_t> best_index{none};
    std::mutex best_mutex;
    std::optional<GridDiagram> best;

    auto worker = [&]() {
      std::vector<int> plus_inv(n);
      std::vector<int> minus(n);
      std::vector<int> minus_inv(n);
      std::int64_t local = 0;
      for (;;) {
        const std::size_t idx = next_index.fetch_add(1);
        if (idx >= plus_perms.size() || idx > best_index.load()) break;
        const auto& plus = plus_perms[idx];
        for (int r = 0; r < n; ++r) plus_inv[plus[r]] = r;
        std::iota(minus.begin(), minus.end(), 0);
        do {
          ++local;
          bool clash = false;
          for (int r = 0; r < n && !clash; ++r) clash = plus[r] == minus[r];
          if (clash) continue;
          for (int r = 0; r < n; ++r) minus_inv[minus[r]] = r;
          if (!detail::permutation_single_cycle(minus, plus_inv)) continue;
          if (detail::permutation_crossings(plus, minus, plus_inv, minus_inv) != crossings) continue;
          GridDiagram g = GridDiagram::from_permutations(plus, minus);
          if (!detail::diagram_matches(g, target)) continue;
          std::lock_guard lock(best_mutex);
          if (idx < best_index.load()) {
            best_index.store(idx);
            best = std::move(g);
          }
          break;
        } while (std::next_permutation(minus.begin(), minus.end()));
      }
      examined.fetch_add(local);
    };

    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (best) result.diagram = std::move(best);
  }
  result.candidates = examined.load();
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace knotfold

#endif  // KNOTFOLD_GRID_SEARCH_HPP_
