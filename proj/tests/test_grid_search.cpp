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


#include <gtest/gtest.h>

#include "knotfold/grid_search.hpp"
#include "test_support.hpp"

namespace knotfold {
namespace {

TEST(GridSearch, TrefoilGridNumberIsFive) {
  const auto code = parse_gauss_code(testing::kTrefoil);
  EXPECT_FALSE(grid_search(code, 4).diagram.has_value());
  const auto found = grid_search(code, 5);
  ASSERT_TRUE(found.diagram.has_value());
  EXPECT_EQ(found.diagram->size(), 5);
  const auto poly = trace_polyline(open_diagram(*found.diagram), 1.0, 1.0);
  EXPECT_TRUE(same_knot_code(planar_gauss_code(poly), code));
}

TEST(GridSearch, FigureEightGridNumberIsSix) {
  const auto code = parse_gauss_code(testing::kFigureEight);
  EXPECT_FALSE(grid_search(code, 5).diagram.has_value());
  const auto found = grid_search(code, 6);
  ASSERT_TRUE(found.diagram.has_value());
  EXPECT_EQ(found.diagram->size(), 6);
}

TEST(GridSearch, UnknotIsTwoByTwo) {
  const auto found = grid_search(GaussCode{}, 2);
  ASSERT_TRUE(found.diagram.has_value());
  EXPECT_EQ(found.diagram->size(), 2);
}

TEST(GridSearch, ResultIndependentOfWorkers) {
  const auto code = parse_gauss_code(testing::kTrefoil);
  const auto one = grid_search(code, 5, 1);
  const auto three = grid_search(code, 5, 3);
  ASSERT_TRUE(one.diagram && three.diagram);
  EXPECT_EQ(*one.diagram, *three.diagram);
}

TEST(GridSearch, BundledAssetsAreFirstMatches) {
  // the figure-eight asset is the search result; the overhand asset is one
  // of the 5x5 matches
  const auto f8 = testing::asset("figure_eight");
  EXPECT_EQ(*grid_search(*f8.code, 6).diagram, f8.diagram);
  EXPECT_EQ(testing::asset("overhand").diagram.size(), 5);
}

TEST(GridSearch, LimitIsSeven) {
  EXPECT_THROW(grid_search(GaussCode{}, 8), Error);
}

TEST(GridSearch, PermutationCrossingsMatchTrace) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 5);
    const auto g = testing::random_knot_grid(rng, n);
    std::vector<int> plus(n), minus(n), plus_inv(n), minus_inv(n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (g.at(r, c) == 1) plus[r] = c;
        if (g.at(r, c) == -1) minus[r] = c;
      }
    }
    for (int r = 0; r < n; ++r) {
      plus_inv[plus[r]] = r;
      minus_inv[minus[r]] = r;
    }
    EXPECT_TRUE(detail::permutation_single_cycle(minus, plus_inv));
    const auto poly = trace_polyline(open_diagram(g), 1.0, 1.0);
    EXPECT_EQ(detail::permutation_crossings(plus, minus, plus_inv, minus_inv),
              static_cast<int>(poly.crossings.size()));
  }
}

}  // namespace
}  // namespace knotfold
