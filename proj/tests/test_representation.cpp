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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "knotfold/representation.hpp"
#include "test_support.hpp"

namespace knotfold {
namespace {

KnotPlan overhand_plan(double d = 1.0, double h_min = 1.34) {
  return plan_from_request({open_diagram(testing::asset("overhand").diagram), d, h_min, std::nullopt});
}

TEST(AssignHeights, UnderSegmentsGetHMax) {
  const auto plan = overhand_plan();
  std::vector<int> under(plan.heights.size(), 0);
  for (const auto& x : plan.polyline.crossings) under[x.under_segment] = 1;
  for (std::size_t i = 0; i < plan.heights.size(); ++i) {
    EXPECT_EQ(plan.heights[i], under[i] ? plan.h_max : plan.h_min) << i;
  }
  EXPECT_EQ(std::count(under.begin(), under.end(), 1), 3);
}

TEST(AssignHeights, UnknotAllHMin) {
  const auto poly = trace_polyline(open_diagram(GridDiagram(2, {1, -1, -1, 1})), 1.0, 5.0);
  for (double h : assign_heights(poly, 1.0, 2.0)) EXPECT_EQ(h, 1.0);
  EXPECT_THROW(assign_heights(poly, 2.0, 1.0), Error);
}

TEST(AssignHeights, SharedUnderSegmentOnce) {
  KnotPolyline poly;
  poly.points = {{0, 0, 1}, {0, 4, 1}, {1, 4, 1}};
  poly.crossings = {{1, 0, {0, 1}}, {1, 0, {0, 2}}};
  const auto h = assign_heights(poly, 1.0, 3.0);
  EXPECT_EQ(h, (std::vector<double>{3.0, 1.0}));
}

TEST(BuildPlan, OverhandStructure) {
  const auto plan = overhand_plan();
  EXPECT_EQ(plan.robot_count(), 9);
  EXPECT_EQ(plan.curve.segments().size(), 8u);
  EXPECT_EQ(plan.clearances.size(), 3u);
  for (double c : plan.clearances) EXPECT_GT(c, 0.0);
  EXPECT_GT(plan.plane_height, plan.h_max);
  double sum = 0.0;
  for (double l : plan.lengths) sum += l;
  EXPECT_EQ(sum, plan.total_length);
  EXPECT_EQ(cable_cut_list(plan).total_length, plan.total_length);
  for (std::size_t i = 0; i < plan.lengths.size(); ++i) {
    const auto& p = plan.curve.segments()[i].params;
    EXPECT_NEAR(plan.lengths[i], 2.0 * testing::intrinsic_oracle(p.sag, p.half_span) *
                                     std::sinh(p.half_span / testing::intrinsic_oracle(p.sag, p.half_span)),
                1e-9 * plan.lengths[i]);
  }
}

TEST(BuildPlan, PointsOnPlaneAndAboveFloor) {
  const auto plan = overhand_plan();
  for (const auto& p : plan.polyline.points) EXPECT_EQ(p.z(), plan.plane_height);
  for (const auto& p : sample_curve(plan.curve, 64)) {
    EXPECT_GT(p.z(), 0.0);
    EXPECT_LE(p.z(), plan.plane_height + 1e-12);
  }
}

TEST(BuildPlan, UnknotLengths) {
  const auto og = open_diagram(GridDiagram(2, {1, -1, -1, 1}));
  const auto plan = plan_from_request({og, 1.0, 1.0, std::nullopt});
  EXPECT_EQ(plan.robot_count(), 3);
  ASSERT_EQ(plan.lengths.size(), 2u);
  const double a = testing::intrinsic_oracle(1.0, 0.5);
  const double numeric = testing::simpson([a](double r) { return std::cosh(r / a); }, -0.5, 0.5, 1e-14);
  EXPECT_NEAR(plan.lengths[0], numeric, 1e-10);
  EXPECT_NEAR(plan.total_length, 2.0 * numeric, 1e-10);
}

TEST(BuildPlan, LowPlaneIsError) {
  const auto og = open_diagram(testing::asset("overhand").diagram);
  const double h_max = plan_h_max(5, 1.0, 1.34);
  try {
    plan_from_request({og, 1.0, 1.34, h_max / 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFloor);
  }
}

TEST(BuildPlan, ScaleCovariance) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.3, 3.0);
  for (int k = 0; k < 20; ++k) {
    const auto og = open_diagram(testing::random_knot_grid(rng, 3 + static_cast<int>(rng() % 4)));
    const double kappa = u(rng);
    const auto a = plan_from_request({og, 1.0, 1.0, 5.0});
    const auto b = plan_from_request({og, kappa, kappa, 5.0 * kappa});
    ASSERT_EQ(a.lengths.size(), b.lengths.size());
    for (std::size_t i = 0; i < a.lengths.size(); ++i) EXPECT_NEAR(b.lengths[i], kappa * a.lengths[i], 1e-9 * b.lengths[i]);
    EXPECT_NEAR(b.total_length, kappa * a.total_length, 1e-9 * b.total_length);
  }
}

TEST(RescaleForCable, HitsTarget) {
  const auto og = open_diagram(testing::asset("overhand").diagram);
  const auto r = rescale_for_cable({og, 1.0, 1.34, std::nullopt}, 18.83);
  EXPECT_LE(r.plan.total_length, 18.83);
  EXPECT_GE(r.plan.total_length, 18.83 * (1 - 1e-6));
  EXPECT_NEAR(r.h_min / r.cell_width, 1.34, 1e-12);
  EXPECT_GT(r.cell_width, 0.3);
  EXPECT_LT(r.cell_width, 1.0);
  EXPECT_THROW(rescale_for_cable({og, 1.0, 1.34, std::nullopt}, 0.0), Error);
}

TEST(RescaleForCable, DoublingDoubles) {
  const auto og = open_diagram(testing::asset("overhand").diagram);
  const auto a = plan_from_request({og, 1.0, 1.34, std::nullopt});
  const auto b = plan_from_request({og, 2.0, 2.68, std::nullopt});
  EXPECT_NEAR(b.total_length, 2.0 * a.total_length, 1e-10 * b.total_length);
}

TEST(VerifyTopology, Overhand) {
  const auto plan = overhand_plan();
  const auto ok = verify_plan(plan);
  EXPECT_EQ(ok.verdict, Verdict::kMatch);
  EXPECT_EQ(ok.crossing_gaps.size(), 3u);
  EXPECT_GT(ok.min_gap, 0.0);
  const auto wrong = verify_topology(plan.curve, parse_gauss_code(testing::kFigureEight), 128,
                                     plan.polyline.closure_point);
  EXPECT_EQ(wrong.verdict, Verdict::kMismatch);
  EXPECT_THROW(verify_topology(plan.curve, plan.target, 16), Error);
}

TEST(VerifyTopology, Unknot) {
  const auto og = open_diagram(GridDiagram(2, {1, -1, -1, 1}));
  const auto plan = plan_from_request({og, 1.0, 1.0, std::nullopt});
  EXPECT_TRUE(verify_topology(plan.curve, GaussCode{}, 64, plan.polyline.closure_point).ok());
}

TEST(VerifyTopology, RandomDiagramsKeepTheirCode) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ud(0.5, 4.0);
  std::uniform_real_distribution<double> uh(0.5, 3.0);
  for (int k = 0; k < 30; ++k) {
    const auto og = open_diagram(testing::random_knot_grid(rng, 3 + static_cast<int>(rng() % 4)));
    const double d = ud(rng);
    const auto plan = plan_from_request({og, d, uh(rng), std::nullopt});
    const auto report = verify_plan(plan, 64);
    EXPECT_TRUE(report.ok()) << report.message << " " << report.extracted.to_string() << " vs "
                             << plan.target.to_string();
  }
}

}  // namespace
}  // namespace knotfold
