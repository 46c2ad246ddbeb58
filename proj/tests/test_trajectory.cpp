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
#include "knotfold/simulator.hpp"
#include "knotfold/trajectory.hpp"
#include "test_support.hpp"

namespace knotfold {
namespace {

TEST(GraspPoints, CumulativeAlongX) {
  EXPECT_EQ(grasp_points({2, 3}), (std::vector<Vec3>{{0, 0, 0}, {2, 0, 0}, {5, 0, 0}}));
  EXPECT_EQ(grasp_points({5}), (std::vector<Vec3>{{0, 0, 0}, {5, 0, 0}}));
  EXPECT_THROW(grasp_points({1, 0}), Error);
}

TEST(AugmentWaypoints, DipDepths) {
  const auto w = augment_waypoints({{-1, 0, 5}, {1, 0, 5}, {1, 2, 5}}, 2.0);
  ASSERT_EQ(w.size(), 5u);
  EXPECT_EQ(w[1], Vec3(0, 0, 2));  // i = 1, odd: 1.5 h_max
  EXPECT_EQ(w[3], Vec3(1, 1, 4));  // i = 2, even: 0.5 h_max
  EXPECT_EQ(w[0], Vec3(-1, 0, 5));
  EXPECT_EQ(w[4], Vec3(1, 2, 5));
}

TEST(AugmentWaypoints, FloorIsError) {
  try {
    augment_waypoints({{0, 0, 1}, {1, 0, 1}}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFloor);
  }
  EXPECT_THROW(augment_waypoints({{0, 0, 1}}, 1.0), Error);
  EXPECT_THROW(augment_waypoints({{0, 0, 1}, {1, 0, 1}}, 0.0), Error);
}

TEST(AugmentWaypoints, OverhandCount) {
  const auto plan = plan_from_request({open_diagram(testing::asset("overhand").diagram), 1.0, 1.34, std::nullopt});
  const auto w = augment_waypoints(plan.polyline.points, plan.h_max);
  EXPECT_EQ(w.size(), 17u);
  for (std::size_t k = 1; k + 2 < w.size(); k += 2) {
    // odd dips are deeper than even dips by exactly h_max
    const double dip = plan.plane_height - w[k].z();
    const double next = plan.plane_height - w[k + 2].z();
    EXPECT_NEAR((k / 2) % 2 == 0 ? dip - next : next - dip, plan.h_max, 1e-12);
  }
  const auto g = grasp_points(plan.lengths);
  EXPECT_EQ(g.size(), 9u);
  EXPECT_NEAR(g.back().x(), plan.total_length, 1e-12);
}

TEST(QuinticSpline, MidpointSpeedRatio) {
  const Vec3 a(0, 0, 0), b(3, 4, 0);
  const auto traj = quintic_spline({a, b}, {});
  const double t = traj.duration();
  EXPECT_NEAR(t, 5.0, 1e-15);
  EXPECT_NEAR(eval_trajectory(traj, t / 2).velocity.norm(), 1.875 * 5.0 / t, 1e-12);
}

TEST(QuinticSpline, FloorDuration) {
  const auto traj = quintic_spline({{0, 0, 0}, {0.1, 0, 0}}, {});
  EXPECT_EQ(traj.duration(), 0.5);
}

TEST(QuinticSpline, InterpolatesAtRest) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<Vec3> w;
  for (int k = 0; k < 12; ++k) w.emplace_back(u(rng), u(rng), u(rng));
  const auto traj = quintic_spline(w, {});
  ASSERT_EQ(traj.times.size(), w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const auto s = eval_trajectory(traj, traj.times[k]);
    EXPECT_LE((s.position - w[k]).norm(), 1e-12);
    EXPECT_LE(s.velocity.norm(), 1e-12);
    EXPECT_LE(s.acceleration.norm(), 1e-12);
  }
}

TEST(QuinticSpline, CoincidentWaypointsWarn) {
  const auto traj = quintic_spline({{0, 0, 0}, {0, 0, 0}, {1, 0, 0}}, {});
  EXPECT_EQ(traj.intervals.size(), 1u);
  EXPECT_EQ(traj.warnings.size(), 1u);
  EXPECT_EQ(traj.times[0], traj.times[1]);
  EXPECT_THROW(quintic_spline({{0, 0, 0}}, {}), Error);
  TrajectoryOptions slow;
  slow.v_ref = 0.0;
  EXPECT_THROW(quintic_spline({{0, 0, 0}, {1, 0, 0}}, slow), Error);
}

TEST(EvalTrajectory, EndsAndClamping) {
  const auto traj = quintic_spline({{0, 0, 0}, {1, 0, 0}, {1, 2, 0}}, {});
  for (double t : {-1.0, 0.0}) {
    const auto s = eval_trajectory(traj, t);
    EXPECT_EQ(s.position, Vec3(0, 0, 0));
    EXPECT_EQ(s.velocity, Vec3::Zero());
    EXPECT_EQ(s.acceleration, Vec3::Zero());
  }
  for (double t : {traj.duration(), traj.duration() + 5}) {
    const auto s = eval_trajectory(traj, t);
    EXPECT_EQ(s.position, Vec3(1, 2, 0));
    EXPECT_EQ(s.velocity, Vec3::Zero());
  }
}

TEST(EvalTrajectory, FiniteDifferences) {
  const auto plan = plan_from_request({open_diagram(testing::asset("overhand").diagram), 1.0, 1.34, std::nullopt});
  const auto traj = quintic_spline(augment_waypoints(plan.polyline.points, plan.h_max), {});
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(1e-3, traj.duration() - 1e-3);
  const double eps = 1e-5;
  for (int k = 0; k < 100; ++k) {
    const double t = u(rng);
    const auto s = eval_trajectory(traj, t);
    const auto lo = eval_trajectory(traj, t - eps);
    const auto hi = eval_trajectory(traj, t + eps);
    EXPECT_LE(((hi.position - lo.position) / (2 * eps) - s.velocity).norm(), 1e-6) << t;
    EXPECT_LE(((hi.velocity - lo.velocity) / (2 * eps) - s.acceleration).norm(), 1e-6) << t;
  }
}

TEST(EvalTrajectory, C2AtBoundaries) {
  const auto plan = plan_from_request({open_diagram(testing::asset("figure_eight").diagram), 1.0, 1.55, std::nullopt});
  const auto traj = quintic_spline(augment_waypoints(plan.polyline.points, plan.h_max), {});
  for (std::size_t k = 1; k + 1 < traj.intervals.size(); ++k) {
    const auto& prev = traj.intervals[k - 1];
    const auto left = eval_interval(prev, prev.duration);
    const auto right = eval_interval(traj.intervals[k], 0.0);
    EXPECT_LE((left.position - right.position).norm(), 1e-9);
    EXPECT_LE((left.velocity - right.velocity).norm(), 1e-9);
    EXPECT_LE((left.acceleration - right.acceleration).norm(), 1e-9);
  }
}

struct Fold {
  KnotPlan plan;
  FoldSetup setup;
};

Fold overhand_fold() {
  Fold f;
  f.plan = plan_from_request({open_diagram(testing::asset("overhand").diagram), 1.0, 1.34, std::nullopt});
  f.setup = plan_fold(f.plan);
  return f;
}

TEST(MakeSchedule, LeaderAndLastRobot) {
  const auto f = overhand_fold();
  const auto& robots = f.setup.schedule.robots;
  const int n = f.plan.robot_count();
  const double td = f.setup.schedule.delay;
  EXPECT_EQ(robots.back().start, 0.0);
  EXPECT_EQ(robots.back().stop_time, f.setup.trajectory.duration());
  EXPECT_EQ(robots.front().start, td * (n - 1));
  EXPECT_EQ(robots.front().stop_time, 0.0);
  EXPECT_EQ(robots.front().target, f.setup.trajectory.waypoints.front());
  for (std::size_t i = 0; i < robots.size(); ++i) {
    EXPECT_EQ(robots[i].entry.duration(), 3.0);
    EXPECT_EQ(robots[i].entry.waypoints.front(), f.setup.grasp[i]);
    EXPECT_EQ(robots[i].entry.waypoints.back(), f.setup.trajectory.waypoints.front());
    if (i + 1 < robots.size()) {
      EXPECT_GT(robots[i].start, robots[i + 1].start);
      EXPECT_LE(robots[i].stop_time, robots[i + 1].stop_time);
    }
  }
  EXPECT_TRUE(f.setup.schedule.warnings.empty());
}

TEST(MakeSchedule, Errors) {
  const auto f = overhand_fold();
  EXPECT_THROW(make_schedule(9, -1.0, f.setup.trajectory, f.setup.grasp), Error);
  EXPECT_THROW(make_schedule(8, 1.0, f.setup.trajectory, f.setup.grasp), Error);
  const auto capped = make_schedule(9, 1000.0, f.setup.trajectory, f.setup.grasp, {}, 3600.0);
  EXPECT_FALSE(capped.warnings.empty());
}

TEST(MakeSchedule, DefaultDelayKeepsTrackersWithinReach) {
  // arc length along the trajectory between consecutive tracking robots
  const auto f = overhand_fold();
  const auto& traj = f.setup.trajectory;
  const auto& robots = f.setup.schedule.robots;
  auto arc = [&](double t0, double t1) {
    return testing::simpson([&](double t) { return eval_trajectory(traj, t).velocity.norm(); }, t0, t1, 1e-10);
  };
  for (std::size_t i = 0; i + 1 < robots.size(); ++i) {
    for (double t = robots[i].start; t <= robots[i].start + robots[i].stop_time; t += 0.25) {
      const double ti = std::min(t - robots[i].start, robots[i].stop_time);
      const double tj = std::min(t - robots[i + 1].start, robots[i + 1].stop_time);
      EXPECT_LE(arc(ti, tj), f.plan.lengths[i] + 1e-9) << i << " " << t;
    }
  }
}

TEST(MakeSchedule, FoldReachMargins) {
  const auto f = overhand_fold();
  for (double m : fold_reach_margins(f.setup.trajectory.waypoints, f.plan.lengths)) EXPECT_GT(m, 0.0);
}

TEST(DefaultDelay, ShortestSegment) {
  EXPECT_NEAR(default_delay({3.0, 1.875, 4.0}), 1.0, 1e-15);
  TrajectoryOptions fast;
  fast.v_ref = 2.0;
  EXPECT_NEAR(default_delay({3.75}, fast), 1.0, 1e-15);
}

}  // namespace
}  // namespace knotfold
