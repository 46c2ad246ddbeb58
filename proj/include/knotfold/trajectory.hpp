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

#ifndef KNOTFOLD_TRAJECTORY_HPP_
#define KNOTFOLD_TRAJECTORY_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "knotfold/error.hpp"

namespace knotfold {

struct TrajectoryOptions {
  double v_ref = 1.0;    // m/s, average speed per interval
  double t_floor = 0.5;  // s, shortest interval
  double t_entry = 3.0;  // s, grasp point to trajectory start
};

/// Quintic coefficients of one interval: p(u) = sum_k c[k] u^k for local
/// time u in [0, duration].
struct QuinticInterval {
  std::array<Vec3, 6> coeffs;
  double start_time = 0.0;
  double duration = 0.0;
};

struct TrajectoryState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
};

/// Piecewise rest-to-rest quintic through a waypoint list.
struct Trajectory {
  std::vector<Vec3> waypoints;
  std::vector<double> times;  // timestamp of every waypoint
  std::vector<QuinticInterval> intervals;
  std::vector<std::string> warnings;

  double duration() const { return times.empty() ? 0.0 : times.back(); }
};

/// Minimum-jerk interval from rest at a to rest at b.
inline QuinticInterval rest_to_rest(const Vec3& a, const Vec3& b, double start, double duration) {
  QuinticInterval q;
  q.start_time = start;
  q.duration = duration;
  const Vec3 delta = b - a;
  const double t3 = duration * duration * duration;
  q.coeffs = {a,
              Vec3::Zero(),
              Vec3::Zero(),
              10.0 * delta / t3,
              -15.0 * delta / (t3 * duration),
              6.0 * delta / (t3 * duration * duration)};
  return q;
}

inline TrajectoryState eval_interval(const QuinticInterval& q, double u) {
  const auto& c = q.coeffs;
  TrajectoryState s;
  s.position = c[0] + u * (c[1] + u * (c[2] + u * (c[3] + u * (c[4] + u * c[5]))));
  s.velocity = c[1] + u * (2.0 * c[2] + u * (3.0 * c[3] + u * (4.0 * c[4] + u * 5.0 * c[5])));
  s.acceleration = 2.0 * c[2] + u * (6.0 * c[3] + u * (12.0 * c[4] + u * 20.0 * c[5]));
  return s;
}

/// Interval k lasts max(|p_k+1 - p_k| / v_ref, t_floor). Coincident
/// consecutive waypoints produce no interval and share a timestamp.
inline Trajectory quintic_spline(const std::vector<Vec3>& waypoints, const TrajectoryOptions& opts = {}) {
  if (waypoints.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 waypoints");
  if (!(opts.v_ref > 0.0)) throw Error(ErrorCode::kInvalidArgument, "v_ref must be positive");
  Trajectory traj;
  traj.waypoints = waypoints;
  traj.times.push_back(0.0);
  for (std::size_t k = 0; k + 1 < waypoints.size(); ++k) {
    const double dist = (waypoints[k + 1] - waypoints[k]).norm();
    const double now = traj.times.back();
    if (dist == 0.0) {
      traj.warnings.push_back("waypoints " + std::to_string(k) + " and " + std::to_string(k + 1) +
                              " coincide; interval skipped");
      traj.times.push_back(now);
      continue;
    }
    const double duration = std::max(dist / opts.v_ref, opts.t_floor);
    traj.intervals.push_back(rest_to_rest(waypoints[k], waypoints[k + 1], now, duration));
    traj.times.push_back(now + duration);
  }
  return traj;
}

/// Straight rest-to-rest connector of fixed duration.
inline Trajectory connector(const Vec3& from, const Vec3& to, double duration) {
  if (!(duration > 0.0)) throw Error(ErrorCode::kInvalidArgument, "connector duration must be positive");
  Trajectory traj;
  traj.waypoints = {from, to};
  traj.times = {0.0, duration};
  if (from != to) traj.intervals.push_back(rest_to_rest(from, to, 0.0, duration));
  return traj;
}

/// Position, velocity and acceleration at t. Outside [0, T] the end point is
/// held with zero derivatives.
inline TrajectoryState eval_trajectory(const Trajectory& traj, double t) {
  TrajectoryState s;
  if (traj.intervals.empty() || t <= 0.0) {
    s.position = traj.waypoints.front();
    return s;
  }
  if (t >= traj.duration()) {
    s.position = traj.waypoints.back();
    return s;
  }
  auto it = std::upper_bound(traj.intervals.begin(), traj.intervals.end(), t,
                             [](double v, const QuinticInterval& q) { return v < q.start_time; });
  const auto& q = *std::prev(it);
  return eval_interval(q, std::min(t - q.start_time, q.duration));
}

/// p*_1, q*_1, p*_2, ..., q*_{n-1}, p*_n with
/// q*_i = (p*_i + p*_{i+1}) / 2 - (2 - (-1)^i) / 2 * h_max * z.
inline std::vector<Vec3> augment_waypoints(const std::vector<Vec3>& targets, double h_max) {
  if (targets.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 targets");
  if (!(h_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "h_max must be positive");
  std::vector<Vec3> out;
  out.reserve(2 * targets.size() - 1);
  for (std::size_t k = 0; k + 1 < targets.size(); ++k) {
    const int i = static_cast<int>(k) + 1;
    const double dip = (i % 2 == 1 ? 1.5 : 0.5) * h_max;
    const Vec3 q = 0.5 * (targets[k] + targets[k + 1]) - Vec3(0.0, 0.0, dip);
    if (!(q.z() > 0.0)) {
      throw Error(ErrorCode::kFloor, "intermediate waypoint " + std::to_string(i) +
                                         " reaches the floor; raise the plane height");
    }
    out.push_back(targets[k]);
    out.push_back(q);
  }
  out.push_back(targets.back());
  return out;
}

/// Grasp points on the straight cable lying along the x axis.
inline std::vector<Vec3> grasp_points(const std::vector<double>& lengths) {
  std::vector<Vec3> out{Vec3::Zero()};
  double x = 0.0;
  for (double l : lengths) {
    if (!(l > 0.0)) throw Error(ErrorCode::kInvalidArgument, "segment lengths must be positive");
    x += l;
    out.emplace_back(x, 0.0, 0.0);
  }
  return out;
}

struct RobotSchedule {
  double start = 0.0;      // t_d (n - i)
  double stop_time = 0.0;  // trajectory time of the robot's target waypoint
  Vec3 target = Vec3::Zero();
  Trajectory entry;        // grasp point to trajectory start, ends at `start`

  double entry_start() const { return start - entry.duration(); }
};

/// Leader-follower timing. Robot index k is 0-based; the leader is the last
/// robot and starts at t = 0.
struct FoldSchedule {
  double delay = 0.0;
  std::vector<RobotSchedule> robots;
  std::vector<std::string> warnings;

  double begin_time() const {
    double t = 0.0;
    for (const auto& r : robots) t = std::min(t, r.entry_start());
    return t;
  }
};

/// Peak speed of a rest-to-rest minimum-jerk interval relative to its mean.
inline constexpr double kMinJerkPeakRatio = 1.875;

/// Largest delay for which the trajectory cannot cover more than the
/// shortest cable segment in one delay, so two consecutive robots that are
/// both tracking never stretch their cable.
inline double default_delay(const std::vector<double>& lengths, const TrajectoryOptions& opts = {}) {
  if (lengths.empty()) return 0.0;
  return *std::min_element(lengths.begin(), lengths.end()) / (kMinJerkPeakRatio * opts.v_ref);
}

/// Cable slack left when robot i waits at its target while robot i+1 flies
/// through q*_i to its own target: l_i minus the farthest point of that
/// path from p*_i. Negative entries mean the fold stretches the cable.
inline std::vector<double> fold_reach_margins(const std::vector<Vec3>& waypoints,
                                              const std::vector<double>& lengths) {
  std::vector<double> out;
  for (std::size_t k = 0; k < lengths.size() && 2 * k + 2 < waypoints.size(); ++k) {
    const Vec3& p = waypoints[2 * k];
    const double reach = std::max((waypoints[2 * k + 1] - p).norm(), (waypoints[2 * k + 2] - p).norm());
    out.push_back(lengths[k] - reach);
  }
  return out;
}

inline FoldSchedule make_schedule(int n, double delay, const Trajectory& traj,
                                  const std::vector<Vec3>& grasp, const TrajectoryOptions& opts = {},
                                  double time_cap = 3600.0) {
  if (!(delay >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "delay must be non-negative");
  if (n < 2 || static_cast<int>(grasp.size()) != n || static_cast<int>(traj.waypoints.size()) != 2 * n - 1) {
    throw Error(ErrorCode::kInvalidArgument, "schedule needs n grasp points and 2n-1 waypoints");
  }
  FoldSchedule schedule;
  schedule.delay = delay;
  const Vec3 entry_point = traj.waypoints.front();
  for (int k = 0; k < n; ++k) {
    RobotSchedule r;
    r.start = delay * (n - 1 - k);
    r.stop_time = traj.times[2 * k];
    r.target = traj.waypoints[2 * k];
    r.entry = connector(grasp[k], entry_point, opts.t_entry);
    schedule.robots.push_back(std::move(r));
  }
  const double finish = schedule.robots.back().start + traj.duration();
  const double first_stop = schedule.robots.front().start + schedule.robots.front().stop_time;
  if (std::max(finish, first_stop) > time_cap) {
    schedule.warnings.push_back("schedule lasts beyond the configured time cap");
  }
  return schedule;
}

}  // namespace knotfold

#endif  // KNOTFOLD_TRAJECTORY_HPP_
