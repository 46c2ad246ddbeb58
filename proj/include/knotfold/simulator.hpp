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


#ifndef KNOTFOLD_SIMULATOR_HPP_
#define KNOTFOLD_SIMULATOR_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "knotfold/catenary.hpp"
#include "knotfold/error.hpp"
#include "knotfold/representation.hpp"
#include "knotfold/trajectory.hpp"

namespace knotfold {

enum class Phase { kWaiting, kEntering, kTracking, kHolding };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::kWaiting: return "waiting";
    case Phase::kEntering: return "entering";
    case Phase::kTracking: return "tracking";
    case Phase::kHolding: return "holding";
  }
  return "unknown";
}

struct RobotState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Phase phase = Phase::kWaiting;
};

struct SimConfig {
  double dt = 1e-3;
  double kp = 25.0;
  double kd = 10.0;
  std::optional<double> eps_pos;   // default 1e-2 d
  std::optional<double> max_time;  // default: last stop + settle_time
  double settle_time = 30.0;
  double cable_tolerance = 1e-6;   // stretch tolerated before a violation is reported
  int record_every = 20;           // steps between trace samples
  int verify_samples = 128;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
    if (!(kp > 0.0) || !std::isfinite(kp)) throw Error(ErrorCode::kInvalidArgument, "kp must be positive");
    if (!(kd > 0.0) || !std::isfinite(kd)) throw Error(ErrorCode::kInvalidArgument, "kd must be positive");
    if (eps_pos && !(*eps_pos > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps_pos must be positive");
    if (max_time && !(*max_time > 0.0)) throw Error(ErrorCode::kInvalidArgument, "max_time must be positive");
    if (!(settle_time >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "settle_time must be non-negative");
    if (!(cable_tolerance >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "cable_tolerance must be non-negative");
    if (record_every < 1) throw Error(ErrorCode::kInvalidArgument, "record_every must be at least 1");
  }
};

/// PD tracking with acceleration feedforward.
inline Vec3 control_law(const RobotState& s, const TrajectoryState& ref, double kp, double kd) {
  return kp * (ref.position - s.position) + kd * (ref.velocity - s.velocity) + ref.acceleration;
}

/// Semi-implicit Euler: velocity first, then position with the new velocity.
inline void integrate(RobotState& s, const Vec3& u, double dt) {
  s.velocity += u * dt;
  s.position += s.velocity * dt;
}

/// Everything a robot needs to know to fly its part of the fold.
struct FoldSetup {
  Trajectory trajectory;
  std::vector<Vec3> grasp;
  FoldSchedule schedule;
};

inline FoldSetup plan_fold(const KnotPlan& plan, const TrajectoryOptions& opts = {},
                           std::optional<double> delay = std::nullopt) {
  FoldSetup out;
  out.trajectory = quintic_spline(augment_waypoints(plan.polyline.points, plan.h_max), opts);
  out.grasp = grasp_points(plan.lengths);
  out.schedule = make_schedule(plan.robot_count(), delay.value_or(default_delay(plan.lengths, opts)),
                               out.trajectory, out.grasp, opts);
  const auto margins = fold_reach_margins(out.trajectory.waypoints, plan.lengths);
  for (std::size_t k = 0; k < margins.size(); ++k) {
    if (margins[k] < 0.0) {
      out.schedule.warnings.push_back("robot " + std::to_string(k + 2) + " leaves cable reach of robot " +
                                      std::to_string(k + 1) + " while folding");
    }
  }
  return out;
}

/// Reference the controller tracks at time t, in the robot's current phase.
inline TrajectoryState reference(const RobotSchedule& r, Phase phase, const Trajectory& traj,
                                 const Vec3& grasp, double t) {
  switch (phase) {
    case Phase::kWaiting: {
      TrajectoryState s;
      s.position = grasp;
      return s;
    }
    case Phase::kEntering:
      return eval_trajectory(r.entry, t - r.entry_start());
    case Phase::kTracking:
      return eval_trajectory(traj, std::min(t - r.start, r.stop_time));
    case Phase::kHolding: {
      TrajectoryState s;
      s.position = r.target;
      return s;
    }
  }
  return {};
}

/// Command for one robot. Waiting robots hover in place and holding robots
/// keep their target.
inline Vec3 command(const RobotState& s, const TrajectoryState& ref, const SimConfig& cfg) {
  switch (s.phase) {
    case Phase::kWaiting:
      return -cfg.kd * s.velocity;
    case Phase::kHolding:
      return cfg.kp * (ref.position - s.position) - cfg.kd * s.velocity;
    default:
      return control_law(s, ref, cfg.kp, cfg.kd);
  }
}

struct CableViolation {
  int pair = 0;
  double deficit = 0.0;  // stretch beyond the segment length
};

struct CableState {
  MultiCatenaryCurve curve;
  std::vector<CableViolation> violations;
};

/// Hangs every segment between consecutive robots. Taut and over-stretched
/// segments are drawn straight; stretch beyond `tolerance` is reported.
inline CableState cable_state(const std::vector<Vec3>& positions, const std::vector<double>& lengths,
                              double tolerance = 1e-9) {
  if (positions.size() != lengths.size() + 1 || lengths.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cable_state needs n positions and n-1 lengths");
  }
  CableState out;
  std::vector<CatenarySegment> segs;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double dist = (positions[i + 1] - positions[i]).norm();
    if (dist > lengths[i] + tolerance) out.violations.push_back({static_cast<int>(i), dist - lengths[i]});
    segs.push_back(hang_cable(positions[i], positions[i + 1], lengths[i], static_cast<int>(i)));
  }
  out.curve = compose(std::move(segs));
  return out;
}

enum class SimStatus { kCompleted, kIncomplete };

inline const char* to_string(SimStatus s) { return s == SimStatus::kCompleted ? "completed" : "incomplete"; }

struct SimSample {
  double t = 0.0;
  std::vector<RobotState> robots;
  std::vector<Vec3> commands;
  std::vector<double> errors;   // distance to the reference
  std::vector<double> margins;  // l_i - |p_i - p_i+1|
  std::vector<char> engaged;    // both robots of the pair past their entry
  std::vector<double> lowest;   // lowest cable point per pair
};

struct SimEvent {
  double t = 0.0;
  std::string kind;
  int index = 0;  // robot for phase events, pair otherwise
  double value = 0.0;
  std::string detail;
};

struct PairStats {
  double min_margin = std::numeric_limits<double>::infinity();
  double sum_margin = 0.0;
  long count = 0;
  long violation_steps = 0;

  double mean_margin() const { return count > 0 ? sum_margin / static_cast<double>(count) : 0.0; }
};

struct SimTrace {
  SimConfig config;
  double eps_pos = 0.0;
  std::vector<SimSample> samples;
  std::vector<SimEvent> events;
  std::vector<PairStats> pairs;      // per step, only while engaged
  std::vector<double> max_error;     // per robot, over every step
  std::vector<RobotState> final_states;
  std::vector<double> final_offsets; // |p_i - p*_i| at the end
  SimStatus status = SimStatus::kIncomplete;
  double end_time = 0.0;
  long steps = 0;
  long violation_steps = 0;
  long floor_contacts = 0;
  TopologyReport topology;

  bool ok() const { return status == SimStatus::kCompleted && topology.ok(); }
};

/// Raised when the state stops being finite; carries the trace so far.
class SimulationDiverged : public Error {
 public:
  SimulationDiverged(const std::string& what, SimTrace trace)
      : Error(ErrorCode::kConvergence, what), trace_(std::move(trace)) {}
  const SimTrace& trace() const { return trace_; }

 private:
  SimTrace trace_;
};

inline bool engaged(Phase p) { return p == Phase::kTracking || p == Phase::kHolding; }

inline SimTrace run(const KnotPlan& plan, const Trajectory& traj, const FoldSchedule& schedule,
                    const std::vector<Vec3>& grasp, const SimConfig& config) {
  config.validate();
  const int n = plan.robot_count();
  if (static_cast<int>(schedule.robots.size()) != n || static_cast<int>(grasp.size()) != n ||
      static_cast<int>(traj.waypoints.size()) != 2 * n - 1) {
    throw Error(ErrorCode::kInvalidArgument, "plan, trajectory and schedule disagree on the robot count");
  }
  SimTrace trace;
  trace.config = config;
  trace.eps_pos = config.eps_pos.value_or(1e-2 * plan.cell_width);
  trace.pairs.assign(static_cast<std::size_t>(n - 1), {});
  trace.max_error.assign(static_cast<std::size_t>(n), 0.0);

  double last_stop = 0.0;
  for (const auto& r : schedule.robots) last_stop = std::max(last_stop, r.start + r.stop_time);
  const double t0 = schedule.begin_time();
  const double t_end = config.max_time.value_or(last_stop + config.settle_time);
  const long max_steps = static_cast<long>(std::ceil((t_end - t0) / config.dt));

  std::vector<RobotState> robots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) robots[i].position = grasp[i];
  std::vector<char> violating(static_cast<std::size_t>(n - 1), 0);
  std::vector<char> on_floor(static_cast<std::size_t>(n - 1), 0);

  auto advance_phases = [&](double t) {
    for (int i = 0; i < n; ++i) {
      auto& s = robots[i];
      const auto& r = schedule.robots[i];
      const Phase before = s.phase;
      if (s.phase == Phase::kWaiting && t >= r.entry_start()) s.phase = Phase::kEntering;
      if (s.phase == Phase::kEntering && t >= r.start) s.phase = Phase::kTracking;
      if (s.phase == Phase::kTracking && t - r.start >= r.stop_time &&
          (s.position - r.target).norm() <= trace.eps_pos) {
        s.phase = Phase::kHolding;
      }
      if (s.phase != before) trace.events.push_back({t, "phase", i + 1, 0.0, to_string(s.phase)});
    }
  };

  auto record = [&](double t, const std::vector<Vec3>& u, const std::vector<double>& err) {
    SimSample smp;
    smp.t = t;
    smp.robots = robots;
    smp.commands = u;
    smp.errors = err;
    for (int i = 0; i + 1 < n; ++i) {
      const Vec3& p = robots[i].position;
      const Vec3& q = robots[i + 1].position;
      const bool eng = engaged(robots[i].phase) && engaged(robots[i + 1].phase);
      smp.margins.push_back(plan.lengths[i] - (q - p).norm());
      smp.engaged.push_back(eng ? 1 : 0);
      smp.lowest.push_back(lowest_height(hang_cable(p, q, plan.lengths[i], i)));
      const bool contact = eng && smp.lowest.back() < 0.0;
      if (contact != static_cast<bool>(on_floor[i])) {
        trace.events.push_back({t, contact ? "floor_contact_begin" : "floor_contact_end", i + 1,
                                smp.lowest.back(), ""});
        if (contact) ++trace.floor_contacts;
        on_floor[i] = contact;
      }
    }
    trace.samples.push_back(std::move(smp));
  };

  std::vector<Vec3> u(static_cast<std::size_t>(n));
  std::vector<double> err(static_cast<std::size_t>(n));
  advance_phases(t0);
  long k = 0;
  double t = t0;
  for (;; ++k) {
    t = t0 + static_cast<double>(k) * config.dt;
    bool all_holding = true;
    for (int i = 0; i < n; ++i) {
      const auto ref = reference(schedule.robots[i], robots[i].phase, traj, grasp[i], t);
      u[i] = command(robots[i], ref, config);
      err[i] = (ref.position - robots[i].position).norm();
      trace.max_error[i] = std::max(trace.max_error[i], err[i]);
      all_holding = all_holding && robots[i].phase == Phase::kHolding;
    }
    for (int i = 0; i + 1 < n; ++i) {
      if (!(engaged(robots[i].phase) && engaged(robots[i + 1].phase))) continue;
      const double margin = plan.lengths[i] - (robots[i + 1].position - robots[i].position).norm();
      auto& st = trace.pairs[i];
      st.min_margin = std::min(st.min_margin, margin);
      st.sum_margin += margin;
      ++st.count;
      const bool bad = margin < -config.cable_tolerance;
      if (bad) {
        ++st.violation_steps;
        ++trace.violation_steps;
      }
      if (bad != static_cast<bool>(violating[i])) {
        trace.events.push_back({t, bad ? "violation_begin" : "violation_end", i + 1, -margin, ""});
        violating[i] = bad;
      }
    }
    if (all_holding || k >= max_steps) {
      record(t, u, err);
      trace.status = all_holding ? SimStatus::kCompleted : SimStatus::kIncomplete;
      break;
    }
    if (k % config.record_every == 0) record(t, u, err);
    for (int i = 0; i < n; ++i) {
      integrate(robots[i], u[i], config.dt);
      if (!robots[i].position.allFinite() || !robots[i].velocity.allFinite()) {
        trace.end_time = t;
        trace.steps = k;
        throw SimulationDiverged("robot " + std::to_string(i + 1) + " state is not finite at t = " +
                                     std::to_string(t + config.dt),
                                 std::move(trace));
      }
    }
    advance_phases(t0 + static_cast<double>(k + 1) * config.dt);
  }
  trace.end_time = t;
  trace.steps = k;
  trace.final_states = robots;
  std::vector<Vec3> final_positions;
  for (int i = 0; i < n; ++i) {
    final_positions.push_back(robots[i].position);
    trace.final_offsets.push_back((robots[i].position - schedule.robots[i].target).norm());
  }
  const auto cable = cable_state(final_positions, plan.lengths);
  trace.topology =
      verify_topology(cable.curve, plan.target, config.verify_samples, plan.polyline.closure_point);
  return trace;
}

inline SimTrace run(const KnotPlan& plan, const FoldSetup& setup, const SimConfig& config = {}) {
  return run(plan, setup.trajectory, setup.schedule, setup.grasp, config);
}

struct ViolationInterval {
  int pair = 0;
  double begin = 0.0;
  double end = 0.0;
  double worst_deficit = 0.0;
};

struct MarginSummary {
  std::vector<double> min_margin;   // per pair, engaged samples only
  std::vector<double> mean_margin;
  std::vector<double> max_error;    // per robot
  std::vector<ViolationInterval> violations;
};

/// Margin statistics over the recorded samples.
inline MarginSummary audit_margins(const SimTrace& trace, double tolerance = 1e-6) {
  MarginSummary out;
  if (trace.samples.empty()) return out;
  const std::size_t pairs = trace.samples.front().margins.size();
  const std::size_t robots = trace.samples.front().errors.size();
  out.min_margin.assign(pairs, std::numeric_limits<double>::infinity());
  out.mean_margin.assign(pairs, 0.0);
  out.max_error.assign(robots, 0.0);
  std::vector<long> count(pairs, 0);
  std::vector<std::optional<ViolationInterval>> open(pairs);
  for (const auto& s : trace.samples) {
    for (std::size_t r = 0; r < robots; ++r) out.max_error[r] = std::max(out.max_error[r], s.errors[r]);
    for (std::size_t p = 0; p < pairs; ++p) {
      const bool bad = s.engaged[p] && s.margins[p] < -tolerance;
      if (bad) {
        if (!open[p]) open[p] = ViolationInterval{static_cast<int>(p) + 1, s.t, s.t, 0.0};
        open[p]->end = s.t;
        open[p]->worst_deficit = std::max(open[p]->worst_deficit, -s.margins[p]);
      } else if (open[p]) {
        out.violations.push_back(*open[p]);
        open[p].reset();
      }
      if (!s.engaged[p]) continue;
      out.min_margin[p] = std::min(out.min_margin[p], s.margins[p]);
      out.mean_margin[p] += s.margins[p];
      ++count[p];
    }
  }
  for (std::size_t p = 0; p < pairs; ++p) {
    if (open[p]) out.violations.push_back(*open[p]);
    out.mean_margin[p] = count[p] > 0 ? out.mean_margin[p] / static_cast<double>(count[p]) : 0.0;
  }
  return out;
}

}  // namespace knotfold

#endif  // KNOTFOLD_SIMULATOR_HPP_
