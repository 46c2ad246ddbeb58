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

#include <gtest/gtest.h>

#include "knotfold/io.hpp"
#include "knotfold/simulator.hpp"
#include "test_support.hpp"

namespace knotfold {
namespace {

TEST(ControlLaw, FeedforwardOnly) {
  RobotState s;
  s.position = {1, 2, 3};
  s.velocity = {0.5, 0, 0};
  TrajectoryState ref;
  ref.position = s.position;
  ref.velocity = s.velocity;
  ref.acceleration = {0.1, -0.2, 0.3};
  EXPECT_EQ(control_law(s, ref, 25, 10), ref.acceleration);
}

TEST(ControlLaw, StaticError) {
  RobotState s;
  TrajectoryState ref;
  ref.position = {0.1, 0, -0.2};
  EXPECT_TRUE(control_law(s, ref, 25, 10).isApprox(Vec3(2.5, 0, -5.0)));
}

TEST(Integrate, CoastingAdvances) {
  RobotState s;
  s.velocity = {1, 0, 0};
  integrate(s, Vec3::Zero(), 0.1);
  EXPECT_EQ(s.position, Vec3(0.1, 0, 0));
  // u = 0 keeps the kinetic energy
  EXPECT_EQ(s.velocity.squaredNorm(), 1.0);
}

TEST(Integrate, ConstantAccelerationSum) {
  RobotState s;
  const double dt = 0.01;
  for (int k = 0; k < 100; ++k) integrate(s, {0, 0, -1}, dt);
  EXPECT_NEAR(s.velocity.z(), -1.0, 1e-12);
  EXPECT_NEAR(s.position.z(), -0.5 * (1 + dt), 1e-12);
}

// Closed-loop tracking of a 1D quintic from an initial offset, against RK4
// with a step 100 times finer.
TEST(ControlLaw, ClosedLoopMatchesRk4) {
  const auto traj = quintic_spline({{0, 0, 0}, {2, 0, 0}, {2, 0, 0.5}}, {});
  const double kp = 25, kd = 10;
  const Vec3 p0(0.05, 0, 0), v0(0.3, 0, 0);
  auto accel = [&](double t, const Vec3& p, const Vec3& v) {
    RobotState s{p, v, Phase::kTracking};
    return control_law(s, eval_trajectory(traj, t), kp, kd);
  };
  const double h = 1e-5;
  Vec3 p = p0, v = v0;
  std::vector<double> oracle_err;
  const int per_sample = 10000;
  for (int k = 0; k <= 50 * per_sample; ++k) {
    const double t = k * h;
    if (k % per_sample == 0) oracle_err.push_back((p - eval_trajectory(traj, t).position).norm());
    const Vec3 k1p = v, k1v = accel(t, p, v);
    const Vec3 k2p = v + 0.5 * h * k1v, k2v = accel(t + 0.5 * h, p + 0.5 * h * k1p, v + 0.5 * h * k1v);
    const Vec3 k3p = v + 0.5 * h * k2v, k3v = accel(t + 0.5 * h, p + 0.5 * h * k2p, v + 0.5 * h * k2v);
    const Vec3 k4p = v + h * k3v, k4v = accel(t + h, p + h * k3p, v + h * k3v);
    p += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  RobotState s{p0, v0, Phase::kTracking};
  const double dt = 1e-3;
  double max_sim = 0, max_oracle = 0;
  for (int k = 0; k <= 5000; ++k) {
    const double t = k * dt;
    if (k % 100 == 0) {
      const double err = (s.position - eval_trajectory(traj, t).position).norm();
      const double ref = oracle_err[k / 100];
      if (ref > 0.1 * p0.norm()) EXPECT_NEAR(err, ref, 0.1 * ref) << t;
      max_sim = std::max(max_sim, err);
      max_oracle = std::max(max_oracle, ref);
    }
    integrate(s, accel(t, s.position, s.velocity), dt);
  }
  EXPECT_NEAR(max_sim, max_oracle, 0.1 * max_oracle);
}

TEST(SimConfig, Validation) {
  SimConfig c;
  EXPECT_NO_THROW(c.validate());
  for (auto mutate : {+[](SimConfig& x) { x.kp = 0; }, +[](SimConfig& x) { x.kd = -1; },
                      +[](SimConfig& x) { x.dt = 0; }, +[](SimConfig& x) { x.record_every = 0; }}) {
    SimConfig bad;
    mutate(bad);
    EXPECT_THROW(bad.validate(), Error);
  }
}

TEST(CableState, EqualHeightSagRoundTrip) {
  const double l = 3.0;
  const auto state = cable_state({{0, 0, 5}, {2, 0, 5}}, {l});
  EXPECT_TRUE(state.violations.empty());
  const auto& seg = state.curve.segments()[0];
  const double a = testing::length_oracle(l, 1.0);
  EXPECT_NEAR(seg.params.sag, a * (std::cosh(1.0 / a) - 1.0), 1e-10);
  EXPECT_NEAR(testing::intrinsic_oracle(seg.params.sag, 1.0), a, 1e-9);
}

TEST(CableState, TautAndStretched) {
  const auto taut = cable_state({{0, 0, 5}, {2, 0, 5}}, {2.0});
  EXPECT_TRUE(taut.curve.segments()[0].straight);
  EXPECT_TRUE(taut.violations.empty());
  const auto over = cable_state({{0, 0, 5}, {2.1, 0, 5}}, {2.0});
  ASSERT_EQ(over.violations.size(), 1u);
  EXPECT_EQ(over.violations[0].pair, 0);
  EXPECT_NEAR(over.violations[0].deficit, 0.1, 1e-12);
  EXPECT_THROW(cable_state({{0, 0, 5}}, {2.0}), Error);
}

KnotPlan overhand_plan() {
  return plan_from_request({open_diagram(testing::asset("overhand").diagram), 1.0, 1.34, std::nullopt});
}

TEST(Run, OverhandFolds) {
  const auto plan = overhand_plan();
  const auto trace = run(plan, plan_fold(plan));
  EXPECT_EQ(trace.status, SimStatus::kCompleted);
  EXPECT_TRUE(trace.topology.ok()) << trace.topology.extracted.to_string();
  EXPECT_EQ(trace.violation_steps, 0);
  for (double o : trace.final_offsets) EXPECT_LE(o, trace.eps_pos);
  for (double e : trace.max_error) EXPECT_LT(e, 0.05 * plan.cell_width);
  for (const auto& p : trace.pairs) EXPECT_GE(p.min_margin, 0.0);
  // samples are dt * record_every apart
  for (std::size_t k = 1; k + 1 < trace.samples.size(); ++k) {
    EXPECT_NEAR(trace.samples[k].t - trace.samples[k - 1].t, trace.config.dt * trace.config.record_every, 1e-9);
  }
  const auto summary = audit_margins(trace);
  EXPECT_TRUE(summary.violations.empty());
  for (double m : summary.min_margin) EXPECT_GE(m, 0.0);
}

TEST(Run, PhasesMoveForward) {
  const auto plan = overhand_plan();
  const auto trace = run(plan, plan_fold(plan));
  std::vector<int> last(static_cast<std::size_t>(plan.robot_count()), 0);
  for (const auto& s : trace.samples) {
    for (std::size_t i = 0; i < s.robots.size(); ++i) {
      const int p = static_cast<int>(s.robots[i].phase);
      EXPECT_GE(p, last[i]);
      last[i] = p;
    }
  }
  for (int p : last) EXPECT_EQ(p, static_cast<int>(Phase::kHolding));
}

TEST(Run, TwoRobots) {
  KnotPolyline poly;
  poly.points = {{1, 1, 6}, {1, 3, 6}};
  poly.closure_point = {2, 2, 6};
  poly.grid_size = 2;
  poly.cell_width = 1.0;
  poly.plane_height = 6.0;
  const auto plan = build_plan(poly, 1.0);
  const auto trace = run(plan, plan_fold(plan));
  EXPECT_EQ(trace.status, SimStatus::kCompleted);
  EXPECT_TRUE(trace.topology.ok());
  EXPECT_TRUE(trace.topology.extracted.empty());
}

TEST(Run, ZeroGainIsRejected) {
  const auto plan = overhand_plan();
  SimConfig cfg;
  cfg.kp = 0.0;
  try {
    run(plan, plan_fold(plan), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Run, TimeLimitIsIncomplete) {
  const auto plan = overhand_plan();
  SimConfig cfg;
  cfg.max_time = 5.0;
  const auto trace = run(plan, plan_fold(plan), cfg);
  EXPECT_EQ(trace.status, SimStatus::kIncomplete);
  EXPECT_FALSE(trace.ok());
}

TEST(Run, Deterministic) {
  const auto plan = overhand_plan();
  const auto setup = plan_fold(plan);
  const auto a = run(plan, setup);
  const auto b = run(plan, setup);
  EXPECT_EQ(trace_csv(a), trace_csv(b));
  EXPECT_EQ(margins_csv(a), margins_csv(b));
  for (std::size_t i = 0; i < a.final_states.size(); ++i) {
    EXPECT_EQ(a.final_states[i].position, b.final_states[i].position);
  }
}

TEST(Run, FirstOrderInDt) {
  // states at a fixed time mid-fold for dt, dt/2 and dt/4
  const auto plan = plan_from_request({open_diagram(GridDiagram(2, {1, -1, -1, 1})), 1.0, 1.0, std::nullopt});
  const auto setup = plan_fold(plan);
  const double t_stop = 2.0;
  std::vector<std::vector<Vec3>> finals;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    SimConfig cfg;
    cfg.dt = dt;
    cfg.max_time = t_stop;
    const auto trace = run(plan, setup, cfg);
    EXPECT_NEAR(trace.end_time, t_stop, 1e-9);
    std::vector<Vec3> p;
    for (const auto& s : trace.final_states) p.push_back(s.position);
    finals.push_back(p);
  }
  double e1 = 0, e2 = 0;
  for (std::size_t i = 0; i < finals[0].size(); ++i) {
    e1 = std::max(e1, (finals[0][i] - finals[1][i]).norm());
    e2 = std::max(e2, (finals[1][i] - finals[2][i]).norm());
  }
  EXPECT_LT(e1, 1e-2);
  EXPECT_GT(e1 / e2, 1.4);
  EXPECT_LT(e1 / e2, 2.8);
}

TEST(AuditMargins, Empty) {
  const auto s = audit_margins(SimTrace{});
  EXPECT_TRUE(s.min_margin.empty());
  EXPECT_TRUE(s.violations.empty());
}

TEST(AuditMargins, ReportsViolationInterval) {
  SimTrace trace;
  for (int k = 0; k < 6; ++k) {
    SimSample s;
    s.t = 0.1 * k;
    s.errors = {0.0, 0.0};
    s.margins = {k >= 2 && k <= 3 ? -0.05 * k : 0.2};
    s.engaged = {1};
    s.lowest = {1.0};
    trace.samples.push_back(s);
  }
  const auto sum = audit_margins(trace);
  ASSERT_EQ(sum.violations.size(), 1u);
  EXPECT_NEAR(sum.violations[0].begin, 0.2, 1e-12);
  EXPECT_NEAR(sum.violations[0].end, 0.3, 1e-12);
  EXPECT_NEAR(sum.violations[0].worst_deficit, 0.15, 1e-12);
  EXPECT_NEAR(sum.min_margin[0], -0.15, 1e-12);
}

}  // namespace
}  // namespace knotfold
