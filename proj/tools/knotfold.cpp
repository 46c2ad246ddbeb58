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


// knotfold: plan, simulate and verify knots folded by cable-carrying robots.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "knotfold/grid_search.hpp"
#include "knotfold/io.hpp"
#include "knotfold/representation.hpp"
#include "knotfold/simulator.hpp"
#include "knotfold/trajectory.hpp"

#ifndef KNOTFOLD_DEFAULT_ASSETS
#define KNOTFOLD_DEFAULT_ASSETS "assets"
#endif

namespace fs = std::filesystem;
using namespace knotfold;

namespace {

enum Exit : int {
  kOk = 0,
  kInvalid = 1,
  kNotFound = 2,
  kIncomplete = 3,
  kMismatch = 4,
  kInconclusive = 5,
};

struct KnotSource {
  std::string knot;
  std::optional<std::string> gauss;
  std::string grid;
};

struct PlanOptions {
  KnotSource source;
  double d = 1.0;
  double h_min = 1.0;
  std::optional<double> z_p;
  std::optional<double> cable_length;
  int n_max = kMaxSearchGridSize;
  int samples = 128;
  std::string out = ".";
};

struct SimOptions {
  std::string plan_file;
  std::optional<double> t_d;
  TrajectoryOptions traj;
  SimConfig sim;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string assets_dir() {
  if (const char* env = std::getenv("KNOTFOLD_ASSETS"); env && *env) return env;
  return KNOTFOLD_DEFAULT_ASSETS;
}

std::string asset_path(const std::string& name) {
  std::string file = name;
  for (auto& ch : file) {
    if (ch == '-') ch = '_';
  }
  return (fs::path(assets_dir()) / "knots" / (file + ".json")).string();
}

void add_source_options(CLI::App* cmd, KnotSource& src) {
  auto* knot = cmd->add_option("--knot", src.knot, "bundled knot: overhand, figure_eight, carrick");
  auto* gauss = cmd->add_option("--gauss", src.gauss, "Gauss code such as \"1- 2+ 3- 1+ 2- 3+\"");
  auto* grid = cmd->add_option("--grid", src.grid, "grid diagram JSON file");
  knot->excludes(gauss, grid);
  gauss->excludes(grid);
}

void add_plan_options(CLI::App* cmd, PlanOptions& o) {
  add_source_options(cmd, o.source);
  cmd->add_option("--d", o.d, "grid cell width [m]")->check(CLI::PositiveNumber);
  cmd->add_option("--hmin", o.h_min, "sag of segments that pass over [m]")->check(CLI::PositiveNumber);
  cmd->add_option("--zp", o.z_p, "height of the knot plane [m], default 2 h_max")->check(CLI::PositiveNumber);
  cmd->add_option("--cable-length", o.cable_length, "available cable; rescales d and h_min to fit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--nmax", o.n_max, "largest grid searched for a Gauss code")->check(CLI::Range(2, kMaxSearchGridSize));
  cmd->add_option("--samples", o.samples, "verification samples per segment")->check(CLI::Range(32, 1 << 16));
  cmd->add_option("--out", o.out, "output directory");
}

struct ResolvedKnot {
  OpenGridDiagram diagram;
  std::optional<GaussCode> code;
  std::string origin;
};

ResolvedKnot resolve(const KnotSource& src, int n_max) {
  auto from_asset = [](const GridAsset& a, const std::string& origin) {
    return ResolvedKnot{open_diagram(a.diagram), a.code, origin};
  };
  if (src.gauss) {
    const auto code = parse_gauss_code(*src.gauss);
    const auto found = grid_search(code, n_max);
    std::printf("search: %lld candidates in %.3f s\n", static_cast<long long>(found.candidates), found.seconds);
    if (!found.diagram) {
      throw Error(ErrorCode::kNotFound, "no grid diagram up to " + std::to_string(n_max) + "x" +
                                            std::to_string(n_max) + "; supply one with --grid");
    }
    return {open_diagram(*found.diagram), code, "search"};
  }
  if (!src.grid.empty()) return from_asset(load_grid(src.grid), src.grid);
  if (!src.knot.empty()) return from_asset(load_grid(asset_path(src.knot)), asset_path(src.knot));
  throw Error(ErrorCode::kInvalidArgument, "give one of --knot, --gauss or --grid");
}

struct Planned {
  KnotPlan plan;
  OpenGridDiagram diagram;
};

Planned make_plan(const PlanOptions& o) {
  const auto knot = resolve(o.source, o.n_max);
  PlanRequest req{knot.diagram, o.d, o.h_min, o.z_p};
  KnotPlan plan;
  if (o.cable_length) {
    auto r = rescale_for_cable(req, *o.cable_length);
    std::printf("rescaled to d = %.6g, h_min = %.6g\n", r.cell_width, r.h_min);
    plan = std::move(r.plan);
  } else {
    plan = plan_from_request(req);
  }
  if (knot.code && !same_knot_code(plan.target, *knot.code)) {
    throw Error(ErrorCode::kInvalidArgument, "diagram from " + knot.origin + " encodes " + plan.target.to_string() +
                                                 ", not " + knot.code->to_string());
  }
  return {std::move(plan), knot.diagram};
}

void print_plan(const KnotPlan& plan) {
  std::printf("grid %dx%d, robots %d, segments %d, crossings %zu\n", plan.polyline.grid_size,
              plan.polyline.grid_size, plan.robot_count(), plan.polyline.segment_count(),
              plan.polyline.crossings.size());
  std::printf("h_min %.6g, h_max %.6g, z_p %.6g, cable %.6g m\n", plan.h_min, plan.h_max, plan.plane_height,
              plan.total_length);
  std::printf("gauss code %s\n", plan.target.to_string().c_str());
  for (std::size_t k = 0; k < plan.clearances.size(); ++k) {
    std::printf("crossing %zu clearance %.6g\n", k + 1, plan.clearances[k]);
  }
}

int cmd_plan(const PlanOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto planned = make_plan(o);
  const auto& plan = planned.plan;
  fs::create_directories(o.out);
  const fs::path out(o.out);
  write_text_file((out / "plan.json").string(), plan_to_json(plan, planned.diagram).dump(2) + "\n");
  write_text_file((out / "grid.json").string(), format_grid_json(grid_to_json(planned.diagram.base)));
  write_text_file((out / "cut_list.txt").string(), format_cut_list(plan));
  auto pts = sample_curve(plan.curve, o.samples);
  pts.push_back(plan.polyline.closure_point);
  write_text_file((out / "samples.csv").string(), samples_csv(pts));
  print_plan(plan);
  std::printf("%s", format_cut_list(plan).c_str());
  const auto check = verify_plan(plan, o.samples);
  std::printf("topology %s\n", to_string(check.verdict));
  std::printf("runtime %.3f s\n", seconds_since(t0));
  return check.ok() ? kOk : (check.verdict == Verdict::kInconclusive ? kInconclusive : kMismatch);
}

int cmd_simulate(const PlanOptions& po, const SimOptions& so) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(po.out);
  const fs::path out(po.out);
  KnotPlan plan;
  if (!so.plan_file.empty()) {
    plan = plan_from_json(parse_json(read_text_file(so.plan_file)));
  } else {
    auto planned = make_plan(po);
    plan = std::move(planned.plan);
    write_text_file((out / "plan.json").string(), plan_to_json(plan, planned.diagram).dump(2) + "\n");
  }
  so.sim.validate();
  const auto setup = plan_fold(plan, so.traj, so.t_d);
  for (const auto& w : setup.trajectory.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  for (const auto& w : setup.schedule.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  write_text_file((out / "trajectory.json").string(),
                  trajectory_to_json(setup.trajectory, setup.schedule, setup.grasp, so.traj).dump(2) + "\n");

  SimTrace trace;
  try {
    trace = run(plan, setup, so.sim);
  } catch (const SimulationDiverged& e) {
    write_text_file((out / "trace.csv").string(), trace_csv(e.trace()));
    write_text_file((out / "events.csv").string(), events_csv(e.trace()));
    throw;
  }
  write_text_file((out / "trace.csv").string(), trace_csv(trace));
  write_text_file((out / "margins.csv").string(), margins_csv(trace));
  write_text_file((out / "events.csv").string(), events_csv(trace));
  const double wall = seconds_since(t0);
  write_text_file((out / "verdict.json").string(), verdict_to_json(plan, trace, wall).dump(2) + "\n");

  double max_err = 0.0;
  for (double e : trace.max_error) max_err = std::max(max_err, e);
  std::printf("robots %d, delay %.6g s, simulated %.3f s in %ld steps\n", plan.robot_count(), setup.schedule.delay,
              trace.end_time - setup.schedule.begin_time(), trace.steps);
  std::printf("status %s, max tracking error %.3g m, violation steps %ld, floor contacts %ld\n",
              to_string(trace.status), max_err, trace.violation_steps, trace.floor_contacts);
  std::printf("extracted %s\ntarget    %s\ntopology %s\n", trace.topology.extracted.to_string().c_str(),
              trace.topology.target.to_string().c_str(), to_string(trace.topology.verdict));
  std::printf("runtime %.3f s\n", wall);
  if (trace.status != SimStatus::kCompleted) return kIncomplete;
  switch (trace.topology.verdict) {
    case Verdict::kMatch: return kOk;
    case Verdict::kMismatch: return kMismatch;
    case Verdict::kInconclusive: return kInconclusive;
  }
  return kInvalid;
}

int cmd_verify(const std::string& file, const KnotSource& src) {
  GaussCode target;
  if (src.gauss) {
    target = parse_gauss_code(*src.gauss);
  } else if (!src.knot.empty()) {
    const auto asset = load_grid(asset_path(src.knot));
    target = asset.code ? *asset.code : planar_gauss_code(trace_polyline(open_diagram(asset.diagram), 1.0, 1.0));
  } else {
    throw Error(ErrorCode::kInvalidArgument, "give the target with --gauss or --knot");
  }
  const auto pts = parse_samples_csv(read_text_file(file));
  if (pts.size() < 3) throw Error(ErrorCode::kInvalidArgument, "need at least 3 samples");
  GaussCode extracted;
  try {
    extracted = gauss_code_of_curve(pts, true).code;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateCrossing) throw;
    std::printf("inconclusive: %s\n", e.what());
    return kInconclusive;
  }
  std::printf("extracted %s\ntarget    %s\n", canonicalize(extracted).to_string().c_str(),
              canonicalize(target).to_string().c_str());
  const bool same = same_knot_code(extracted, target);
  std::printf("%s\n", same ? "match" : "mismatch");
  return same ? kOk : kMismatch;
}

int cmd_search(const KnotSource& src, int n_max, const std::string& out) {
  GaussCode code;
  if (src.gauss) {
    code = parse_gauss_code(*src.gauss);
  } else if (!src.knot.empty() && src.knot != "unknot") {
    const auto asset = load_grid(asset_path(src.knot));
    if (!asset.code) throw Error(ErrorCode::kInvalidArgument, "asset has no Gauss code");
    code = *asset.code;
  } else if (src.knot != "unknot") {
    throw Error(ErrorCode::kInvalidArgument, "give the knot with --gauss or --knot");
  }
  const auto found = grid_search(code, n_max);
  std::printf("candidates %lld\nseconds %.3f\n", static_cast<long long>(found.candidates), found.seconds);
  if (!found.diagram) {
    std::printf("no grid diagram up to %dx%d\n", n_max, n_max);
    return kNotFound;
  }
  const auto& g = *found.diagram;
  std::printf("found %dx%d\n", g.size(), g.size());
  for (int r = 0; r < g.size(); ++r) {
    for (int c = 0; c < g.size(); ++c) std::printf("%3d", g.at(r, c));
    std::printf("\n");
  }
  if (!out.empty()) {
    fs::create_directories(out);
    GridAsset asset{g, "", code, "grid_search"};
    write_text_file((fs::path(out) / "grid.json").string(), format_grid_json(grid_asset_to_json(asset)));
  }
  return kOk;
}

int exit_for(const Error& e) { return e.code() == ErrorCode::kNotFound ? kNotFound : kInvalid; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan, simulate and verify knots tied by cable-carrying aerial robots"};
  app.require_subcommand(1);

  PlanOptions plan_opts;
  auto* plan = app.add_subcommand("plan", "build the multi-catenary plan of a knot");
  add_plan_options(plan, plan_opts);

  PlanOptions sim_plan_opts;
  SimOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "fold the knot with simulated robots");
  add_plan_options(simulate, sim_plan_opts);
  simulate->add_option("--plan", sim_opts.plan_file, "plan JSON written by `plan`")->check(CLI::ExistingFile);
  simulate->add_option("--td", sim_opts.t_d, "leader-follower delay [s]")->check(CLI::NonNegativeNumber);
  simulate->add_option("--kp", sim_opts.sim.kp, "position gain [1/s^2]");
  simulate->add_option("--kd", sim_opts.sim.kd, "velocity gain [1/s]");
  simulate->add_option("--dt", sim_opts.sim.dt, "integration step [s]");
  simulate->add_option("--vref", sim_opts.traj.v_ref, "mean speed per trajectory interval [m/s]")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--max-time", sim_opts.sim.max_time, "stop the simulation at this time [s]");
  simulate->add_option("--record-every", sim_opts.sim.record_every, "steps between trace rows");

  KnotSource verify_src;
  std::string verify_file;
  auto* verify = app.add_subcommand("verify", "compare the Gauss code of a sampled closed curve with a target");
  verify->add_option("samples_file", verify_file, "CSV with x,y,z rows")->required()->check(CLI::ExistingFile);
  add_source_options(verify, verify_src);

  KnotSource search_src;
  int search_nmax = 5;
  std::string search_out;
  auto* search = app.add_subcommand("search", "find the smallest grid diagram of a Gauss code");
  add_source_options(search, search_src);
  search->add_option("--nmax", search_nmax, "largest grid size")->check(CLI::Range(2, kMaxSearchGridSize));
  search->add_option("--out", search_out, "write grid.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors share the invalid-input exit code
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    if (*plan) return cmd_plan(plan_opts);
    if (*simulate) {
      sim_plan_opts.samples = std::max(sim_plan_opts.samples, 32);
      sim_opts.sim.verify_samples = sim_plan_opts.samples;
      return cmd_simulate(sim_plan_opts, sim_opts);
    }
    if (*verify) return cmd_verify(verify_file, verify_src);
    if (*search) return cmd_search(search_src, search_nmax, search_out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  }
  return kInvalid;
}
