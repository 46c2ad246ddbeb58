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


#ifndef KNOTFOLD_IO_HPP_
#define KNOTFOLD_IO_HPP_

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "knotfold/error.hpp"
#include "knotfold/gauss_code.hpp"
#include "knotfold/grid_diagram.hpp"
#include "knotfold/representation.hpp"
#include "knotfold/simulator.hpp"
#include "knotfold/trajectory.hpp"

namespace knotfold {

using Json = nlohmann::json;

inline constexpr const char* kGridSchema = "knotfold.grid/1";
inline constexpr const char* kPlanSchema = "knotfold.plan/1";
inline constexpr const char* kTrajectorySchema = "knotfold.trajectory/1";
inline constexpr const char* kVerdictSchema = "knotfold.verdict/1";

namespace detail {

inline Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }
inline Json vec_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

inline Vec3 vec3_of(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::kParse, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Vec2 vec2_of(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::kParse, "expected a 2-vector");
  return {j[0].get<double>(), j[1].get<double>()};
}

/// JSON has no infinity; straight spans store a null shape.
inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline double number_or_inf(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

inline void check_schema(const Json& j, const char* expected) {
  if (j.contains("schema") && j["schema"] != expected) {
    throw Error(ErrorCode::kParse, "unsupported schema " + j["schema"].dump() + ", expected " + expected);
  }
}

}  // namespace detail

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

// ---- grid ----------------------------------------------------------------

struct GridAsset {
  GridDiagram diagram;
  std::string name;
  std::optional<GaussCode> code;
  std::string provenance;
};

inline Json grid_to_json(const GridDiagram& g) {
  Json rows = Json::array();
  for (int r = 0; r < g.size(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < g.size(); ++c) row.push_back(g.at(r, c));
    rows.push_back(std::move(row));
  }
  return Json{{"schema", kGridSchema}, {"n", g.size()}, {"cells", std::move(rows)}};
}

inline Json grid_asset_to_json(const GridAsset& a) {
  Json j = grid_to_json(a.diagram);
  if (!a.name.empty()) j["name"] = a.name;
  if (a.code) j["code"] = a.code->to_string();
  if (!a.provenance.empty()) j["provenance"] = a.provenance;
  return j;
}

/// Pretty form with one matrix row per line.
inline std::string format_grid_json(const Json& j) {
  std::string out = "{\n";
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    out += first ? "" : ",\n";
    first = false;
    out += "  " + Json(key).dump() + ": ";
    if (key != "cells") {
      out += value.dump();
      continue;
    }
    out += "[";
    for (std::size_t r = 0; r < value.size(); ++r) out += (r ? ",\n    " : "\n    ") + value[r].dump();
    out += value.empty() ? "]" : "\n  ]";
  }
  return out + "\n}\n";
}

inline GridAsset grid_asset_from_json(const Json& j) {
  try {
    detail::check_schema(j, kGridSchema);
    const int n = j.at("n").get<int>();
    const auto& rows = j.at("cells");
    if (n < 0 || !rows.is_array() || static_cast<int>(rows.size()) != n) {
      throw Error(ErrorCode::kParse, "grid needs n rows of n cells");
    }
    std::vector<int> cells;
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        throw Error(ErrorCode::kParse, "grid needs n rows of n cells");
      }
      for (const auto& v : row) {
        const int x = v.get<int>();
        if (x < -1 || x > 1) throw Error(ErrorCode::kParse, "grid cells must be -1, 0 or 1");
        cells.push_back(x);
      }
    }
    GridAsset a{GridDiagram(n, std::move(cells)), j.value("name", ""), std::nullopt, j.value("provenance", "")};
    if (j.contains("code")) a.code = parse_gauss_code(j["code"].get<std::string>());
    return a;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("grid json: ") + e.what());
  }
}

inline GridAsset load_grid(const std::string& path) { return grid_asset_from_json(parse_json(read_text_file(path))); }

// ---- plan ----------------------------------------------------------------

inline Json plan_to_json(const KnotPlan& plan, const std::optional<OpenGridDiagram>& diagram = std::nullopt) {
  const auto& poly = plan.polyline;
  Json j;
  j["schema"] = kPlanSchema;
  if (diagram) {
    j["grid"] = grid_to_json(diagram->base);
    j["removed_corner"] = {diagram->removed_row, diagram->removed_col};
  }
  j["grid_size"] = poly.grid_size;
  j["robots"] = plan.robot_count();
  j["cell_width"] = plan.cell_width;
  j["plane_height"] = plan.plane_height;
  j["h_min"] = plan.h_min;
  j["h_max"] = plan.h_max;
  j["target"] = plan.target.to_string();
  Json pts = Json::array();
  for (const auto& p : poly.points) pts.push_back(detail::vec_json(p));
  j["points"] = std::move(pts);
  Json cells = Json::array();
  for (const auto& [r, c] : poly.cells) cells.push_back({r, c});
  j["cells"] = std::move(cells);
  j["closure_point"] = detail::vec_json(poly.closure_point);
  Json xs = Json::array();
  for (const auto& x : poly.crossings) {
    xs.push_back({{"over", x.over_segment}, {"under", x.under_segment}, {"point", detail::vec_json(x.point)}});
  }
  j["crossings"] = std::move(xs);
  j["heights"] = plan.heights;
  j["lengths"] = plan.lengths;
  j["total_length"] = plan.total_length;
  j["clearances"] = plan.clearances;
  Json segs = Json::array();
  for (const auto& s : plan.curve.segments()) {
    segs.push_back({{"half_span", s.params.half_span},
                    {"sag", s.params.sag},
                    {"shape", detail::number_or_null(s.params.shape)},
                    {"vertex", detail::vec_json(s.vertex)},
                    {"heading", s.heading},
                    {"r_begin", s.r_begin},
                    {"r_end", s.r_end},
                    {"straight", s.straight},
                    {"start", detail::vec_json(s.start)},
                    {"end", detail::vec_json(s.end)},
                    {"first", s.first_index},
                    {"second", s.second_index}});
  }
  j["segments"] = std::move(segs);
  return j;
}

/// Reads every stored field back verbatim; nothing is recomputed except the
/// curve breakpoints, which are cumulative sums of the stored spans.
inline KnotPlan plan_from_json(const Json& j) {
  try {
    detail::check_schema(j, kPlanSchema);
    KnotPlan plan;
    auto& poly = plan.polyline;
    poly.grid_size = j.at("grid_size").get<int>();
    plan.cell_width = poly.cell_width = j.at("cell_width").get<double>();
    plan.plane_height = poly.plane_height = j.at("plane_height").get<double>();
    plan.h_min = j.at("h_min").get<double>();
    plan.h_max = j.at("h_max").get<double>();
    plan.target = parse_gauss_code(j.at("target").get<std::string>());
    for (const auto& p : j.at("points")) poly.points.push_back(detail::vec3_of(p));
    for (const auto& c : j.at("cells")) poly.cells.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
    poly.closure_point = detail::vec3_of(j.at("closure_point"));
    for (const auto& x : j.at("crossings")) {
      poly.crossings.push_back({x.at("over").get<int>(), x.at("under").get<int>(), detail::vec2_of(x.at("point"))});
    }
    plan.heights = j.at("heights").get<std::vector<double>>();
    plan.lengths = j.at("lengths").get<std::vector<double>>();
    plan.total_length = j.at("total_length").get<double>();
    plan.clearances = j.at("clearances").get<std::vector<double>>();
    std::vector<CatenarySegment> segs;
    for (const auto& s : j.at("segments")) {
      CatenarySegment seg;
      seg.params = {s.at("half_span").get<double>(), s.at("sag").get<double>(), detail::number_or_inf(s.at("shape"))};
      seg.vertex = detail::vec3_of(s.at("vertex"));
      seg.heading = s.at("heading").get<double>();
      seg.r_begin = s.at("r_begin").get<double>();
      seg.r_end = s.at("r_end").get<double>();
      seg.straight = s.at("straight").get<bool>();
      seg.start = detail::vec3_of(s.at("start"));
      seg.end = detail::vec3_of(s.at("end"));
      seg.first_index = s.at("first").get<int>();
      seg.second_index = s.at("second").get<int>();
      segs.push_back(seg);
    }
    const std::size_t nseg = poly.points.size() < 2 ? 0 : poly.points.size() - 1;
    if (segs.size() != nseg || plan.heights.size() != nseg || plan.lengths.size() != nseg ||
        poly.cells.size() != poly.points.size()) {
      throw Error(ErrorCode::kParse, "plan arrays disagree on the segment count");
    }
    plan.curve = compose(std::move(segs));
    return plan;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("plan json: ") + e.what());
  }
}

inline std::optional<OpenGridDiagram> plan_diagram_from_json(const Json& j) {
  if (!j.contains("grid")) return std::nullopt;
  const auto& rc = j.at("removed_corner");
  return OpenGridDiagram{grid_asset_from_json(j["grid"]).diagram, rc.at(0).get<int>(), rc.at(1).get<int>()};
}

inline std::string format_cut_list(const KnotPlan& plan) {
  const auto cut = cable_cut_list(plan);
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "cable cut list: %d robots, %zu segments\n", plan.robot_count(), cut.lengths.size());
  out += buf;
  double mark = 0.0;
  for (std::size_t i = 0; i < cut.lengths.size(); ++i) {
    std::snprintf(buf, sizeof buf, "segment %2zu  robots %2zu-%-2zu  length %10.4f m  mark at %10.4f m\n", i + 1,
                  i + 1, i + 2, cut.lengths[i], mark);
    out += buf;
    mark += cut.lengths[i];
  }
  std::snprintf(buf, sizeof buf, "total %.4f m (last mark at %.4f m)\n", cut.total_length, mark);
  out += buf;
  return out;
}

// ---- trajectory ------------------------------------------------------------

inline Json trajectory_to_json(const Trajectory& traj, const FoldSchedule& schedule, const std::vector<Vec3>& grasp,
                               const TrajectoryOptions& opts) {
  Json j;
  j["schema"] = kTrajectorySchema;
  j["options"] = {{"v_ref", opts.v_ref}, {"t_floor", opts.t_floor}, {"t_entry", opts.t_entry}};
  j["duration"] = traj.duration();
  Json wps = Json::array();
  for (const auto& w : traj.waypoints) wps.push_back(detail::vec_json(w));
  j["waypoints"] = std::move(wps);
  j["times"] = traj.times;
  Json ivs = Json::array();
  for (const auto& q : traj.intervals) {
    Json coeffs;
    const char* axes[] = {"x", "y", "z"};
    for (int a = 0; a < 3; ++a) {
      Json c = Json::array();
      for (const auto& v : q.coeffs) c.push_back(v[a]);
      coeffs[axes[a]] = std::move(c);
    }
    ivs.push_back({{"start", q.start_time}, {"duration", q.duration}, {"coeffs", std::move(coeffs)}});
  }
  j["intervals"] = std::move(ivs);
  j["warnings"] = traj.warnings;
  Json robots = Json::array();
  for (std::size_t i = 0; i < schedule.robots.size(); ++i) {
    const auto& r = schedule.robots[i];
    robots.push_back({{"robot", i + 1},
                      {"grasp", detail::vec_json(grasp[i])},
                      {"entry_start", r.entry_start()},
                      {"start", r.start},
                      {"stop_time", r.stop_time},
                      {"target", detail::vec_json(r.target)}});
  }
  j["schedule"] = {{"delay", schedule.delay}, {"robots", std::move(robots)}, {"warnings", schedule.warnings}};
  return j;
}

// ---- simulation ------------------------------------------------------------

inline std::string trace_csv(const SimTrace& trace) {
  std::string out = "t,robot,phase,px,py,pz,vx,vy,vz,ux,uy,uz,error\n";
  char buf[512];
  for (const auto& s : trace.samples) {
    for (std::size_t i = 0; i < s.robots.size(); ++i) {
      const auto& r = s.robots[i];
      const auto& u = s.commands[i];
      std::snprintf(buf, sizeof buf, "%.6f,%zu,%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", s.t, i + 1,
                    to_string(r.phase), r.position.x(), r.position.y(), r.position.z(), r.velocity.x(),
                    r.velocity.y(), r.velocity.z(), u.x(), u.y(), u.z(), s.errors[i]);
      out += buf;
    }
  }
  return out;
}

inline std::string margins_csv(const SimTrace& trace) {
  std::string out = "t,pair,margin,engaged,lowest\n";
  char buf[256];
  for (const auto& s : trace.samples) {
    for (std::size_t p = 0; p < s.margins.size(); ++p) {
      std::snprintf(buf, sizeof buf, "%.6f,%zu,%.9g,%d,%.9g\n", s.t, p + 1, s.margins[p], s.engaged[p] ? 1 : 0,
                    s.lowest[p]);
      out += buf;
    }
  }
  return out;
}

inline std::string events_csv(const SimTrace& trace) {
  std::string out = "t,kind,index,value,detail\n";
  char buf[256];
  for (const auto& e : trace.events) {
    std::snprintf(buf, sizeof buf, "%.6f,%s,%d,%.9g,%s\n", e.t, e.kind.c_str(), e.index, e.value, e.detail.c_str());
    out += buf;
  }
  return out;
}

/// Verdict record. Wall-clock time lives under "runtime" so the rest of the
/// document is reproducible.
inline Json verdict_to_json(const KnotPlan& plan, const SimTrace& trace, double wall_seconds) {
  const auto summary = audit_margins(trace);
  Json j;
  j["schema"] = kVerdictSchema;
  j["status"] = to_string(trace.status);
  j["verdict"] = to_string(trace.topology.verdict);
  j["ok"] = trace.ok();
  j["extracted"] = trace.topology.extracted.to_string();
  j["target"] = trace.topology.target.to_string();
  j["extracted_canonical"] = canonicalize(trace.topology.extracted).to_string();
  j["target_canonical"] = canonicalize(trace.topology.target).to_string();
  j["message"] = trace.topology.message;
  j["plan_clearances"] = plan.clearances;
  j["crossing_gaps"] = trace.topology.crossing_gaps;
  j["min_crossing_gap"] = detail::number_or_null(trace.topology.min_gap);
  j["max_tracking_error"] = trace.max_error;
  j["final_offsets"] = trace.final_offsets;
  j["eps_pos"] = trace.eps_pos;
  Json pairs = Json::array();
  for (const auto& p : trace.pairs) {
    pairs.push_back({{"min_margin", detail::number_or_null(p.min_margin)},
                     {"mean_margin", p.mean_margin()},
                     {"violation_steps", p.violation_steps}});
  }
  j["pairs"] = std::move(pairs);
  Json intervals = Json::array();
  for (const auto& v : summary.violations) {
    intervals.push_back({{"pair", v.pair}, {"begin", v.begin}, {"end", v.end}, {"worst_deficit", v.worst_deficit}});
  }
  j["violation_intervals"] = std::move(intervals);
  j["violation_steps"] = trace.violation_steps;
  j["floor_contacts"] = trace.floor_contacts;
  j["end_time"] = trace.end_time;
  j["steps"] = trace.steps;
  j["config"] = {{"dt", trace.config.dt},
                 {"kp", trace.config.kp},
                 {"kd", trace.config.kd},
                 {"record_every", trace.config.record_every}};
  j["runtime"] = {{"wall_seconds", wall_seconds}};
  return j;
}

// ---- curve samples -----------------------------------------------------------

inline std::string samples_csv(const std::vector<Vec3>& pts) {
  std::string out = "x,y,z\n";
  char buf[128];
  for (const auto& p : pts) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.x(), p.y(), p.z());
    out += buf;
  }
  return out;
}

/// Reads x,y,z rows. Blank lines, '#' comments and a header row are skipped.
inline std::vector<Vec3> parse_samples_csv(const std::string& text) {
  std::vector<Vec3> pts;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const bool header_allowed = std::exchange(first_row, false);
    double x = 0.0, y = 0.0, z = 0.0;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%lf ,%lf ,%lf %c", &x, &y, &z, &tail) != 3) {
      if (header_allowed) continue;
      throw Error(ErrorCode::kParse, "bad sample on line " + std::to_string(lineno) + ": " + line);
    }
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      throw Error(ErrorCode::kParse, "non-finite sample on line " + std::to_string(lineno));
    }
    pts.emplace_back(x, y, z);
  }
  return pts;
}

}  // namespace knotfold

#endif  // KNOTFOLD_IO_HPP_
