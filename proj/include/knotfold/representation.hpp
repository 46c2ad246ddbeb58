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

#ifndef KNOTFOLD_REPRESENTATION_HPP_
#define KNOTFOLD_REPRESENTATION_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "knotfold/catenary.hpp"
#include "knotfold/curve_topology.hpp"
#include "knotfold/error.hpp"
#include "knotfold/gauss_code.hpp"
#include "knotfold/grid_diagram.hpp"

namespace knotfold {

/// Multi-catenary representation of an opened knot diagram.
struct KnotPlan {
  KnotPolyline polyline;
  GaussCode target;             // planar Gauss code of the polyline
  std::vector<double> heights;  // per segment, h_min or h_max
  MultiCatenaryCurve curve;
  std::vector<double> lengths;  // per segment cable length
  double total_length = 0.0;
  double cell_width = 0.0;
  double plane_height = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
  std::vector<double> clearances;  // per polyline crossing

  int robot_count() const { return static_cast<int>(polyline.points.size()); }
};

/// A segment hangs at h_max iff it passes under at least one crossing.
inline std::vector<double> assign_heights(const KnotPolyline& poly, double h_min, double h_max) {
  if (!(h_min > 0.0) || !(h_max > h_min)) {
    throw Error(ErrorCode::kInvalidArgument, "require h_max > h_min > 0");
  }
  std::vector<double> heights(static_cast<std::size_t>(poly.segment_count()), h_min);
  for (const auto& x : poly.crossings) heights[x.under_segment] = h_max;
  return heights;
}

/// Plane height used when none is given: twice h_max, which keeps the deepest
/// fold waypoint (1.5 h_max below the plane) off the floor.
inline double default_plane_height(double h_max) { return 2.0 * h_max; }

inline double plan_h_max(int grid_size, double d, double h_min) {
  return h_max_bound(h_min, grid_size, d).h_max;
}

inline std::vector<CrossingRef> crossing_refs(const KnotPolyline& poly) {
  std::vector<CrossingRef> refs;
  refs.reserve(poly.crossings.size());
  for (const auto& x : poly.crossings) refs.push_back({x.over_segment, x.under_segment});
  return refs;
}

inline KnotPlan build_plan(const KnotPolyline& poly, double h_min, double tol = 1e-12) {
  if (!(h_min > 0.0)) throw Error(ErrorCode::kInvalidArgument, "h_min must be positive");
  if (!(poly.plane_height > 0.0)) throw Error(ErrorCode::kInvalidArgument, "z_p must be positive");
  if (poly.segment_count() < 1) throw Error(ErrorCode::kInvalidArgument, "polyline has no segments");

  KnotPlan plan;
  plan.polyline = poly;
  plan.cell_width = poly.cell_width;
  plan.plane_height = poly.plane_height;
  plan.h_min = h_min;
  plan.h_max = plan_h_max(poly.grid_size, poly.cell_width, h_min);
  if (!(poly.plane_height > plan.h_max)) {
    throw Error(ErrorCode::kFloor, "plane height " + std::to_string(poly.plane_height) +
                                       " must exceed h_max " + std::to_string(plan.h_max) +
                                       ", otherwise the cables would touch the floor");
  }
  plan.target = planar_gauss_code(poly);
  plan.heights = assign_heights(poly, h_min, plan.h_max);

  std::vector<CatenarySegment> segments;
  for (int i = 0; i < poly.segment_count(); ++i) {
    segments.push_back(make_segment(poly.points[i], poly.points[i + 1], plan.heights[i], tol, i));
  }
  plan.curve = compose(std::move(segments));

  double total = 0.0;
  for (const auto& seg : plan.curve.segments()) {
    plan.lengths.push_back(arc_length(seg.params.shape, seg.params.half_span));
    total += plan.lengths.back();
  }
  plan.total_length = total;

  plan.clearances = crossing_clearances(plan.curve, crossing_refs(poly));
  for (std::size_t k = 0; k < plan.clearances.size(); ++k) {
    if (!(plan.clearances[k] > 0.0)) {
      throw Error(ErrorCode::kConvergence, "crossing " + std::to_string(k) +
                                               " has non-positive clearance " +
                                               std::to_string(plan.clearances[k]));
    }
  }
  return plan;
}

struct CutList {
  double total_length = 0.0;
  std::vector<double> lengths;
};

inline CutList cable_cut_list(const KnotPlan& plan) { return {plan.total_length, plan.lengths}; }

/// Opened diagram plus the geometry scale. h_min and z_p scale with d.
struct PlanRequest {
  OpenGridDiagram diagram;
  double cell_width = 1.0;
  double h_min = 1.0;
  std::optional<double> plane_height;  // default_plane_height when empty
};

inline KnotPlan plan_from_request(const PlanRequest& req) {
  const double h_max = plan_h_max(req.diagram.base.size(), req.cell_width, req.h_min);
  const double z_p = req.plane_height.value_or(default_plane_height(h_max));
  return build_plan(trace_polyline(req.diagram, req.cell_width, z_p), req.h_min);
}

struct RescaleResult {
  double cell_width = 0.0;
  double h_min = 0.0;
  KnotPlan plan;
  int iterations = 0;
};

/// Scales the grid so the total cable length lands in
/// [given (1 - 1e-6), given]. Bisection on the scale factor.
inline RescaleResult rescale_for_cable(const PlanRequest& req, double given_length) {
  if (!std::isfinite(given_length) || !(given_length > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cable length must be positive");
  }
  auto plan_at = [&](double kappa) {
    PlanRequest scaled = req;
    scaled.cell_width = req.cell_width * kappa;
    scaled.h_min = req.h_min * kappa;
    if (req.plane_height) scaled.plane_height = *req.plane_height * kappa;
    return plan_from_request(scaled);
  };
  const double base_total = plan_at(1.0).total_length;
  const double estimate = given_length / base_total;
  double lo = 0.5 * estimate;
  double hi = 2.0 * estimate;
  while (plan_at(lo).total_length > given_length) lo *= 0.5;
  while (plan_at(hi).total_length < given_length) hi *= 2.0;
  RescaleResult out;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    KnotPlan p = plan_at(mid);
    out.iterations = it + 1;
    if (p.total_length <= given_length && p.total_length >= given_length * (1.0 - 1e-6)) {
      out.cell_width = req.cell_width * mid;
      out.h_min = req.h_min * mid;
      out.plan = std::move(p);
      return out;
    }
    (p.total_length > given_length ? hi : lo) = mid;
  }
  throw Error(ErrorCode::kConvergence, "grid rescale did not converge");
}

enum class Verdict { kMatch, kMismatch, kInconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kMatch: return "match";
    case Verdict::kMismatch: return "mismatch";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

struct TopologyReport {
  Verdict verdict = Verdict::kInconclusive;
  GaussCode extracted;
  GaussCode target;
  std::vector<double> crossing_gaps;
  double min_gap = std::numeric_limits<double>::infinity();
  int samples_per_segment = 0;
  std::string message;

  bool ok() const { return verdict == Verdict::kMatch; }
};

/// Samples every span at its two ends and at (j + 1/2)/M of its parameter
/// range. With M a power of two no interior sample lands on a grid node.
inline std::vector<Vec3> sample_curve(const MultiCatenaryCurve& curve, int samples_per_segment) {
  std::vector<Vec3> pts;
  const auto& segs = curve.segments();
  pts.reserve(segs.size() * (samples_per_segment + 1) + 1);
  for (const auto& seg : segs) {
    const double span = seg.span();
    pts.push_back(seg.eval(0.0));
    for (int j = 0; j < samples_per_segment; ++j) {
      pts.push_back(seg.eval(span * (j + 0.5) / samples_per_segment));
    }
  }
  pts.push_back(segs.back().eval(segs.back().span()));
  return pts;
}

/// Samples the curve, closes it through `closure_point` (the removed grid
/// corner) and compares the extracted Gauss code with `target` up to
/// rotation, reversal and relabeling. An inconclusive extraction is retried
/// once at twice the sampling density.
inline TopologyReport verify_topology(const MultiCatenaryCurve& curve, const GaussCode& target,
                                      int samples_per_segment = 128,
                                      std::optional<Vec3> closure_point = std::nullopt) {
  if (samples_per_segment < 32) {
    throw Error(ErrorCode::kInvalidArgument, "samples_per_segment must be at least 32");
  }
  TopologyReport report;
  report.target = target;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int density = samples_per_segment << attempt;
    report.samples_per_segment = density;
    auto pts = sample_curve(curve, density);
    if (closure_point) pts.push_back(*closure_point);
    try {
      const auto extracted = gauss_code_of_curve(pts, true);
      report.extracted = extracted.code;
      report.crossing_gaps.clear();
      report.min_gap = std::numeric_limits<double>::infinity();
      for (const auto& x : extracted.crossings) {
        report.crossing_gaps.push_back(x.gap);
        report.min_gap = std::min(report.min_gap, x.gap);
      }
      report.verdict = same_knot_code(extracted.code, target) ? Verdict::kMatch : Verdict::kMismatch;
      report.message.clear();
      return report;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateCrossing) throw;
      report.verdict = Verdict::kInconclusive;
      report.message = std::string(e.what()) + "; raise the sampling density";
    }
  }
  return report;
}

inline TopologyReport verify_plan(const KnotPlan& plan, int samples_per_segment = 128) {
  return verify_topology(plan.curve, plan.target, samples_per_segment, plan.polyline.closure_point);
}

}  // namespace knotfold

#endif  // KNOTFOLD_REPRESENTATION_HPP_
