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

#ifndef KNOTFOLD_CATENARY_HPP_
#define KNOTFOLD_CATENARY_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "knotfold/error.hpp"

namespace knotfold {

/// Largest argument passed to cosh/sinh. Beyond it a configuration is
/// reported as degenerate instead of producing infinities.
inline constexpr double kMaxHyperbolicArg = 700.0;

/// Smallest sag-to-half-span ratio accepted before a cable counts as taut.
inline constexpr double kMinSagRatio = 1e-12;

/// cosh(x) - 1 without cancellation for small x.
inline double cosh_minus_one(double x) {
  const double sh = std::sinh(0.5 * x);
  return 2.0 * sh * sh;
}

struct CatenaryParams {
  double half_span = 0.0;  // s
  double sag = 0.0;        // h
  double shape = 0.0;      // a
};

namespace detail {

inline void require_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be finite and positive");
  }
}

/// Root of a convex function F on (0, inf) with F(0) = 0, F'(0) < 0 and
/// F -> +inf. Bisection to a 1e-3 relative bracket, then Newton from the
/// right end, which converges monotonically for convex F.
template <typename F, typename DF>
double convex_positive_root(F&& f, DF&& df, double guess) {
  double hi = std::max(guess, 1e-300);
  while (f(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > kMaxHyperbolicArg) {
      throw Error(ErrorCode::kDegenerate, "hyperbolic argument exceeds overflow guard");
    }
  }
  double lo = hi * 0.5;
  while (f(lo) >= 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) throw Error(ErrorCode::kDegenerate, "root underflows");
  }
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  double x = hi;
  for (int it = 0; it < 100; ++it) {
    const double fx = f(x);
    const double slope = df(x);
    if (!(slope > 0.0)) break;
    double next = x - fx / slope;
    if (!(next > lo && next <= hi)) next = 0.5 * (lo + hi);
    if (f(next) > 0.0) hi = next; else lo = next;
    const bool done = std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x;
    x = next;
    if (done) break;
  }
  return x;
}

}  // namespace detail

/// Shape constant a of the catenary with sag h over half-span s, i.e. the
/// unique positive root of h/a = cosh(s/a) - 1.
inline double solve_intrinsic(double h, double s, double tol = 1e-12) {
  detail::require_finite_positive(h, "sag h");
  detail::require_finite_positive(s, "half span s");
  if (!(tol > 0.0 && tol <= 1e-6)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must lie in (0, 1e-6]");
  }
  const double k = h / s;
  if (k < kMinSagRatio) {
    throw Error(ErrorCode::kDegenerate, "sag/span ratio too small: cable is taut");
  }
  // with x = s/a: 2 sinh^2(x/2) - k x = 0
  auto f = [k](double x) { return cosh_minus_one(x) - k * x; };
  auto df = [k](double x) { return std::sinh(x) - k; };
  const double x = detail::convex_positive_root(f, df, std::max(2.0 * k, 1e-3));
  const double a = s / x;
  const double residual = std::abs(h / a - cosh_minus_one(s / a));
  if (!(residual <= tol * std::max(1.0, h / a))) {
    throw Error(ErrorCode::kConvergence,
                "intrinsic equation residual " + std::to_string(residual) + " above tolerance");
  }
  return a;
}

/// Shape constant a of a cable of length l hung between two points at equal
/// height 2s apart: 2 a sinh(s/a) = l.
inline double solve_from_length(double length, double s, double tol = 1e-12) {
  detail::require_finite_positive(length, "cable length");
  detail::require_finite_positive(s, "half span s");
  const double m = length / (2.0 * s);
  if (!(m > 1.0 + 1e-15)) {
    throw Error(ErrorCode::kTaut, "cable length " + std::to_string(length) +
                                      " does not exceed span " + std::to_string(2.0 * s));
  }
  // with x = s/a: sinh(x) - m x = 0
  auto f = [m](double x) { return std::sinh(x) - m * x; };
  auto df = [m](double x) { return std::cosh(x) - m; };
  const double x = detail::convex_positive_root(f, df, std::max(std::sqrt(6.0 * (m - 1.0)), 1e-3));
  const double a = s / x;
  const double residual = std::abs(2.0 * a * std::sinh(s / a) - length);
  if (!(residual <= std::max(tol, 1e-14) * length)) {
    throw Error(ErrorCode::kConvergence, "length residual above tolerance");
  }
  return a;
}

/// Catenary in its local yz-frame with the vertex at the origin.
inline Vec3 eval_local(double a, double r) { return {0.0, r, a * cosh_minus_one(r / a)}; }

/// Closed-form arc length of the symmetric catenary over [-s, s].
inline double arc_length(double a, double s) { return 2.0 * a * std::sinh(s / a); }

/// Sag of a catenary with shape constant a over half-span s.
inline double sag_of(double a, double s) { return a * cosh_minus_one(s / a); }

/// One catenary span of a cable. The curve lies in the vertical plane through
/// `vertex` with horizontal direction (cos heading, sin heading); the local
/// parameter r runs over [r_begin, r_end] and is zero at the vertex. A taut
/// span degenerates to the straight segment start-end.
struct CatenarySegment {
  CatenaryParams params;
  Vec3 vertex = Vec3::Zero();
  double heading = 0.0;
  double r_begin = 0.0;
  double r_end = 0.0;
  bool straight = false;
  Vec3 start = Vec3::Zero();
  Vec3 end = Vec3::Zero();
  int first_index = 0;
  int second_index = 1;

  Vec3 direction() const { return {std::cos(heading), std::sin(heading), 0.0}; }

  /// Parameter length: horizontal span, or chord length for straight spans.
  double span() const { return straight ? (end - start).norm() : r_end - r_begin; }

  Vec3 at_local(double r) const {
    const double u = std::clamp(r / params.shape, -kMaxHyperbolicArg, kMaxHyperbolicArg);
    return vertex + r * direction() + Vec3(0.0, 0.0, params.shape * cosh_minus_one(u));
  }

  /// Point at parameter t in [0, span()].
  Vec3 eval(double t) const {
    if (straight) {
      const double len = span();
      return len > 0.0 ? Vec3(start + (t / len) * (end - start)) : start;
    }
    return at_local(r_begin + t);
  }

  /// Height of the curve above the horizontal line through `p`'s xy.
  double height_at(const Vec2& xy) const {
    if (straight) {
      const Vec2 a = start.head<2>();
      const Vec2 d = end.head<2>() - a;
      const double t = d.squaredNorm() > 0.0 ? (xy - a).dot(d) / d.squaredNorm() : 0.0;
      return start.z() + t * (end.z() - start.z());
    }
    const double r = (xy - vertex.head<2>()).dot(direction().head<2>());
    return at_local(r).z();
  }

  double length() const {
    if (straight) return span();
    return params.shape * (std::sinh(r_end / params.shape) - std::sinh(r_begin / params.shape));
  }
};

/// Catenary with sag h hanging between two points of equal height.
inline CatenarySegment make_segment(const Vec3& p_i, const Vec3& p_next, double h,
                                    double tol = 1e-12, int index = 0) {
  if (std::abs(p_i.z() - p_next.z()) > 1e-9 * std::max(1.0, std::abs(p_i.z()))) {
    throw Error(ErrorCode::kInvalidArgument, "segment endpoints must share a height");
  }
  const Vec2 chord = p_next.head<2>() - p_i.head<2>();
  const double s = 0.5 * chord.norm();
  if (!(s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "coincident segment endpoints");
  CatenarySegment seg;
  seg.params = {s, h, solve_intrinsic(h, s, tol)};
  seg.heading = std::atan2(chord.y(), chord.x());
  seg.vertex = 0.5 * (p_i + p_next) - Vec3(0.0, 0.0, h);
  seg.r_begin = -s;
  seg.r_end = s;
  seg.start = p_i;
  seg.end = p_next;
  seg.first_index = index;
  seg.second_index = index + 1;
  return seg;
}

/// Cable of known length hung between two arbitrary points. The shape
/// constant solves sqrt(l^2 - dz^2) = 2 a sinh(H / 2a) for horizontal span H;
/// the vertex is offset so that both points lie on the curve. Nearly
/// vertical or taut spans come back straight.
inline CatenarySegment hang_cable(const Vec3& p, const Vec3& q, double length, int index = 0) {
  CatenarySegment seg;
  seg.start = p;
  seg.end = q;
  seg.first_index = index;
  seg.second_index = index + 1;
  const Vec2 chord = q.head<2>() - p.head<2>();
  const double horizontal = chord.norm();
  const double dz = q.z() - p.z();
  const double distance = std::hypot(horizontal, dz);
  const double effective_sq = length * length - dz * dz;
  seg.heading = horizontal > 0.0 ? std::atan2(chord.y(), chord.x()) : 0.0;
  if (horizontal < 1e-9 || distance >= length * (1.0 - 1e-12) || effective_sq <= 0.0) {
    seg.straight = true;
    seg.params = {0.5 * horizontal, 0.0, std::numeric_limits<double>::infinity()};
    return seg;
  }
  const double s = 0.5 * horizontal;
  double a = 0.0;
  try {
    a = solve_from_length(std::sqrt(effective_sq), s);
  } catch (const Error&) {
    seg.straight = true;
    seg.params = {s, 0.0, std::numeric_limits<double>::infinity()};
    return seg;
  }
  // vertex horizontal offset from the chord midpoint, measured along the chord
  const double offset = -a * std::atanh(std::clamp(dz / length, -1.0 + 1e-15, 1.0 - 1e-15));
  // with the vertex at local 0, p sits at r = -s - offset and q at r = s - offset
  seg.r_begin = -s - offset;
  seg.r_end = s - offset;
  const Vec2 vertex_xy = 0.5 * (p.head<2>() + q.head<2>()) + offset * Vec2(std::cos(seg.heading), std::sin(seg.heading));
  const double vertex_z = p.z() - a * cosh_minus_one(seg.r_begin / a);
  seg.vertex = Vec3(vertex_xy.x(), vertex_xy.y(), vertex_z);
  seg.params = {s, std::max(p.z(), q.z()) - vertex_z, a};
  return seg;
}

/// Lowest point of a hanging span within its parameter range.
inline double lowest_height(const CatenarySegment& seg) {
  if (seg.straight) return std::min(seg.start.z(), seg.end.z());
  if (seg.r_begin <= 0.0 && seg.r_end >= 0.0) return seg.vertex.z();
  return std::min(seg.at_local(seg.r_begin).z(), seg.at_local(seg.r_end).z());
}

/// C0 chain of catenary spans parametrized by cumulative span.
class MultiCatenaryCurve {
 public:
  MultiCatenaryCurve() = default;

  const std::vector<CatenarySegment>& segments() const { return segments_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  double total_parameter() const { return breakpoints_.empty() ? 0.0 : breakpoints_.back(); }

  friend MultiCatenaryCurve compose(std::vector<CatenarySegment> segments, double tol);

 private:
  std::vector<CatenarySegment> segments_;
  std::vector<double> breakpoints_;
};

/// Chains segments; consecutive spans must meet within `tol`.
inline MultiCatenaryCurve compose(std::vector<CatenarySegment> segments, double tol = 1e-9) {
  if (segments.empty()) throw Error(ErrorCode::kInvalidArgument, "compose needs at least one segment");
  MultiCatenaryCurve curve;
  curve.breakpoints_.push_back(0.0);
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (k > 0) {
      const Vec3 prev_end = segments[k - 1].eval(segments[k - 1].span());
      const Vec3 next_start = segments[k].eval(0.0);
      const double gap = (prev_end - next_start).norm();
      if (gap > tol * std::max(1.0, prev_end.norm())) {
        throw Error(ErrorCode::kInvalidArgument, "segments " + std::to_string(k - 1) + " and " +
                                                     std::to_string(k) + " are " +
                                                     std::to_string(gap) + " apart");
      }
    }
    curve.breakpoints_.push_back(curve.breakpoints_.back() + segments[k].span());
  }
  curve.segments_ = std::move(segments);
  return curve;
}

inline Vec3 eval_curve(const MultiCatenaryCurve& curve, double t) {
  const auto& q = curve.breakpoints();
  if (q.empty() || t < 0.0 || t > q.back()) {
    throw Error(ErrorCode::kOutOfRange, "curve parameter " + std::to_string(t) + " out of range");
  }
  auto it = std::upper_bound(q.begin(), q.end(), t);
  std::size_t k = static_cast<std::size_t>(std::distance(q.begin(), it));
  k = k == 0 ? 0 : k - 1;
  k = std::min(k, curve.segments().size() - 1);
  return curve.segments()[k].eval(t - q[k]);
}

struct HeightBound {
  double h_max = 0.0;
  int iterations = 0;
};

/// Height of the under-catenary above its own vertex at the worst crossing
/// position: sag h over the longest half span (L-d)/2, evaluated one cell in
/// from its end.
inline double worst_case_rise(double h, int grid_size, double d) {
  const double extent = grid_size * d;
  const double half_span = 0.5 * (extent - d);
  const double offset = 0.5 * std::max(extent - 3.0 * d, 0.0);
  const double a = solve_intrinsic(h, half_span);
  return a * cosh_minus_one(offset / a);
}

inline double clearance_margin(double h_min) { return 1e-3 * h_min; }

/// Smallest h_max with h_max >= h_min + worst_case_rise(h_max) + margin.
/// Fixed-point iteration from h_min + d, finished by bisection so the
/// returned value satisfies the inequality.
inline HeightBound h_max_bound(double h_min, int grid_size, double d, double tol = 1e-12) {
  detail::require_finite_positive(h_min, "h_min");
  detail::require_finite_positive(d, "cell width d");
  if (grid_size < 2) throw Error(ErrorCode::kInvalidArgument, "grid size must be at least 2");
  const double margin = clearance_margin(h_min);
  auto gap = [&](double h) { return h - h_min - worst_case_rise(h, grid_size, d) - margin; };

  double h = h_min + d;
  int it = 0;
  constexpr int kMaxIterations = 10000;
  for (; it < kMaxIterations; ++it) {
    const double next = h_min + worst_case_rise(h, grid_size, d) + margin;
    const bool done = std::abs(next - h) <= tol * next;
    h = next;
    if (done) break;
  }
  if (it == kMaxIterations) {
    throw Error(ErrorCode::kConvergence,
                "h_max fixed point did not converge; last iterate " + std::to_string(h));
  }
  double lo = h;
  double hi = h;
  double step = std::max(tol, 1e-15) * h;
  while (gap(hi) < 0.0) {
    hi += step;
    step *= 2.0;
  }
  while (gap(lo) >= 0.0 && lo > h_min) {
    lo -= step;
    step *= 2.0;
  }
  lo = std::max(lo, h_min);
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) >= 0.0 ? hi : lo) = mid;
  }
  return {hi, it + 1};
}

struct CrossingRef {
  int over_segment = -1;
  int under_segment = -1;
};

/// Vertical gap (over curve minus under curve) on the line where the
/// vertical planes of each crossing pair intersect. Positive means the over
/// curve stays above.
inline std::vector<double> crossing_clearances(const MultiCatenaryCurve& curve,
                                               const std::vector<CrossingRef>& crossings) {
  std::vector<double> out;
  out.reserve(crossings.size());
  const auto& segs = curve.segments();
  for (const auto& x : crossings) {
    if (x.over_segment < 0 || x.under_segment < 0 ||
        x.over_segment >= static_cast<int>(segs.size()) ||
        x.under_segment >= static_cast<int>(segs.size())) {
      throw Error(ErrorCode::kOutOfRange, "crossing references a missing segment");
    }
    const auto& over = segs[x.over_segment];
    const auto& under = segs[x.under_segment];
    const Vec2 uo = over.direction().head<2>();
    const Vec2 uu = under.direction().head<2>();
    const double cross = uo.x() * uu.y() - uo.y() * uu.x();
    if (std::abs(cross) < 1e-12) {
      throw Error(ErrorCode::kInvalidArgument, "crossing segments lie in parallel planes");
    }
    // over.start + t uo = under.start + w uu
    const Vec2 delta = under.start.head<2>() - over.start.head<2>();
    const double t = (delta.x() * uu.y() - delta.y() * uu.x()) / cross;
    const Vec2 meet = over.start.head<2>() + t * uo;
    out.push_back(over.height_at(meet) - under.height_at(meet));
  }
  return out;
}

}  // namespace knotfold

#endif  // KNOTFOLD_CATENARY_HPP_
