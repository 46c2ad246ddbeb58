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

#ifndef KNOTFOLD_CURVE_TOPOLOGY_HPP_
#define KNOTFOLD_CURVE_TOPOLOGY_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "knotfold/error.hpp"
#include "knotfold/gauss_code.hpp"

namespace knotfold {

struct CurveTopologyOptions {
  double end_tolerance = 1e-9;  // fraction of a sample segment
  double z_tie = 1e-6;          // meters
};

struct CurveCrossing {
  int first_segment = -1;
  int second_segment = -1;
  Vec2 point = Vec2::Zero();
  double gap = 0.0;  // |dz| between the two strands
};

struct CurveGaussResult {
  GaussCode code;
  std::vector<CurveCrossing> crossings;
};

namespace detail {

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace detail

/// Gauss code of a sampled space curve from its xy projection. Every
/// transversal self-intersection of non-adjacent sample segments is a
/// crossing; the strand with larger z passes over. With `closure` the last
/// sample joins the first.
inline CurveGaussResult gauss_code_of_curve(std::span<const Vec3> samples, bool closure,
                                            const CurveTopologyOptions& opts = {}) {
  const int m = static_cast<int>(samples.size());
  if (m < 3) throw Error(ErrorCode::kInvalidArgument, "need at least 3 samples");
  const int segs = closure ? m : m - 1;
  auto a_of = [&](int i) -> const Vec3& { return samples[i]; };
  auto b_of = [&](int i) -> const Vec3& { return samples[(i + 1) % m]; };

  struct Box {
    double x0, x1, y0, y1;
  };
  std::vector<Box> boxes(segs);
  for (int i = 0; i < segs; ++i) {
    const Vec3& a = a_of(i);
    const Vec3& b = b_of(i);
    boxes[i] = {std::min(a.x(), b.x()), std::max(a.x(), b.x()), std::min(a.y(), b.y()),
                std::max(a.y(), b.y())};
  }

  struct Event {
    int segment;
    double t;
    int crossing;
    Pass pass;
  };
  std::vector<Event> events;
  CurveGaussResult result;
  const double eps = opts.end_tolerance;

  for (int i = 0; i < segs; ++i) {
    const Vec2 p = a_of(i).head<2>();
    const Vec2 d1 = b_of(i).head<2>() - p;
    for (int j = i + 2; j < segs; ++j) {
      if (closure && i == 0 && j == segs - 1) continue;  // adjacent through the wrap
      const Box& bi = boxes[i];
      const Box& bj = boxes[j];
      if (bi.x1 < bj.x0 || bj.x1 < bi.x0 || bi.y1 < bj.y0 || bj.y1 < bi.y0) continue;
      const Vec2 q = a_of(j).head<2>();
      const Vec2 d2 = b_of(j).head<2>() - q;
      const double den = detail::cross2(d1, d2);
      const Vec2 w = q - p;
      const double scale = d1.norm() * d2.norm();
      if (std::abs(den) <= 1e-12 * scale) {
        // parallel; overlapping collinear strands are not transversal
        if (std::abs(detail::cross2(w, d1)) > 1e-12 * std::max(w.norm() * d1.norm(), 1e-300)) {
          continue;
        }
        const double len2 = d1.squaredNorm();
        const double s0 = w.dot(d1) / len2;
        const double s1 = (q + d2 - p).dot(d1) / len2;
        if (std::max(s0, s1) >= 0.0 && std::min(s0, s1) <= 1.0) {
          throw Error(ErrorCode::kDegenerateCrossing, "collinear overlap between segments " +
                                                          std::to_string(i) + " and " +
                                                          std::to_string(j));
        }
        continue;
      }
      const double t = detail::cross2(w, d2) / den;
      const double u = detail::cross2(w, d1) / den;
      if (t < -eps || t > 1.0 + eps || u < -eps || u > 1.0 + eps) continue;
      if (t < eps || t > 1.0 - eps || u < eps || u > 1.0 - eps) {
        throw Error(ErrorCode::kDegenerateCrossing, "crossing of segments " + std::to_string(i) +
                                                        " and " + std::to_string(j) +
                                                        " lies at a sample endpoint");
      }
      const double zi = a_of(i).z() + t * (b_of(i).z() - a_of(i).z());
      const double zj = a_of(j).z() + u * (b_of(j).z() - a_of(j).z());
      if (std::abs(zi - zj) < opts.z_tie) {
        throw Error(ErrorCode::kDegenerateCrossing, "strands of segments " + std::to_string(i) +
                                                        " and " + std::to_string(j) +
                                                        " meet within the height tolerance");
      }
      const int id = static_cast<int>(result.crossings.size());
      result.crossings.push_back({i, j, p + t * d1, std::abs(zi - zj)});
      events.push_back({i, t, id, zi > zj ? Pass::kOver : Pass::kUnder});
      events.push_back({j, u, id, zi > zj ? Pass::kUnder : Pass::kOver});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.segment != b.segment ? a.segment < b.segment : a.t < b.t;
  });
  std::vector<GaussEntry> entries;
  entries.reserve(events.size());
  for (const auto& e : events) entries.push_back({e.crossing + 1, e.pass});
  result.code = GaussCode(relabel_by_first_appearance(entries));
  return result;
}

}  // namespace knotfold

#endif  // KNOTFOLD_CURVE_TOPOLOGY_HPP_
