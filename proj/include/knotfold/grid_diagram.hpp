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

#ifndef KNOTFOLD_GRID_DIAGRAM_HPP_
#define KNOTFOLD_GRID_DIAGRAM_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "knotfold/error.hpp"
#include "knotfold/gauss_code.hpp"

namespace knotfold {

/// N x N grid diagram. Cells hold +1, -1 or 0; every row and every column
/// carries exactly one +1 and one -1. Row index k maps to x, column index j
/// to y.
class GridDiagram {
 public:
  GridDiagram() = default;
  GridDiagram(int n, std::vector<int> cells) : n_(n), cells_(std::move(cells)) {
    if (n < 0 || cells_.size() != static_cast<std::size_t>(n) * n) {
      throw Error(ErrorCode::kInvalidArgument, "grid cell count does not match n*n");
    }
  }

  /// +1 at (r, plus[r]) and -1 at (r, minus[r]).
  static GridDiagram from_permutations(const std::vector<int>& plus, const std::vector<int>& minus) {
    const int n = static_cast<int>(plus.size());
    std::vector<int> cells(static_cast<std::size_t>(n) * n, 0);
    for (int r = 0; r < n; ++r) {
      cells[r * n + plus[r]] = 1;
      cells[r * n + minus[r]] = -1;
    }
    return GridDiagram(n, std::move(cells));
  }

  int size() const { return n_; }
  int at(int row, int col) const { return cells_[row * n_ + col]; }
  void set(int row, int col, int value) { cells_[row * n_ + col] = value; }
  const std::vector<int>& cells() const { return cells_; }

  friend bool operator==(const GridDiagram&, const GridDiagram&) = default;

 private:
  int n_ = 0;
  std::vector<int> cells_;
};

struct GridReport {
  bool ok = true;
  std::vector<int> bad_rows;
  std::vector<int> bad_columns;
  std::vector<std::string> messages;
};

inline GridReport validate_grid(const GridDiagram& g) {
  GridReport report;
  const int n = g.size();
  if (n < 2) {
    report.ok = false;
    report.messages.push_back("grid size must be at least 2");
    return report;
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int v = g.at(r, c);
      if (v < -1 || v > 1) {
        report.ok = false;
        report.messages.push_back("cell (" + std::to_string(r) + "," + std::to_string(c) +
                                  ") holds " + std::to_string(v));
      }
    }
  }
  auto check_line = [&](bool is_row, int idx) {
    int plus = 0;
    int minus = 0;
    for (int k = 0; k < n; ++k) {
      const int v = is_row ? g.at(idx, k) : g.at(k, idx);
      plus += v == 1;
      minus += v == -1;
    }
    if (plus != 1 || minus != 1) {
      report.ok = false;
      (is_row ? report.bad_rows : report.bad_columns).push_back(idx);
      report.messages.push_back(std::string(is_row ? "row " : "column ") + std::to_string(idx) +
                                " has " + std::to_string(plus) + " (+1) and " +
                                std::to_string(minus) + " (-1) markers");
    }
  };
  for (int k = 0; k < n; ++k) check_line(true, k);
  for (int k = 0; k < n; ++k) check_line(false, k);
  return report;
}

namespace detail {

struct GridLines {
  // row_span[r] = {left column, right column}; col_span[c] = {top row, bottom row}
  std::vector<std::array<int, 2>> row_span;
  std::vector<std::array<int, 2>> col_span;
};

/// Marker positions of every nonzero cell per row and column. Works on opened
/// diagrams too, where one row and one column hold a single marker.
inline GridLines grid_lines(const GridDiagram& g) {
  const int n = g.size();
  GridLines lines;
  lines.row_span.assign(n, {-1, -1});
  lines.col_span.assign(n, {-1, -1});
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (g.at(r, c) == 0) continue;
      auto& rs = lines.row_span[r];
      (rs[0] < 0 ? rs[0] : rs[1]) = c;
      auto& cs = lines.col_span[c];
      (cs[0] < 0 ? cs[0] : cs[1]) = r;
    }
  }
  return lines;
}

inline bool strictly_between(int x, int a, int b) { return std::min(a, b) < x && x < std::max(a, b); }

/// Whether the column segment of column c crosses the row segment of row r.
inline bool lines_cross(const GridLines& lines, int r, int c) {
  const auto& rs = lines.row_span[r];
  const auto& cs = lines.col_span[c];
  if (rs[1] < 0 || cs[1] < 0) return false;
  return strictly_between(r, cs[0], cs[1]) && strictly_between(c, rs[0], rs[1]);
}

inline bool row_has_crossing(const GridLines& lines, int r) {
  for (int c = 0; c < static_cast<int>(lines.col_span.size()); ++c) {
    if (lines_cross(lines, r, c)) return true;
  }
  return false;
}

inline bool column_has_crossing(const GridLines& lines, int c) {
  for (int r = 0; r < static_cast<int>(lines.row_span.size()); ++r) {
    if (lines_cross(lines, r, c)) return true;
  }
  return false;
}

inline int other(const std::array<int, 2>& pair, int v) { return pair[0] == v ? pair[1] : pair[0]; }

}  // namespace detail

/// A valid grid with one corner zeroed so that the diagram reads as an open
/// path between the two partners of the removed corner.
struct OpenGridDiagram {
  GridDiagram base;
  int removed_row = -1;
  int removed_col = -1;

  GridDiagram opened() const {
    GridDiagram g = base;
    g.set(removed_row, removed_col, 0);
    return g;
  }
};

/// Cells of the closed corner cycle starting at the removed corner's column
/// partner, first moving along its row. Returns fewer than 2N cells if the
/// diagram has more than one component.
inline std::vector<std::pair<int, int>> corner_cycle(const GridDiagram& g, int row, int col) {
  const auto lines = detail::grid_lines(g);
  std::vector<std::pair<int, int>> cells;
  const int start_row = detail::other(lines.col_span[col], row);
  int r = start_row;
  int c = col;
  bool along_row = true;
  const int limit = 2 * g.size();
  while (static_cast<int>(cells.size()) < limit) {
    cells.emplace_back(r, c);
    if (along_row) {
      c = detail::other(lines.row_span[r], c);
    } else {
      r = detail::other(lines.col_span[c], r);
    }
    along_row = !along_row;
    if (r == start_row && c == col) break;
  }
  return cells;
}

/// Number of cycles the corners form; 1 means the diagram is a knot.
inline int component_count(const GridDiagram& g) {
  const int n = g.size();
  const auto lines = detail::grid_lines(g);
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  int components = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (g.at(r, c) == 0 || seen[r * n + c]) continue;
      ++components;
      int rr = r;
      int cc = c;
      bool along_row = true;
      while (!seen[rr * n + cc]) {
        seen[rr * n + cc] = 1;
        if (along_row) {
          cc = detail::other(lines.row_span[rr], cc);
        } else {
          rr = detail::other(lines.col_span[cc], rr);
        }
        along_row = !along_row;
      }
    }
  }
  return components;
}

/// Corners whose row and column segments cross nothing, in preference order:
/// bottom row first (largest row index), then leftmost column.
inline std::vector<std::pair<int, int>> eligible_corners(const GridDiagram& g) {
  const int n = g.size();
  const auto lines = detail::grid_lines(g);
  std::vector<std::pair<int, int>> out;
  for (int r = n - 1; r >= 0; --r) {
    if (detail::row_has_crossing(lines, r)) continue;
    for (int c = 0; c < n; ++c) {
      if (g.at(r, c) != 0 && !detail::column_has_crossing(lines, c)) out.emplace_back(r, c);
    }
  }
  return out;
}

inline OpenGridDiagram open_diagram(const GridDiagram& g) {
  const auto report = validate_grid(g);
  if (!report.ok) {
    throw Error(ErrorCode::kInvalidArgument, "invalid grid: " + report.messages.front());
  }
  if (component_count(g) != 1) {
    throw Error(ErrorCode::kDisconnected, "grid diagram has " +
                                              std::to_string(component_count(g)) +
                                              " components, expected a single knot");
  }
  const auto eligible = eligible_corners(g);
  if (eligible.empty()) {
    throw Error(ErrorCode::kNoEligibleCorner,
                "every corner touches a crossing; commute rows or columns first");
  }
  return OpenGridDiagram{g, eligible.front().first, eligible.front().second};
}

struct PlanarCrossing {
  int over_segment = -1;   // column (x-parallel) leg
  int under_segment = -1;  // row (y-parallel) leg
  Vec2 point = Vec2::Zero();
};

/// Opened knot diagram as an ordered corner sequence in the plane z = z_p.
/// Segment i joins points i and i+1. The knot closes virtually through
/// `closure_point`, the removed corner.
struct KnotPolyline {
  std::vector<Vec3> points;
  std::vector<PlanarCrossing> crossings;
  std::vector<std::pair<int, int>> cells;  // grid cell of every point
  Vec3 closure_point = Vec3::Zero();
  double cell_width = 1.0;
  double plane_height = 1.0;
  int grid_size = 0;

  int segment_count() const { return static_cast<int>(points.size()) - 1; }
};

/// Position of grid cell (k, j), both 1-based as in the matrix notation.
inline Vec3 corner_position(int k, int j, double d, double z_p) { return {d * k, d * j, z_p}; }

namespace detail {

struct Leg {
  Vec2 a;
  Vec2 b;
};

/// Transversal crossings of axis-parallel legs of a closed loop. Legs that
/// touch without crossing, or overlap, raise kDegenerateCrossing.
inline std::vector<PlanarCrossing> axis_leg_crossings(const std::vector<Leg>& legs, bool closed) {
  std::vector<PlanarCrossing> out;
  const int m = static_cast<int>(legs.size());
  auto is_x_leg = [](const Leg& l) { return l.a.y() == l.b.y(); };
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const bool adjacent = j == i + 1 || (closed && i == 0 && j == m - 1);
      if (adjacent) continue;
      const Leg& li = legs[i];
      const Leg& lj = legs[j];
      const bool xi = is_x_leg(li);
      const bool xj = is_x_leg(lj);
      if (xi == xj) {
        // parallel legs: only a problem if collinear and overlapping
        const bool same_line = xi ? li.a.y() == lj.a.y() : li.a.x() == lj.a.x();
        if (!same_line) continue;
        const int axis = xi ? 0 : 1;
        const double lo_i = std::min(li.a[axis], li.b[axis]);
        const double hi_i = std::max(li.a[axis], li.b[axis]);
        const double lo_j = std::min(lj.a[axis], lj.b[axis]);
        const double hi_j = std::max(lj.a[axis], lj.b[axis]);
        if (hi_i >= lo_j && hi_j >= lo_i) {
          throw Error(ErrorCode::kDegenerateCrossing, "legs " + std::to_string(i) + " and " +
                                                          std::to_string(j) + " overlap");
        }
        continue;
      }
      const Leg& h = xi ? lj : li;  // constant x, varies y (row leg)
      const Leg& v = xi ? li : lj;  // constant y, varies x (column leg)
      const double x = h.a.x();
      const double y = v.a.y();
      const double vx_lo = std::min(v.a.x(), v.b.x());
      const double vx_hi = std::max(v.a.x(), v.b.x());
      const double hy_lo = std::min(h.a.y(), h.b.y());
      const double hy_hi = std::max(h.a.y(), h.b.y());
      if (x < vx_lo || x > vx_hi || y < hy_lo || y > hy_hi) continue;
      if (x == vx_lo || x == vx_hi || y == hy_lo || y == hy_hi) {
        throw Error(ErrorCode::kDegenerateCrossing, "legs " + std::to_string(i) + " and " +
                                                        std::to_string(j) +
                                                        " touch without crossing");
      }
      out.push_back({xi ? i : j, xi ? j : i, Vec2(x, y)});
    }
  }
  return out;
}

}  // namespace detail

inline KnotPolyline trace_polyline(const OpenGridDiagram& og, double d, double z_p) {
  if (!(d > 0.0) || !(z_p > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cell width and plane height must be positive");
  }
  const int n = og.base.size();
  auto cycle = corner_cycle(og.base, og.removed_row, og.removed_col);
  if (static_cast<int>(cycle.size()) != 2 * n || cycle.back() != std::pair{og.removed_row, og.removed_col}) {
    throw Error(ErrorCode::kDisconnected, "open path does not visit all " +
                                              std::to_string(2 * n - 1) + " corners");
  }
  cycle.pop_back();

  KnotPolyline poly;
  poly.cell_width = d;
  poly.plane_height = z_p;
  poly.grid_size = n;
  poly.cells = cycle;
  for (const auto& [r, c] : cycle) poly.points.push_back(corner_position(r + 1, c + 1, d, z_p));
  poly.closure_point = corner_position(og.removed_row + 1, og.removed_col + 1, d, z_p);

  std::vector<detail::Leg> legs;
  for (std::size_t k = 0; k + 1 < poly.points.size(); ++k) {
    legs.push_back({poly.points[k].head<2>(), poly.points[k + 1].head<2>()});
  }
  legs.push_back({poly.points.back().head<2>(), poly.closure_point.head<2>()});
  legs.push_back({poly.closure_point.head<2>(), poly.points.front().head<2>()});
  const int real_legs = poly.segment_count();
  for (const auto& x : detail::axis_leg_crossings(legs, true)) {
    if (x.over_segment >= real_legs || x.under_segment >= real_legs) {
      throw Error(ErrorCode::kNoEligibleCorner, "removed corner's stubs cross the diagram");
    }
    poly.crossings.push_back(x);
  }
  return poly;
}

/// Gauss code of the (virtually closed) polyline with column legs over row
/// legs. Labels are numbered by first encounter.
inline GaussCode planar_gauss_code(const KnotPolyline& poly) {
  struct Event {
    int segment;
    double along;
    int crossing;
    Pass pass;
  };
  std::vector<Event> events;
  for (int k = 0; k < static_cast<int>(poly.crossings.size()); ++k) {
    const auto& x = poly.crossings[k];
    for (const auto& [seg, pass] : {std::pair{x.over_segment, Pass::kOver},
                                    std::pair{x.under_segment, Pass::kUnder}}) {
      const Vec2 start = poly.points[seg].head<2>();
      events.push_back({seg, (x.point - start).norm(), k, pass});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.segment != b.segment ? a.segment < b.segment : a.along < b.along;
  });
  std::vector<GaussEntry> entries;
  for (const auto& e : events) entries.push_back({e.crossing + 1, e.pass});
  return GaussCode(relabel_by_first_appearance(entries));
}

}  // namespace knotfold

#endif  // KNOTFOLD_GRID_DIAGRAM_HPP_
