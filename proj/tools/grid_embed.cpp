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


// grid_embed: builds an N x N grid diagram for an alternating Gauss code
// whose size is beyond exhaustive grid search.
//
// The closed diagram is a cycle of 2N legs H_0 V_0 H_1 V_1 ... where row leg
// H_m sits on row rho[m] and column leg V_m on column kappa[m]. Over passes
// go on column legs and under passes on row legs, one pass per leg, so an
// assignment of the code to the legs is a sequence of odd gaps summing to
// 2N. For each assignment every row order satisfying the required
// crossings is enumerated, likewise every column order, and the first pair
// that produces no extra crossing is written out.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knotfold/grid_diagram.hpp"
#include "knotfold/io.hpp"

using namespace knotfold;

namespace {

bool between(int x, int a, int b) { return std::min(a, b) < x && x < std::max(a, b); }

struct Need {
  int v = 0;  // column leg index a
  int h = 0;  // row leg index m
};

/// All permutations p of 0..n-1 with p[mid] strictly between p[lo] and p[hi]
/// for every (mid, lo, hi) triple.
std::vector<std::vector<int>> orders(int n, const std::vector<std::array<int, 3>>& triples) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (const auto& [mid, lo, hi] : triples) {
      if (!between(p[mid], p[lo], p[hi])) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

GridDiagram build(const std::vector<int>& rho, const std::vector<int>& kappa) {
  const int n = static_cast<int>(rho.size());
  std::vector<int> cells(static_cast<std::size_t>(n) * n, 0);
  for (int m = 0; m < n; ++m) {
    cells[rho[m] * n + kappa[(m + n - 1) % n]] = 1;
    cells[rho[m] * n + kappa[m]] = -1;
  }
  return GridDiagram(n, std::move(cells));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embed an alternating Gauss code in an N x N grid diagram"};
  std::string gauss;
  int n = 0;
  std::string out;
  std::string name;
  app.add_option("--gauss", gauss, "alternating Gauss code")->required();
  app.add_option("--n", n, "grid size")->required()->check(CLI::Range(2, 12));
  app.add_option("--out", out, "grid JSON to write");
  app.add_option("--name", name, "knot name stored in the JSON");
  CLI11_PARSE(app, argc, argv);

  try {
    const GaussCode code = parse_gauss_code(gauss);
    const auto& ev = code.entries();
    const int events = static_cast<int>(ev.size());
    for (int k = 0; k < events; ++k) {
      if (ev[k].pass == ev[(k + 1) % events].pass) {
        std::fprintf(stderr, "error: code is not alternating\n");
        return 1;
      }
    }
    if (events == 0 || events > 2 * n) {
      std::fprintf(stderr, "error: need between 1 and 2N passes\n");
      return 1;
    }
    const GaussCode target = canonicalize(code);

    // Leg index of every pass. The first pass sits on leg 0 or 1 by parity.
    std::vector<int> leg(events);
    long patterns = 0;
    bool found = false;
    // Legs increase along the code; alternation makes every gap, including
    // the wrap-around one, odd.
    std::function<void(int, int)> place = [&](int k, int at) {
      if (found) return;
      if (k == events) {
        ++patterns;
        std::vector<Need> needs(static_cast<std::size_t>(code.crossing_count()));
        for (int e = 0; e < events; ++e) {
          auto& x = needs[ev[e].label - 1];
          (ev[e].pass == Pass::kOver ? x.v : x.h) = leg[e] / 2;
        }
        std::vector<std::array<int, 3>> row_triples;
        std::vector<std::array<int, 3>> col_triples;
        for (const auto& x : needs) {
          row_triples.push_back({x.h, x.v, (x.v + 1) % n});
          col_triples.push_back({x.v, (x.h + n - 1) % n, x.h});
        }
        const auto rows = orders(n, row_triples);
        if (rows.empty()) return;
        const auto cols = orders(n, col_triples);
        std::vector<char> needed(static_cast<std::size_t>(n) * n, 0);
        for (const auto& x : needs) needed[x.v * n + x.h] = 1;
        for (const auto& rho : rows) {
          for (const auto& kappa : cols) {
            bool ok = true;
            for (int a = 0; a < n && ok; ++a) {
              for (int m = 0; m < n && ok; ++m) {
                if (needed[a * n + m]) continue;
                ok = !(between(rho[m], rho[a], rho[(a + 1) % n]) &&
                       between(kappa[a], kappa[(m + n - 1) % n], kappa[m]));
              }
            }
            if (!ok) continue;
            const GridDiagram g = build(rho, kappa);
            if (eligible_corners(g).empty()) continue;
            const auto og = open_diagram(g);
            if (canonicalize(planar_gauss_code(trace_polyline(og, 1.0, 1.0))) != target) continue;
            found = true;
            std::printf("found after %ld leg assignments\n", patterns);
            for (int r = 0; r < n; ++r) {
              for (int c = 0; c < n; ++c) std::printf("%3d", g.at(r, c));
              std::printf("\n");
            }
            if (!out.empty()) {
              GridAsset asset{g, name, code,
                              "constructed by grid_embed --n " + std::to_string(n) +
                                  ": first leg assignment and row/column orders, in enumeration order, that "
                                  "reproduce the code with no extra crossings"};
              write_text_file(out, format_grid_json(grid_asset_to_json(asset)));
            }
            return;
          }
        }
        return;
      }
      // over passes live on odd legs (columns), under passes on even legs (rows)
      const int parity = ev[k].pass == Pass::kOver ? 1 : 0;
      int first = k == 0 ? parity : at;
      if (first % 2 != parity) ++first;
      const int last = k == 0 ? parity : 2 * n - 1;
      for (int l = first; l <= last && !found; l += 2) {
        leg[k] = l;
        place(k + 1, l + 1);
      }
    };
    place(0, 0);
    if (!found) {
      std::printf("no %dx%d diagram found (%ld leg assignments tried)\n", n, n, patterns);
      return 2;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
