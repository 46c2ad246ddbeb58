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

#ifndef KNOTFOLD_GAUSS_CODE_HPP_
#define KNOTFOLD_GAUSS_CODE_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "knotfold/error.hpp"

namespace knotfold {

enum class Pass { kOver, kUnder };

inline Pass flip(Pass p) { return p == Pass::kOver ? Pass::kUnder : Pass::kOver; }

struct GaussEntry {
  int label = 0;
  Pass pass = Pass::kOver;

  friend bool operator==(const GaussEntry&, const GaussEntry&) = default;
  friend auto operator<=>(const GaussEntry& a, const GaussEntry& b) {
    if (a.label != b.label) return a.label <=> b.label;
    return static_cast<int>(a.pass) <=> static_cast<int>(b.pass);
  }
};

/// Ordered crossing sequence of a knot diagram. Every label appears exactly
/// twice, once Over and once Under. The empty code is the unknot.
class GaussCode {
 public:
  GaussCode() = default;

  /// Throws Error(kParse) if the invariants do not hold.
  explicit GaussCode(std::vector<GaussEntry> entries) : entries_(std::move(entries)) {
    validate();
  }

  const std::vector<GaussEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t crossing_count() const { return entries_.size() / 2; }

  /// "1- 2+ 3- ..." with '+' for Over and '-' for Under.
  std::string to_string() const {
    std::string out;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (k) out += ' ';
      out += std::to_string(entries_[k].label);
      out += entries_[k].pass == Pass::kOver ? '+' : '-';
    }
    return out;
  }

  friend bool operator==(const GaussCode&, const GaussCode&) = default;

 private:
  void validate() const {
    std::map<int, std::vector<Pass>> seen;
    for (const auto& e : entries_) {
      if (e.label <= 0) {
        throw Error(ErrorCode::kParse, "label must be a positive integer, got " +
                                           std::to_string(e.label));
      }
      seen[e.label].push_back(e.pass);
    }
    for (const auto& [label, passes] : seen) {
      if (passes.size() != 2) {
        throw Error(ErrorCode::kParse, "label " + std::to_string(label) + " appears " +
                                           std::to_string(passes.size()) +
                                           " times, expected 2");
      }
      if (passes[0] == passes[1]) {
        throw Error(ErrorCode::kParse,
                    "label " + std::to_string(label) + " has the same pass twice");
      }
    }
  }

  std::vector<GaussEntry> entries_;
};

/// Parses whitespace separated `<int><+|->` tokens.
inline GaussCode parse_gauss_code(std::string_view text) {
  std::vector<GaussEntry> entries;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const char mark = token.back();
    if (token.size() < 2 || (mark != '+' && mark != '-')) {
      throw Error(ErrorCode::kParse, "malformed token '" + token + "'");
    }
    const std::string digits = token.substr(0, token.size() - 1);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        digits.size() > 9) {
      throw Error(ErrorCode::kParse, "malformed token '" + token + "'");
    }
    entries.push_back({std::stoi(digits), mark == '+' ? Pass::kOver : Pass::kUnder});
  }
  return GaussCode(std::move(entries));
}

/// Renumbers labels in order of first appearance.
inline std::vector<GaussEntry> relabel_by_first_appearance(const std::vector<GaussEntry>& in) {
  std::map<int, int> remap;
  std::vector<GaussEntry> out;
  out.reserve(in.size());
  for (const auto& e : in) {
    auto [it, inserted] = remap.try_emplace(e.label, static_cast<int>(remap.size()) + 1);
    out.push_back({it->second, e.pass});
  }
  return out;
}

/// Lexicographically minimal representative over cyclic rotations, reversal
/// of traversal and relabeling. Over/under marks are kept, so mirror images
/// are only identified when the orbit itself contains the mirror.
inline GaussCode canonicalize(const GaussCode& code) {
  const auto& src = code.entries();
  const std::size_t m = src.size();
  if (m == 0) return code;

  std::vector<GaussEntry> best;
  std::vector<GaussEntry> rotated(m);
  for (int direction = 0; direction < 2; ++direction) {
    for (std::size_t shift = 0; shift < m; ++shift) {
      for (std::size_t k = 0; k < m; ++k) {
        rotated[k] = direction == 0 ? src[(shift + k) % m] : src[(shift + m - k) % m];
      }
      auto candidate = relabel_by_first_appearance(rotated);
      if (best.empty() || candidate < best) best = std::move(candidate);
    }
  }
  return GaussCode(std::move(best));
}

inline bool same_knot_code(const GaussCode& a, const GaussCode& b) {
  return canonicalize(a) == canonicalize(b);
}

inline GaussCode mirror(const GaussCode& code) {
  auto entries = code.entries();
  for (auto& e : entries) e.pass = flip(e.pass);
  return GaussCode(std::move(entries));
}

}  // namespace knotfold

#endif  // KNOTFOLD_GAUSS_CODE_HPP_
