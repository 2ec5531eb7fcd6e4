// Copyright 2026 The wfcteach Authors
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

// Pattern classifier and renderer: a lookup table between NxN tile
// neighborhoods and dense pattern ids, with per-pattern occurrence weights.

#ifndef WFCTEACH_PATTERN_HPP_
#define WFCTEACH_PATTERN_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wfcteach/grid.hpp"

namespace wfcteach {

using PatternId = std::uint32_t;

struct Symmetry {
  bool reflections = false;
  bool rotations = false;

  bool operator==(const Symmetry&) const = default;
};

struct PatternConfig {
  int n = 3;
  bool wrap_input = true;
  Symmetry symmetry;

  bool operator==(const PatternConfig&) const = default;
};

struct Pattern {
  int n = 0;
  std::vector<TileId> tiles;  // row-major, n*n

  TileId at(int x, int y) const { return tiles[static_cast<std::size_t>(y) * n + x]; }

  auto operator<=>(const Pattern&) const = default;
};

struct PatternHash {
  std::size_t operator()(const Pattern& p) const noexcept;
};

// Rotates 90 degrees clockwise.
Pattern Rotate(const Pattern& p);
// Mirrors left-right.
Pattern Reflect(const Pattern& p);
// Distinct symmetry variants of p (p first) per the configuration.
std::vector<Pattern> SymmetryVariants(const Pattern& p, const Symmetry& symmetry);

class PatternCatalog {
 public:
  PatternCatalog() = default;
  explicit PatternCatalog(int n) : n_(n) {}

  int n() const { return n_; }
  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }

  const Pattern& pattern(PatternId id) const;
  std::uint64_t weight(PatternId id) const;
  const std::vector<Pattern>& patterns() const { return patterns_; }
  const std::vector<std::uint64_t>& weights() const { return weights_; }

  std::optional<PatternId> Find(const Pattern& p) const;

  // Inserts p if new, then adds `weight` to its count. Ids are append-only.
  PatternId Add(const Pattern& p, std::uint64_t weight);

  // Patterns that may be placed by the generator (weight > 0).
  std::size_t generative_count() const;
  bool generative(PatternId id) const { return weights_[id] > 0; }

 private:
  int n_ = 0;
  std::vector<Pattern> patterns_;
  std::vector<std::uint64_t> weights_;
  std::unordered_map<Pattern, PatternId, PatternHash> index_;
};

// Throws kConfig unless 1 <= cfg.n <= min(width, height).
void CheckPatternConfig(const TileGrid& grid, const PatternConfig& cfg);

// The n x n window whose top-left corner is (x, y). With wrap, coordinates
// are taken modulo the grid size; otherwise the window must lie inside.
Pattern Window(const TileGrid& grid, int x, int y, int n, bool wrap);

// Number of window positions scanned for a grid: all cells when wrapping,
// (w-n+1)(h-n+1) otherwise.
int WindowColumns(const TileGrid& grid, int n, bool wrap);
int WindowRows(const TileGrid& grid, int n, bool wrap);

// Adds every window of a positive example (plus symmetry variants) to the
// catalog, incrementing weights per occurrence.
void ExtractInto(const TileGrid& grid, const PatternConfig& cfg, PatternCatalog& catalog);
PatternCatalog Extract(const TileGrid& grid, const PatternConfig& cfg);

// Registers every window of a negative example (never wrapped) so its
// adjacencies can be named. New patterns enter with weight 0.
void RegisterNegative(const TileGrid& grid, int n, PatternCatalog& catalog);

// Lookup-table classification. Returns nullopt for arrangements the catalog
// has never seen. Throws kBounds when the window leaves a non-wrapping grid.
std::optional<PatternId> Classify(const TileGrid& grid, int x, int y,
                                  const PatternConfig& cfg, const PatternCatalog& catalog);

struct PatternGrid {
  int width = 0;
  int height = 0;
  std::vector<PatternId> ids;  // row-major

  PatternId at(int x, int y) const { return ids[static_cast<std::size_t>(y) * width + x]; }

  bool operator==(const PatternGrid&) const = default;
};

// Center-tile renderer: output tile (x, y) is tile (n/2, n/2) of the pattern
// placed at (x, y). Throws kCatalog on an unknown id.
TileGrid Render(const PatternGrid& grid, const PatternCatalog& catalog, const Palette& palette);

// Canonical string for a pattern expressed through tile keys, rows joined by
// '/'. Independent of TileId numbering.
std::string PatternKey(const Pattern& p, const Palette& palette);

// Catalog export (ordered by PatternId).
std::string CatalogToJson(const PatternCatalog& catalog, const Palette& palette);

}  // namespace wfcteach

#endif  // WFCTEACH_PATTERN_HPP_
