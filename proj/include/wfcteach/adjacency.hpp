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

// Adjacency validity learning.
//
// A rule (a, d, b) says pattern b may sit one cell away from a in direction
// d. Four rule sets are learned from the labeled examples:
//
//   legal     every pair of generative patterns whose overlap agrees
//   observed  pairs demonstrated side by side in a positive example
//   negative  pairs demonstrated in a negative example, minus observed
//   valid     the whitelist handed to the solver, chosen by strategy
//
// Every set is closed under inversion: (a, d, b) iff (b, -d, a).

#ifndef WFCTEACH_ADJACENCY_HPP_
#define WFCTEACH_ADJACENCY_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wfcteach/grid.hpp"
#include "wfcteach/pattern.hpp"

namespace wfcteach {

enum class Direction : std::uint8_t { kRight = 0, kLeft = 1, kDown = 2, kUp = 3 };

inline constexpr std::array<Direction, 4> kDirections = {
    Direction::kRight, Direction::kLeft, Direction::kDown, Direction::kUp};

constexpr int Dx(Direction d) {
  return d == Direction::kRight ? 1 : d == Direction::kLeft ? -1 : 0;
}
constexpr int Dy(Direction d) {
  return d == Direction::kDown ? 1 : d == Direction::kUp ? -1 : 0;
}
constexpr Direction Opposite(Direction d) {
  return static_cast<Direction>(static_cast<std::uint8_t>(d) ^ 1u);
}
const char* DirectionName(Direction d);
std::optional<Direction> ParseDirection(std::string_view name);

struct AdjacencyRule {
  PatternId a = 0;
  Direction dir = Direction::kRight;
  PatternId b = 0;

  AdjacencyRule Inverse() const { return {b, Opposite(dir), a}; }
  auto operator<=>(const AdjacencyRule&) const = default;
};

// Dense set of rules over a fixed pattern count: one P x P bit matrix per
// direction.
class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::size_t pattern_count);

  std::size_t pattern_count() const { return pattern_count_; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  bool Contains(const AdjacencyRule& r) const;
  void Insert(const AdjacencyRule& r);
  // Inserts r and its inverse.
  void InsertPair(const AdjacencyRule& r);
  void Erase(const AdjacencyRule& r);

  // Sorted by (a, direction, b).
  std::vector<AdjacencyRule> Rules() const;
  // Patterns b with (a, d, b) in the set, ascending.
  std::vector<PatternId> Neighbors(PatternId a, Direction d) const;

  RuleSet Union(const RuleSet& other) const;
  RuleSet Minus(const RuleSet& other) const;
  RuleSet Intersect(const RuleSet& other) const;
  bool IsSubsetOf(const RuleSet& other) const;
  bool InversionClosed() const;

  bool operator==(const RuleSet& other) const = default;

 private:
  std::size_t Word(PatternId a, PatternId b) const { return a * words_ + b / 64; }
  void CheckCompatible(const RuleSet& other) const;
  void CheckRule(const AdjacencyRule& r) const;

  std::size_t pattern_count_ = 0;
  std::size_t words_ = 0;
  std::array<std::vector<std::uint64_t>, 4> bits_;
};

// True when b, displaced one cell from a in direction d, matches a on every
// overlapping tile: a[x + dx, y + dy] == b[x, y] wherever both are defined.
bool Agrees(const Pattern& a, const Pattern& b, Direction d);

enum class Strategy {
  kMgg,                // valid = legal
  kLgg,                // valid = observed
  kMggMinusNegatives,  // valid = legal \ negative
};
const char* StrategyName(Strategy s);
std::optional<Strategy> ParseStrategy(std::string_view name);

struct AdjacencySets {
  RuleSet legal;
  RuleSet observed;
  RuleSet negative;
};

// All agreeing pairs among generative (weight > 0) patterns.
RuleSet ComputeLegal(const PatternCatalog& catalog);

// Adjacent windows of each positive example, wrapped per cfg.wrap_input.
// Throws kInternal when a window is missing from the catalog.
RuleSet ComputeObserved(const std::vector<const TileGrid*>& positives,
                        const PatternCatalog& catalog, const PatternConfig& cfg);

// Adjacent windows of each negative example (never wrapped) that no positive
// example demonstrates. Throws kConfig for an example smaller than n.
RuleSet ComputeNegative(const std::vector<const TileGrid*>& negatives,
                        const RuleSet& positives_observed, const PatternCatalog& catalog);

struct Starvation {
  PatternId pattern = 0;
  Direction dir = Direction::kRight;
};

struct LearnResult {
  RuleSet valid;
  // Generative patterns left with no allowed neighbor in some direction.
  std::vector<Starvation> starved;
};

LearnResult Learn(const AdjacencySets& sets, const PatternCatalog& catalog, Strategy strategy);

// Id-independent export of a valid set: patterns listed by PatternKey in
// sorted order, triples renumbered against that list and sorted. Two
// training runs over the same examples in any order export identical bytes.
struct ValidityCounts {
  std::size_t legal = 0;
  std::size_t observed = 0;
  std::size_t negative = 0;
};
std::string ValidityToJson(const PatternCatalog& catalog, const Palette& palette,
                           const RuleSet& valid, Strategy strategy, const ValidityCounts& counts);

// One line per rule, "<pattern key> <direction> <pattern key>".
std::vector<std::string> RuleKeys(const RuleSet& rules, const PatternCatalog& catalog,
                                  const Palette& palette);

struct ValidityDiff {
  std::vector<std::string> added;    // in b, not in a; sorted
  std::vector<std::string> removed;  // in a, not in b; sorted
};

// Compares two validity exports by pattern content.
ValidityDiff DiffValidity(std::string_view a_json, std::string_view b_json);
std::string FormatDiff(const ValidityDiff& diff, std::string_view a_label,
                       std::string_view b_label);

}  // namespace wfcteach

#endif  // WFCTEACH_ADJACENCY_HPP_
