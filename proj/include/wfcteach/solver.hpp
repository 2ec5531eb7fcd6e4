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

// Observe-and-propagate solver over pattern-id domains.
//
// Each cell holds a bitset domain of pattern ids. Observation collapses the
// undecided cell of least noised Shannon entropy to one pattern sampled by
// catalog weight; propagation restores arc consistency by support counting
// (AC-4): support(c, p, d) is the number of patterns still allowed in the
// neighbor c + d that the valid set permits next to p. A pattern whose
// support reaches zero in any direction is removed. An empty domain is a
// contradiction, answered by a restart with the next derived seed.

#ifndef WFCTEACH_SOLVER_HPP_
#define WFCTEACH_SOLVER_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wfcteach/adjacency.hpp"
#include "wfcteach/pattern.hpp"

namespace wfcteach {

struct SolverConfig {
  int width = 32;
  int height = 32;
  bool wrap = true;
  std::uint64_t seed = 0;
  int max_restarts = 10;
};

// seed_i = splitmix64(seed + i * 0x9e3779b97f4a7c15). Used for restart
// attempts and for portfolio samples.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t index);

// Immutable solver view of a trained model: weights and, per pattern and
// direction, the patterns the valid set allows next to it. Non-generative
// patterns are excluded from every list.
class SolverModel {
 public:
  SolverModel(const PatternCatalog& catalog, const RuleSet& valid);

  std::size_t pattern_count() const { return weights_.size(); }
  double weight(PatternId p) const { return weights_[p]; }
  bool generative(PatternId p) const { return weights_[p] > 0.0; }
  // {q : (p, d, q) in valid}
  const std::vector<PatternId>& compatible(PatternId p, Direction d) const {
    return compatible_[p * 4 + static_cast<int>(d)];
  }
  const RuleSet& valid() const { return valid_; }

 private:
  std::vector<double> weights_;
  std::vector<double> weight_log_weight_;
  std::vector<std::vector<PatternId>> compatible_;
  RuleSet valid_;

  friend class Wave;
};

// Deterministic uniform doubles in [0, 1) from a 64-bit Mersenne twister.
class SolverRng {
 public:
  explicit SolverRng(std::uint64_t seed) : engine_(seed) {}
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

class Wave {
 public:
  // Support value reported for a direction with no neighbor cell (edges of
  // a non-wrapping output). Never decremented.
  static constexpr std::int32_t kNoNeighbor = -1;

  // Fills every domain with the generative patterns, counts supports from
  // the valid set, then removes and propagates patterns with zero support.
  // Throws kConfig when the model has no generative pattern or the
  // dimensions are below 1x1.
  Wave(const SolverModel& model, const SolverConfig& cfg, std::uint64_t seed);

  int width() const { return width_; }
  int height() const { return height_; }
  int cell_count() const { return width_ * height_; }
  bool contradiction() const { return contradiction_; }
  // Cell whose domain emptied, when contradiction() is set.
  std::optional<int> failing_cell() const { return failing_cell_; }

  bool Allowed(int cell, PatternId p) const {
    return (domains_[static_cast<std::size_t>(cell) * words_ + p / 64] >> (p % 64)) & 1u;
  }
  int DomainSize(int cell) const { return counts_[cell]; }
  std::vector<PatternId> Domain(int cell) const;
  std::int32_t Support(int cell, PatternId p, Direction d) const {
    return support_[(static_cast<std::size_t>(cell) * patterns_ + p) * 4 + static_cast<int>(d)];
  }
  std::optional<int> Neighbor(int cell, Direction d) const;

  // Shannon entropy of the weight-normalized domain, without noise.
  double Entropy(int cell) const;

  // Picks the undecided cell of least noised entropy and collapses it to a
  // weight-sampled pattern. Returns nullopt when every cell is decided or a
  // contradiction is flagged. Removals are queued for Propagate.
  std::optional<int> Observe();

  // Removes p from a cell, updating neighbor supports at once. Patterns whose
  // support drops to zero are queued.
  void Ban(int cell, PatternId p);

  // Drains the removal queue. Processes at most max_steps queued entries;
  // returns true when the queue is empty and no contradiction is flagged.
  bool Propagate(std::size_t max_steps = SIZE_MAX);
  std::size_t pending() const { return queue_.size(); }

  bool AllDecided() const;
  PatternGrid Result() const;

  std::uint64_t observations() const { return observations_; }
  std::uint64_t removals() const { return removals_; }

 private:
  void RecordContradiction(int cell);

  const SolverModel& model_;
  int width_;
  int height_;
  bool wrap_;
  std::size_t patterns_;
  std::size_t words_;
  SolverRng rng_;

  std::vector<std::uint64_t> domains_;
  std::vector<std::int32_t> counts_;
  std::vector<double> sum_weight_;
  std::vector<double> sum_weight_log_weight_;
  std::vector<double> noise_;
  std::vector<std::int32_t> support_;
  std::vector<std::pair<int, PatternId>> queue_;

  bool contradiction_ = false;
  std::optional<int> failing_cell_;
  std::uint64_t observations_ = 0;
  std::uint64_t removals_ = 0;
};

// From-scratch support recount for the current domains, laid out like
// Wave::Support. Used to check incremental maintenance.
std::int32_t RecountSupport(const Wave& wave, const SolverModel& model, int cell, PatternId p,
                            Direction d);

struct SolveStats {
  std::uint64_t observations = 0;
  std::uint64_t propagations = 0;  // pattern removals across all attempts
  int restarts = 0;
  double wall_ms = 0.0;
};

struct SolveResult {
  enum class Outcome { kSolved, kContradiction };

  Outcome outcome = Outcome::kContradiction;
  PatternGrid grid;                  // set when solved
  std::optional<int> failing_cell;   // last attempt's empty cell
  SolveStats stats;

  bool solved() const { return outcome == Outcome::kSolved; }
};

SolveResult Solve(const SolverModel& model, const SolverConfig& cfg);
SolveResult Solve(const PatternCatalog& catalog, const RuleSet& valid, const SolverConfig& cfg);

// Solved-grid JSON (see docs/formats.md).
std::string PatternGridToJson(const PatternGrid& grid, bool wrap, std::uint64_t seed,
                              const std::string& catalog_digest);

}  // namespace wfcteach

#endif  // WFCTEACH_SOLVER_HPP_
