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

// The teaching loop: labeled examples in, trained model and work-sample
// portfolios out. Training is a pure function of the example set, pattern
// configuration and strategy; TeachingSession adds ids, staleness tracking
// and an iteration history on top.

#ifndef WFCTEACH_SESSION_HPP_
#define WFCTEACH_SESSION_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wfcteach/adjacency.hpp"
#include "wfcteach/grid.hpp"
#include "wfcteach/pattern.hpp"
#include "wfcteach/solver.hpp"

namespace wfcteach {

enum class Label { kPositive, kNegative };
const char* LabelName(Label label);
std::optional<Label> ParseLabel(std::string_view name);

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool operator==(const Rect&) const = default;
};

struct Origin {
  enum class Kind { kAuthored, kCropped, kImported };

  Kind kind = Kind::kAuthored;
  std::string sample;  // work-sample id, for crops
  Rect rect;           // crop rectangle, for crops

  bool operator==(const Origin&) const = default;
};
const char* OriginKindName(Origin::Kind kind);
std::optional<Origin::Kind> ParseOriginKind(std::string_view name);

struct Example {
  std::string id;
  TileGrid grid;
  Label label = Label::kPositive;
  Origin origin;
};

// Sub-grid copy; shares the source palette. Throws kBounds.
TileGrid Crop(const TileGrid& sample, const Rect& rect);

// A negative must hold two overlapping windows: at least n x (n+1) or
// (n+1) x n. Throws kSize.
void CheckNegativeSize(const TileGrid& grid, int n);

struct TrainedModel {
  PatternConfig cfg;
  Strategy strategy = Strategy::kMggMinusNegatives;
  Palette palette;
  PatternCatalog catalog;
  AdjacencySets sets;
  RuleSet valid;
  std::vector<Starvation> starved;

  std::string catalog_json;
  std::string catalog_digest;
  std::string validity_json;
  std::string digest;  // SHA-256 of validity_json
};

// Rebuilds everything from scratch. Positives contribute windows and
// weights in example order; negatives contribute zero-weight patterns.
// Throws kTraining without a positive example.
TrainedModel Train(const std::vector<Example>& examples, const Palette& palette,
                   const PatternConfig& cfg, Strategy strategy);

struct Sample {
  std::string id;
  std::uint64_t seed = 0;
  int iteration = 0;
  SolverConfig solver;
  SolveResult result;
  std::optional<TileGrid> image;  // rendered, when solved
};

struct Portfolio {
  int iteration = 0;
  std::vector<Sample> samples;
};

// Samples k = 0..count-1 use seed MixSeed(base_seed, k). Contradictions are
// kept in the portfolio. Solves fan out across up to `threads` workers
// (0 = hardware concurrency); the result does not depend on the count.
std::vector<Sample> SolvePortfolio(const TrainedModel& model, int count, std::uint64_t base_seed,
                                   const SolverConfig& base, unsigned threads = 0);

struct IterationRecord {
  int iteration = 0;
  std::vector<std::string> example_ids;
  Strategy strategy = Strategy::kMggMinusNegatives;
  PatternConfig cfg;
  std::string digest;
  std::vector<std::string> sample_ids;
};

class TeachingSession {
 public:
  explicit TeachingSession(PatternConfig cfg = {},
                           Strategy strategy = Strategy::kMggMinusNegatives);

  const Palette& palette() const { return palette_; }
  const std::vector<Example>& examples() const { return examples_; }
  const PatternConfig& pattern_config() const { return cfg_; }
  Strategy strategy() const { return strategy_; }

  void Configure(const PatternConfig& cfg, Strategy strategy);

  // Maps the grid's tiles into the session palette (positives may extend it;
  // negatives must use known tiles) and appends the example. Marks the model
  // stale. Throws kUnknownTile or kSize.
  std::string AddExample(const TileGrid& grid, Label label, Origin origin = {});
  void RemoveExample(std::string_view id);
  const Example& example(std::string_view id) const;

  const TrainedModel& Retrain();
  bool trained() const { return model_.has_value(); }
  bool stale() const { return stale_; }
  // Throws kTraining when never trained and kStale when out of date.
  const TrainedModel& model() const;

  Portfolio GeneratePortfolio(int count, std::uint64_t base_seed, const SolverConfig& base);
  const Sample& sample(std::string_view id) const;
  const std::map<std::string, Sample>& samples() const { return samples_; }
  const std::vector<std::string>& latest_portfolio() const { return latest_portfolio_; }

  const std::vector<IterationRecord>& history() const { return history_; }
  int iteration() const { return static_cast<int>(history_.size()); }

  // Persistence hooks for SessionStore.
  struct State {
    PatternConfig cfg;
    Strategy strategy = Strategy::kMggMinusNegatives;
    Palette palette;
    std::vector<Example> examples;
    std::vector<IterationRecord> history;
    std::vector<Sample> samples;
    std::vector<std::string> latest_portfolio;
    int next_example = 1;
    int next_sample = 1;
    bool stale = true;
  };
  static TeachingSession Restore(State state);
  int next_example() const { return next_example_; }
  int next_sample() const { return next_sample_; }

 private:
  PatternConfig cfg_;
  Strategy strategy_;
  Palette palette_;
  std::vector<Example> examples_;
  std::optional<TrainedModel> model_;
  bool stale_ = true;
  std::vector<IterationRecord> history_;
  std::map<std::string, Sample> samples_;
  std::vector<std::string> latest_portfolio_;
  int next_example_ = 1;
  int next_sample_ = 1;
};

// Every adjacent pair of a solved grid must be in `valid`; returns the
// offending rules (empty when sound).
std::vector<AdjacencyRule> SoundnessViolations(const PatternGrid& grid, bool wrap,
                                               const RuleSet& valid);

}  // namespace wfcteach

#endif  // WFCTEACH_SESSION_HPP_
