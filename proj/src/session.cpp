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

#include "wfcteach/session.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cstdio>
#include <thread>

#include "wfcteach/digest.hpp"
#include "wfcteach/error.hpp"

namespace wfcteach {

const char* LabelName(Label label) {
  return label == Label::kPositive ? "positive" : "negative";
}

std::optional<Label> ParseLabel(std::string_view name) {
  if (name == "positive") return Label::kPositive;
  if (name == "negative") return Label::kNegative;
  return std::nullopt;
}

const char* OriginKindName(Origin::Kind kind) {
  switch (kind) {
    case Origin::Kind::kAuthored: return "authored";
    case Origin::Kind::kCropped: return "cropped";
    case Origin::Kind::kImported: return "imported";
  }
  return "?";
}

std::optional<Origin::Kind> ParseOriginKind(std::string_view name) {
  for (auto k : {Origin::Kind::kAuthored, Origin::Kind::kCropped, Origin::Kind::kImported}) {
    if (name == OriginKindName(k)) return k;
  }
  return std::nullopt;
}

TileGrid Crop(const TileGrid& sample, const Rect& rect) {
  if (rect.w < 1 || rect.h < 1 || rect.x < 0 || rect.y < 0 || rect.x + rect.w > sample.width ||
      rect.y + rect.h > sample.height) {
    throw Error(ErrorCode::kBounds,
                "crop rectangle " + std::to_string(rect.x) + "," + std::to_string(rect.y) + "," +
                    std::to_string(rect.w) + "," + std::to_string(rect.h) + " is outside the " +
                    std::to_string(sample.width) + "x" + std::to_string(sample.height) +
                    " sample");
  }
  TileGrid out;
  out.width = rect.w;
  out.height = rect.h;
  out.palette = sample.palette;
  out.cells.reserve(static_cast<std::size_t>(rect.w) * rect.h);
  for (int y = 0; y < rect.h; ++y) {
    for (int x = 0; x < rect.w; ++x) out.cells.push_back(sample.at(rect.x + x, rect.y + y));
  }
  return out;
}

void CheckNegativeSize(const TileGrid& grid, int n) {
  const bool tall = grid.width >= n && grid.height >= n + 1;
  const bool wide = grid.width >= n + 1 && grid.height >= n;
  if (!tall && !wide) {
    throw Error(ErrorCode::kSize,
                "negative example is " + std::to_string(grid.width) + "x" +
                    std::to_string(grid.height) + "; it must be at least " + std::to_string(n) +
                    "x" + std::to_string(n + 1) + " or " + std::to_string(n + 1) + "x" +
                    std::to_string(n) + " to demonstrate an adjacency");
  }
}

TrainedModel Train(const std::vector<Example>& examples, const Palette& palette,
                   const PatternConfig& cfg, Strategy strategy) {
  std::vector<const TileGrid*> positives;
  std::vector<const TileGrid*> negatives;
  for (const Example& e : examples) {
    (e.label == Label::kPositive ? positives : negatives).push_back(&e.grid);
  }
  if (positives.empty()) {
    throw Error(ErrorCode::kTraining, "training needs at least one positive example");
  }

  TrainedModel model;
  model.cfg = cfg;
  model.strategy = strategy;
  model.palette = palette;
  model.catalog = PatternCatalog(cfg.n);
  for (const TileGrid* g : positives) ExtractInto(*g, cfg, model.catalog);
  for (const TileGrid* g : negatives) {
    CheckNegativeSize(*g, cfg.n);
    RegisterNegative(*g, cfg.n, model.catalog);
  }

  model.sets.legal = ComputeLegal(model.catalog);
  model.sets.observed = ComputeObserved(positives, model.catalog, cfg);
  model.sets.negative = ComputeNegative(negatives, model.sets.observed, model.catalog);
  LearnResult learned = Learn(model.sets, model.catalog, strategy);
  model.valid = std::move(learned.valid);
  model.starved = std::move(learned.starved);

  model.catalog_json = CatalogToJson(model.catalog, palette);
  model.catalog_digest = Sha256Hex(model.catalog_json);
  model.validity_json =
      ValidityToJson(model.catalog, palette, model.valid, strategy,
                     {model.sets.legal.size(), model.sets.observed.size(),
                      model.sets.negative.size()});
  model.digest = Sha256Hex(model.validity_json);
  return model;
}

std::vector<Sample> SolvePortfolio(const TrainedModel& model, int count, std::uint64_t base_seed,
                                   const SolverConfig& base, unsigned threads) {
  if (count < 1) throw Error(ErrorCode::kConfig, "portfolio count must be at least 1");
  const SolverModel solver_model(model.catalog, model.valid);
  std::vector<Sample> out(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (int k = next++; k < count; k = next++) {
      try {
        Sample& s = out[static_cast<std::size_t>(k)];
        s.seed = MixSeed(base_seed, static_cast<std::uint64_t>(k));
        s.solver = base;
        s.solver.seed = s.seed;
        s.result = Solve(solver_model, s.solver);
        if (s.result.solved()) s.image = Render(s.result.grid, model.catalog, model.palette);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

TeachingSession::TeachingSession(PatternConfig cfg, Strategy strategy)
    : cfg_(cfg), strategy_(strategy) {
  if (cfg_.n < 1) throw Error(ErrorCode::kConfig, "pattern size must be at least 1");
}

void TeachingSession::Configure(const PatternConfig& cfg, Strategy strategy) {
  if (cfg.n < 1) throw Error(ErrorCode::kConfig, "pattern size must be at least 1");
  if (!(cfg == cfg_) || strategy != strategy_) stale_ = true;
  cfg_ = cfg;
  strategy_ = strategy;
}

std::string TeachingSession::AddExample(const TileGrid& grid, Label label, Origin origin) {
  grid.Validate();
  Palette extended = palette_;
  TileGrid mapped;
  mapped.width = grid.width;
  mapped.height = grid.height;
  mapped.cells.reserve(grid.cells.size());
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      const Tile& tile = grid.palette[grid.at(x, y)];
      if (label == Label::kNegative) {
        auto id = extended.Find(tile);
        if (!id) {
          throw Error(ErrorCode::kUnknownTile,
                      "negative example tile " + TileKey(tile) + " at (" + std::to_string(x) +
                          "," + std::to_string(y) + ") is not in the session palette");
        }
        mapped.cells.push_back(*id);
      } else {
        mapped.cells.push_back(extended.FindOrAdd(tile));
      }
    }
  }
  if (label == Label::kNegative) CheckNegativeSize(mapped, cfg_.n);

  char id[16];
  std::snprintf(id, sizeof(id), "e%04d", next_example_);
  palette_ = std::move(extended);
  mapped.palette = palette_;
  examples_.push_back({id, std::move(mapped), label, std::move(origin)});
  ++next_example_;
  stale_ = true;
  return id;
}

void TeachingSession::RemoveExample(std::string_view id) {
  auto it = std::find_if(examples_.begin(), examples_.end(),
                         [&](const Example& e) { return e.id == id; });
  if (it == examples_.end()) {
    throw Error(ErrorCode::kNotFound, "no example " + std::string(id));
  }
  examples_.erase(it);
  stale_ = true;
}

const Example& TeachingSession::example(std::string_view id) const {
  for (const Example& e : examples_) {
    if (e.id == id) return e;
  }
  throw Error(ErrorCode::kNotFound, "no example " + std::string(id));
}

const TrainedModel& TeachingSession::Retrain() {
  // Examples keep the palette they were added with; retrain against the
  // current (superset) palette so every model shares one tile space.
  std::vector<Example> current = examples_;
  for (Example& e : current) e.grid.palette = palette_;
  model_ = Train(current, palette_, cfg_, strategy_);
  stale_ = false;

  IterationRecord record;
  record.iteration = iteration() + 1;
  for (const Example& e : examples_) record.example_ids.push_back(e.id);
  record.strategy = strategy_;
  record.cfg = cfg_;
  record.digest = model_->digest;
  history_.push_back(std::move(record));
  latest_portfolio_.clear();
  return *model_;
}

const TrainedModel& TeachingSession::model() const {
  if (!model_) throw Error(ErrorCode::kTraining, "session has not been trained");
  if (stale_) throw Error(ErrorCode::kStale, "examples changed since the last training; retrain first");
  return *model_;
}

Portfolio TeachingSession::GeneratePortfolio(int count, std::uint64_t base_seed,
                                             const SolverConfig& base) {
  const TrainedModel& m = model();
  Portfolio portfolio;
  portfolio.iteration = iteration();
  portfolio.samples = SolvePortfolio(m, count, base_seed, base);
  latest_portfolio_.clear();
  for (Sample& s : portfolio.samples) {
    char id[16];
    std::snprintf(id, sizeof(id), "s%04d", next_sample_++);
    s.id = id;
    s.iteration = portfolio.iteration;
    samples_[s.id] = s;
    latest_portfolio_.push_back(s.id);
    history_.back().sample_ids.push_back(s.id);
  }
  return portfolio;
}

const Sample& TeachingSession::sample(std::string_view id) const {
  auto it = samples_.find(std::string(id));
  if (it == samples_.end()) throw Error(ErrorCode::kNotFound, "no sample " + std::string(id));
  return it->second;
}

TeachingSession TeachingSession::Restore(State state) {
  TeachingSession s(state.cfg, state.strategy);
  s.palette_ = std::move(state.palette);
  s.examples_ = std::move(state.examples);
  s.history_ = std::move(state.history);
  for (Sample& sample : state.samples) s.samples_[sample.id] = std::move(sample);
  s.latest_portfolio_ = std::move(state.latest_portfolio);
  s.next_example_ = state.next_example;
  s.next_sample_ = state.next_sample;
  s.stale_ = state.stale;
  if (!s.history_.empty()) {
    // Training is pure, so the model is recomputed rather than stored.
    const IterationRecord& last = s.history_.back();
    std::vector<Example> snapshot;
    for (const std::string& id : last.example_ids) {
      for (const Example& e : s.examples_) {
        if (e.id == id) snapshot.push_back(e);
      }
    }
    if (snapshot.size() == last.example_ids.size()) {
      for (Example& e : snapshot) e.grid.palette = s.palette_;
      s.model_ = Train(snapshot, s.palette_, last.cfg, last.strategy);
    } else {
      s.stale_ = true;
    }
  }
  return s;
}

std::vector<AdjacencyRule> SoundnessViolations(const PatternGrid& grid, bool wrap,
                                               const RuleSet& valid) {
  std::vector<AdjacencyRule> out;
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      for (Direction d : {Direction::kRight, Direction::kDown}) {
        int nx = x + Dx(d);
        int ny = y + Dy(d);
        if (wrap) {
          nx %= grid.width;
          ny %= grid.height;
        } else if (nx >= grid.width || ny >= grid.height) {
          continue;
        }
        AdjacencyRule r{grid.at(x, y), d, grid.at(nx, ny)};
        if (!valid.Contains(r)) out.push_back(r);
      }
    }
  }
  return out;
}

}  // namespace wfcteach
