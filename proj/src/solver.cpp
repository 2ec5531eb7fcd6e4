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

#include "wfcteach/solver.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "wfcteach/error.hpp"

namespace wfcteach {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Noise stays well below the smallest entropy gap between two distinct
// domains of a catalog of practical size.
constexpr double kEntropyNoise = 1e-6;

}  // namespace

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(seed + index * 0x9e3779b97f4a7c15ull);
}

SolverModel::SolverModel(const PatternCatalog& catalog, const RuleSet& valid)
    : valid_(valid) {
  if (valid.pattern_count() != catalog.size()) {
    throw Error(ErrorCode::kConfig, "valid set does not match the catalog");
  }
  const std::size_t count = catalog.size();
  weights_.resize(count);
  weight_log_weight_.resize(count);
  for (PatternId p = 0; p < count; ++p) {
    weights_[p] = static_cast<double>(catalog.weight(p));
    weight_log_weight_[p] = weights_[p] > 0 ? weights_[p] * std::log(weights_[p]) : 0.0;
  }
  compatible_.resize(count * 4);
  for (PatternId p = 0; p < count; ++p) {
    if (!generative(p)) continue;
    for (Direction d : kDirections) {
      auto& list = compatible_[p * 4 + static_cast<int>(d)];
      for (PatternId q : valid.Neighbors(p, d)) {
        if (generative(q)) list.push_back(q);
      }
    }
  }
}

Wave::Wave(const SolverModel& model, const SolverConfig& cfg, std::uint64_t seed)
    : model_(model),
      width_(cfg.width),
      height_(cfg.height),
      wrap_(cfg.wrap),
      patterns_(model.pattern_count()),
      words_((model.pattern_count() + 63) / 64),
      rng_(seed) {
  if (width_ < 1 || height_ < 1) {
    throw Error(ErrorCode::kConfig, "output dimensions must be at least 1x1");
  }
  std::vector<std::uint64_t> initial(words_, 0);
  std::int32_t initial_count = 0;
  double initial_sum = 0.0;
  double initial_sum_log = 0.0;
  for (PatternId p = 0; p < patterns_; ++p) {
    if (!model.generative(p)) continue;
    initial[p / 64] |= std::uint64_t{1} << (p % 64);
    ++initial_count;
    initial_sum += model.weights_[p];
    initial_sum_log += model.weight_log_weight_[p];
  }
  if (initial_count == 0) {
    throw Error(ErrorCode::kConfig, "catalog has no pattern with positive weight");
  }

  const auto cells = static_cast<std::size_t>(cell_count());
  domains_.resize(cells * words_);
  for (std::size_t c = 0; c < cells; ++c) {
    std::copy(initial.begin(), initial.end(), domains_.begin() + static_cast<std::ptrdiff_t>(c * words_));
  }
  counts_.assign(cells, initial_count);
  sum_weight_.assign(cells, initial_sum);
  sum_weight_log_weight_.assign(cells, initial_sum_log);
  noise_.resize(cells);
  for (double& n : noise_) n = kEntropyNoise * rng_.Uniform();

  std::vector<std::int32_t> full(patterns_ * 4);
  for (PatternId p = 0; p < patterns_; ++p) {
    for (Direction d : kDirections) {
      full[p * 4 + static_cast<int>(d)] =
          static_cast<std::int32_t>(model.compatible(p, d).size());
    }
  }
  support_.resize(cells * patterns_ * 4);
  for (int c = 0; c < cell_count(); ++c) {
    std::int32_t* dst = &support_[static_cast<std::size_t>(c) * patterns_ * 4];
    std::copy(full.begin(), full.end(), dst);
    for (Direction d : kDirections) {
      if (Neighbor(c, d)) continue;
      for (PatternId p = 0; p < patterns_; ++p) dst[p * 4 + static_cast<int>(d)] = kNoNeighbor;
    }
  }

  for (int c = 0; c < cell_count(); ++c) {
    for (PatternId p = 0; p < patterns_; ++p) {
      if (!Allowed(c, p)) continue;
      for (Direction d : kDirections) {
        if (Support(c, p, d) == 0) {
          queue_.emplace_back(c, p);
          break;
        }
      }
    }
  }
  Propagate();
}

std::optional<int> Wave::Neighbor(int cell, Direction d) const {
  int x = cell % width_ + Dx(d);
  int y = cell / width_ + Dy(d);
  if (wrap_) {
    x = (x + width_) % width_;
    y = (y + height_) % height_;
  } else if (x < 0 || y < 0 || x >= width_ || y >= height_) {
    return std::nullopt;
  }
  return y * width_ + x;
}

std::vector<PatternId> Wave::Domain(int cell) const {
  std::vector<PatternId> out;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = domains_[static_cast<std::size_t>(cell) * words_ + w];
    while (bits) {
      out.push_back(static_cast<PatternId>(w * 64 + std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

double Wave::Entropy(int cell) const {
  const double sum = sum_weight_[cell];
  if (counts_[cell] <= 1 || sum <= 0.0) return 0.0;
  return std::log(sum) - sum_weight_log_weight_[cell] / sum;
}

void Wave::RecordContradiction(int cell) {
  if (!contradiction_) {
    contradiction_ = true;
    failing_cell_ = cell;
  }
}

void Wave::Ban(int cell, PatternId p) {
  if (!Allowed(cell, p)) return;
  domains_[static_cast<std::size_t>(cell) * words_ + p / 64] &= ~(std::uint64_t{1} << (p % 64));
  --counts_[cell];
  sum_weight_[cell] -= model_.weights_[p];
  sum_weight_log_weight_[cell] -= model_.weight_log_weight_[p];
  ++removals_;
  if (counts_[cell] == 0) RecordContradiction(cell);

  for (Direction d : kDirections) {
    auto nb = Neighbor(cell, d);
    if (!nb) continue;
    const int back = static_cast<int>(Opposite(d));
    std::int32_t* base = &support_[static_cast<std::size_t>(*nb) * patterns_ * 4];
    for (PatternId q : model_.compatible(p, d)) {
      if (--base[q * 4 + back] == 0 && Allowed(*nb, q)) queue_.emplace_back(*nb, q);
    }
  }
}

bool Wave::Propagate(std::size_t max_steps) {
  std::size_t steps = 0;
  while (!queue_.empty() && steps < max_steps) {
    auto [cell, p] = queue_.back();
    queue_.pop_back();
    Ban(cell, p);
    ++steps;
  }
  return queue_.empty() && !contradiction_;
}

std::optional<int> Wave::Observe() {
  if (contradiction_) return std::nullopt;
  int best = -1;
  double best_entropy = std::numeric_limits<double>::infinity();
  for (int c = 0; c < cell_count(); ++c) {
    if (counts_[c] <= 1) continue;
    const double e = Entropy(c) + noise_[c];
    if (e < best_entropy) {
      best_entropy = e;
      best = c;
    }
  }
  if (best < 0) return std::nullopt;

  ++observations_;
  const double target = rng_.Uniform() * sum_weight_[best];
  PatternId chosen = PatternId(-1);
  double acc = 0.0;
  for (PatternId p : Domain(best)) {
    acc += model_.weights_[p];
    chosen = p;
    if (target < acc) break;
  }
  for (PatternId p : Domain(best)) {
    if (p != chosen) Ban(best, p);
  }
  return best;
}

bool Wave::AllDecided() const {
  for (std::int32_t n : counts_) {
    if (n != 1) return false;
  }
  return true;
}

PatternGrid Wave::Result() const {
  PatternGrid out{width_, height_, {}};
  out.ids.reserve(static_cast<std::size_t>(cell_count()));
  for (int c = 0; c < cell_count(); ++c) {
    if (counts_[c] != 1) throw Error(ErrorCode::kInternal, "wave is not fully decided");
    out.ids.push_back(Domain(c).front());
  }
  return out;
}

std::int32_t RecountSupport(const Wave& wave, const SolverModel& model, int cell, PatternId p,
                            Direction d) {
  auto nb = wave.Neighbor(cell, d);
  if (!nb) return Wave::kNoNeighbor;
  std::int32_t n = 0;
  for (PatternId q : model.compatible(p, d)) {
    if (wave.Allowed(*nb, q)) ++n;
  }
  return n;
}

SolveResult Solve(const SolverModel& model, const SolverConfig& cfg) {
  if (cfg.max_restarts < 0) throw Error(ErrorCode::kConfig, "max_restarts must be non-negative");
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  for (int attempt = 0; attempt <= cfg.max_restarts; ++attempt) {
    Wave wave(model, cfg, MixSeed(cfg.seed, static_cast<std::uint64_t>(attempt)));
    while (!wave.contradiction()) {
      if (!wave.Observe()) break;
      wave.Propagate();
    }
    result.stats.observations += wave.observations();
    result.stats.propagations += wave.removals();
    result.stats.restarts = attempt;
    if (!wave.contradiction()) {
      result.outcome = SolveResult::Outcome::kSolved;
      result.grid = wave.Result();
      result.failing_cell.reset();
      break;
    }
    result.failing_cell = wave.failing_cell();
  }
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SolveResult Solve(const PatternCatalog& catalog, const RuleSet& valid, const SolverConfig& cfg) {
  if (catalog.empty()) throw Error(ErrorCode::kConfig, "empty catalog");
  SolverModel model(catalog, valid);
  return Solve(model, cfg);
}

std::string PatternGridToJson(const PatternGrid& grid, bool wrap, std::uint64_t seed,
                              const std::string& catalog_digest) {
  nlohmann::json doc;
  doc["format"] = "wfcteach.patterngrid/1";
  doc["width"] = grid.width;
  doc["height"] = grid.height;
  doc["wrap"] = wrap;
  doc["seed"] = seed;
  doc["catalog"] = catalog_digest;
  doc["ids"] = grid.ids;
  return doc.dump() + "\n";
}

}  // namespace wfcteach
