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

// Shared test fixtures: small synthetic grids and the scripted flowers
// walkthrough (same steps as tools/flowers_walkthrough.sh, in memory).

#ifndef WFCTEACH_TESTS_FIXTURES_HPP_
#define WFCTEACH_TESTS_FIXTURES_HPP_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <set>
#include <string>
#include <vector>

#include "wfcteach/grid.hpp"
#include "wfcteach/session.hpp"

namespace fixtures {

inline std::filesystem::path DataDir() { return WFCTEACH_DATA_DIR; }

inline std::string FlowersFile(const std::string& name) {
  return (DataDir() / "flowers" / (name + ".png")).string();
}

inline wfcteach::TileGrid Text(std::string_view text) { return wfcteach::IngestText(text); }

inline wfcteach::TileGrid Uniform5() { return Text("aaaaa\naaaaa\naaaaa\naaaaa\naaaaa\n"); }

inline wfcteach::TileGrid Checkerboard4() { return Text("abab\nbaba\nabab\nbaba\n"); }

// Corpus colors, as written by tools/make_flowers_corpus.py.
inline constexpr wfcteach::Rgba kSky{0x9f, 0xd6, 0xf0, 0xff};
inline constexpr wfcteach::Rgba kGrass{0x3c, 0x9a, 0x2e, 0xff};
inline constexpr wfcteach::Rgba kDirt{0x7a, 0x4e, 0x2a, 0xff};
inline constexpr wfcteach::Rgba kStem{0x1f, 0x5e, 0x1a, 0xff};

// Example files added at each iteration; iterations 4 and 7 add a crop.
inline std::vector<std::vector<std::string>> FlowersSteps() {
  return {{"iter1_flowers"},
          {"iter2_flowers_red"},
          {"iter3_tiny_pair", "iter3_tiny_purple", "iter3_tiny_white"},
          {},
          {"iter5_hill"},
          {"iter6_bump", "iter6_bump_pair", "iter6_hill_stems"},
          {}};
}

inline constexpr int kPortfolioSize = 16;
inline constexpr int kSampleSize = 24;
inline constexpr int kMaxRestarts = 50;

enum class Artifact { kFloatingStem, kUndergroundStem };

struct Crop {
  std::string sample;
  wfcteach::Rect rect;
};

// The first stem (row-major, samples in portfolio order) with sky below
// (floating) or ground above (underground) whose 3x4 block, stem on the
// second row, does not occur toroidally in any positive example.
inline std::optional<Crop> FindArtifact(const wfcteach::TeachingSession& s, Artifact kind) {
  using wfcteach::TileGrid;
  const wfcteach::Palette& palette = s.palette();
  auto tile = [&](const TileGrid& g, int x, int y) { return palette[g.at(x, y)]; };
  auto block = [&](const TileGrid& g, int x0, int y0) {
    std::vector<wfcteach::TileId> out;
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 3; ++x) out.push_back(g.at((x0 + x) % g.width, (y0 + y) % g.height));
    }
    return out;
  };
  std::set<std::vector<wfcteach::TileId>> seen;
  for (const wfcteach::Example& e : s.examples()) {
    if (e.label != wfcteach::Label::kPositive) continue;
    for (int y = 0; y < e.grid.height; ++y) {
      for (int x = 0; x < e.grid.width; ++x) seen.insert(block(e.grid, x, y));
    }
  }
  const wfcteach::Tile stem = kStem, sky = kSky, grass = kGrass, dirt = kDirt;
  for (const std::string& id : s.latest_portfolio()) {
    const wfcteach::Sample& sample = s.sample(id);
    if (!sample.image) continue;
    const TileGrid& g = *sample.image;
    for (int y = 0; y < g.height; ++y) {
      for (int x = 0; x < g.width; ++x) {
        if (tile(g, x, y) != stem) continue;
        const bool hit = kind == Artifact::kFloatingStem
                             ? y + 1 < g.height && tile(g, x, y + 1) == sky
                             : y >= 1 && (tile(g, x, y - 1) == grass || tile(g, x, y - 1) == dirt);
        if (!hit) continue;
        const int rx = x - 1, ry = y - 1;
        if (rx < 0 || ry < 0 || rx + 3 > g.width || ry + 4 > g.height) continue;
        if (seen.count(block(g, rx, ry))) continue;
        return Crop{id, wfcteach::Rect{rx, ry, 3, 4}};
      }
    }
  }
  return std::nullopt;
}

struct FlowersIteration {
  int iteration = 0;
  std::vector<wfcteach::Example> examples;
  wfcteach::TrainedModel model;
  std::vector<wfcteach::Sample> portfolio;
  std::optional<Crop> crop;  // negative added at this iteration
};

inline wfcteach::SolverConfig FlowersSolver() {
  wfcteach::SolverConfig cfg;
  cfg.width = kSampleSize;
  cfg.height = kSampleSize;
  cfg.wrap = true;
  cfg.max_restarts = kMaxRestarts;
  return cfg;
}

// Runs iterations 1-7. Throws std::runtime_error when an artifact to crop
// is missing.
inline std::vector<FlowersIteration> RunFlowers(wfcteach::TeachingSession& s) {
  std::vector<FlowersIteration> out;
  const auto steps = FlowersSteps();
  for (int k = 1; k <= 7; ++k) {
    FlowersIteration it;
    it.iteration = k;
    for (const std::string& name : steps[k - 1]) {
      wfcteach::Origin origin;
      origin.kind = wfcteach::Origin::Kind::kImported;
      s.AddExample(wfcteach::LoadGridFile(FlowersFile(name)), wfcteach::Label::kPositive, origin);
    }
    if (k == 4 || k == 7) {
      auto crop = FindArtifact(s, k == 4 ? Artifact::kFloatingStem : Artifact::kUndergroundStem);
      if (!crop) throw std::runtime_error("no artifact to crop at iteration " + std::to_string(k));
      wfcteach::TileGrid source = *s.sample(crop->sample).image;
      source.palette = s.palette();
      wfcteach::Origin origin;
      origin.kind = wfcteach::Origin::Kind::kCropped;
      origin.sample = crop->sample;
      origin.rect = crop->rect;
      s.AddExample(wfcteach::Crop(source, crop->rect), wfcteach::Label::kNegative, origin);
      it.crop = crop;
    }
    it.model = s.Retrain();
    it.examples = s.examples();
    it.portfolio = s.GeneratePortfolio(kPortfolioSize, static_cast<std::uint64_t>(k),
                                       FlowersSolver())
                       .samples;
    out.push_back(std::move(it));
  }
  return out;
}

inline std::vector<FlowersIteration> RunFlowers() {
  wfcteach::TeachingSession s;
  return RunFlowers(s);
}

}  // namespace fixtures

#endif  // WFCTEACH_TESTS_FIXTURES_HPP_
