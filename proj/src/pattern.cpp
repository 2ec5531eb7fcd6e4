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

#include "wfcteach/pattern.hpp"

#include <algorithm>

#include "json.hpp"

#include "wfcteach/error.hpp"

namespace wfcteach {

std::size_t PatternHash::operator()(const Pattern& p) const noexcept {
  // FNV-1a over the tile ids.
  std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(p.n);
  for (TileId t : p.tiles) {
    h ^= t;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

Pattern Rotate(const Pattern& p) {
  Pattern out{p.n, std::vector<TileId>(p.tiles.size())};
  for (int y = 0; y < p.n; ++y) {
    for (int x = 0; x < p.n; ++x) {
      // new(x, y) = old(y, n-1-x)
      out.tiles[static_cast<std::size_t>(y) * p.n + x] = p.at(y, p.n - 1 - x);
    }
  }
  return out;
}

Pattern Reflect(const Pattern& p) {
  Pattern out{p.n, std::vector<TileId>(p.tiles.size())};
  for (int y = 0; y < p.n; ++y) {
    for (int x = 0; x < p.n; ++x) {
      out.tiles[static_cast<std::size_t>(y) * p.n + x] = p.at(p.n - 1 - x, y);
    }
  }
  return out;
}

std::vector<Pattern> SymmetryVariants(const Pattern& p, const Symmetry& symmetry) {
  std::vector<Pattern> out{p};
  auto push = [&out](Pattern q) {
    if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(std::move(q));
  };
  if (symmetry.rotations) {
    Pattern r = p;
    for (int i = 0; i < 3; ++i) {
      r = Rotate(r);
      push(r);
    }
  }
  if (symmetry.reflections) {
    Pattern m = Reflect(p);
    push(m);
    if (symmetry.rotations) {
      for (int i = 0; i < 3; ++i) {
        m = Rotate(m);
        push(m);
      }
    } else {
      // Top-bottom mirror: reflect after a half turn.
      push(Reflect(Rotate(Rotate(p))));
    }
  }
  return out;
}

const Pattern& PatternCatalog::pattern(PatternId id) const {
  if (id >= patterns_.size()) {
    throw Error(ErrorCode::kCatalog, "pattern id " + std::to_string(id) + " not in catalog");
  }
  return patterns_[id];
}

std::uint64_t PatternCatalog::weight(PatternId id) const {
  if (id >= weights_.size()) {
    throw Error(ErrorCode::kCatalog, "pattern id " + std::to_string(id) + " not in catalog");
  }
  return weights_[id];
}

std::optional<PatternId> PatternCatalog::Find(const Pattern& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

PatternId PatternCatalog::Add(const Pattern& p, std::uint64_t weight) {
  if (p.n != n_) {
    throw Error(ErrorCode::kConfig, "pattern size " + std::to_string(p.n) +
                                        " does not match catalog size " + std::to_string(n_));
  }
  auto [it, inserted] = index_.try_emplace(p, static_cast<PatternId>(patterns_.size()));
  if (inserted) {
    patterns_.push_back(p);
    weights_.push_back(0);
  }
  weights_[it->second] += weight;
  return it->second;
}

std::size_t PatternCatalog::generative_count() const {
  return static_cast<std::size_t>(
      std::count_if(weights_.begin(), weights_.end(), [](std::uint64_t w) { return w > 0; }));
}

void CheckPatternConfig(const TileGrid& grid, const PatternConfig& cfg) {
  if (cfg.n < 1) throw Error(ErrorCode::kConfig, "pattern size must be at least 1");
  if (cfg.n > std::min(grid.width, grid.height)) {
    throw Error(ErrorCode::kConfig, "pattern size " + std::to_string(cfg.n) +
                                        " exceeds example size " + std::to_string(grid.width) +
                                        "x" + std::to_string(grid.height));
  }
}

Pattern Window(const TileGrid& grid, int x, int y, int n, bool wrap) {
  Pattern p{n, std::vector<TileId>(static_cast<std::size_t>(n) * n)};
  for (int dy = 0; dy < n; ++dy) {
    for (int dx = 0; dx < n; ++dx) {
      int gx = x + dx;
      int gy = y + dy;
      if (wrap) {
        gx %= grid.width;
        gy %= grid.height;
      }
      p.tiles[static_cast<std::size_t>(dy) * n + dx] = grid.at(gx, gy);
    }
  }
  return p;
}

int WindowColumns(const TileGrid& grid, int n, bool wrap) {
  return wrap ? grid.width : grid.width - n + 1;
}

int WindowRows(const TileGrid& grid, int n, bool wrap) {
  return wrap ? grid.height : grid.height - n + 1;
}

void ExtractInto(const TileGrid& grid, const PatternConfig& cfg, PatternCatalog& catalog) {
  CheckPatternConfig(grid, cfg);
  if (catalog.n() != cfg.n) {
    if (!catalog.empty()) {
      throw Error(ErrorCode::kConfig, "catalog pattern size differs from configuration");
    }
    catalog = PatternCatalog(cfg.n);
  }
  const int cols = WindowColumns(grid, cfg.n, cfg.wrap_input);
  const int rows = WindowRows(grid, cfg.n, cfg.wrap_input);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      for (const Pattern& v : SymmetryVariants(Window(grid, x, y, cfg.n, cfg.wrap_input),
                                               cfg.symmetry)) {
        catalog.Add(v, 1);
      }
    }
  }
}

PatternCatalog Extract(const TileGrid& grid, const PatternConfig& cfg) {
  PatternCatalog catalog(cfg.n);
  ExtractInto(grid, cfg, catalog);
  return catalog;
}

void RegisterNegative(const TileGrid& grid, int n, PatternCatalog& catalog) {
  CheckPatternConfig(grid, PatternConfig{n, false, {}});
  const int cols = grid.width - n + 1;
  const int rows = grid.height - n + 1;
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) catalog.Add(Window(grid, x, y, n, false), 0);
  }
}

std::optional<PatternId> Classify(const TileGrid& grid, int x, int y,
                                  const PatternConfig& cfg, const PatternCatalog& catalog) {
  if (cfg.n != catalog.n()) {
    throw Error(ErrorCode::kConfig, "classification size differs from catalog size");
  }
  if (x < 0 || y < 0 || x >= grid.width || y >= grid.height ||
      (!cfg.wrap_input && (x + cfg.n > grid.width || y + cfg.n > grid.height))) {
    throw Error(ErrorCode::kBounds, "window at (" + std::to_string(x) + "," +
                                        std::to_string(y) + ") leaves the grid");
  }
  return catalog.Find(Window(grid, x, y, cfg.n, cfg.wrap_input));
}

TileGrid Render(const PatternGrid& grid, const PatternCatalog& catalog, const Palette& palette) {
  TileGrid out;
  out.width = grid.width;
  out.height = grid.height;
  out.palette = palette;
  out.cells.reserve(grid.ids.size());
  const int c = catalog.n() / 2;
  for (PatternId id : grid.ids) out.cells.push_back(catalog.pattern(id).at(c, c));
  return out;
}

std::string PatternKey(const Pattern& p, const Palette& palette) {
  std::string key;
  for (int y = 0; y < p.n; ++y) {
    if (y) key += '/';
    for (int x = 0; x < p.n; ++x) {
      if (x) key += ',';
      key += TileKey(palette[p.at(x, y)]);
    }
  }
  return key;
}

std::string CatalogToJson(const PatternCatalog& catalog, const Palette& palette) {
  nlohmann::json doc;
  doc["format"] = "wfcteach.catalog/1";
  doc["n"] = catalog.n();
  auto& pal = doc["palette"] = nlohmann::json::array();
  for (const Tile& t : palette.entries()) pal.push_back(TileKey(t));
  auto& pats = doc["patterns"] = nlohmann::json::array();
  for (PatternId id = 0; id < catalog.size(); ++id) {
    pats.push_back({{"id", id},
                    {"tiles", catalog.pattern(id).tiles},
                    {"weight", catalog.weight(id)}});
  }
  return doc.dump(1) + "\n";
}

}  // namespace wfcteach
