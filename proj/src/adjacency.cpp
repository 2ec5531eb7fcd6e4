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

#include "wfcteach/adjacency.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "json.hpp"

#include "wfcteach/error.hpp"

namespace wfcteach {

const char* DirectionName(Direction d) {
  switch (d) {
    case Direction::kRight: return "right";
    case Direction::kLeft: return "left";
    case Direction::kDown: return "down";
    case Direction::kUp: return "up";
  }
  return "?";
}

std::optional<Direction> ParseDirection(std::string_view name) {
  for (Direction d : kDirections) {
    if (name == DirectionName(d)) return d;
  }
  return std::nullopt;
}

const char* StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kMgg: return "mgg";
    case Strategy::kLgg: return "lgg";
    case Strategy::kMggMinusNegatives: return "mgg-neg";
  }
  return "?";
}

std::optional<Strategy> ParseStrategy(std::string_view name) {
  for (Strategy s : {Strategy::kMgg, Strategy::kLgg, Strategy::kMggMinusNegatives}) {
    if (name == StrategyName(s)) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// RuleSet

RuleSet::RuleSet(std::size_t pattern_count)
    : pattern_count_(pattern_count), words_((pattern_count + 63) / 64) {
  for (auto& m : bits_) m.assign(pattern_count_ * words_, 0);
}

std::size_t RuleSet::size() const {
  std::size_t n = 0;
  for (const auto& m : bits_) {
    for (std::uint64_t w : m) n += static_cast<std::size_t>(std::popcount(w));
  }
  return n;
}

void RuleSet::CheckRule(const AdjacencyRule& r) const {
  if (r.a >= pattern_count_ || r.b >= pattern_count_) {
    throw Error(ErrorCode::kCatalog, "rule references pattern outside the rule set");
  }
}

bool RuleSet::Contains(const AdjacencyRule& r) const {
  if (r.a >= pattern_count_ || r.b >= pattern_count_) return false;
  return (bits_[static_cast<int>(r.dir)][Word(r.a, r.b)] >> (r.b % 64)) & 1u;
}

void RuleSet::Insert(const AdjacencyRule& r) {
  CheckRule(r);
  bits_[static_cast<int>(r.dir)][Word(r.a, r.b)] |= std::uint64_t{1} << (r.b % 64);
}

void RuleSet::InsertPair(const AdjacencyRule& r) {
  Insert(r);
  Insert(r.Inverse());
}

void RuleSet::Erase(const AdjacencyRule& r) {
  CheckRule(r);
  bits_[static_cast<int>(r.dir)][Word(r.a, r.b)] &= ~(std::uint64_t{1} << (r.b % 64));
}

std::vector<AdjacencyRule> RuleSet::Rules() const {
  std::vector<AdjacencyRule> out;
  for (PatternId a = 0; a < pattern_count_; ++a) {
    for (Direction d : kDirections) {
      for (PatternId b : Neighbors(a, d)) out.push_back({a, d, b});
    }
  }
  return out;
}

std::vector<PatternId> RuleSet::Neighbors(PatternId a, Direction d) const {
  std::vector<PatternId> out;
  if (a >= pattern_count_) return out;
  const auto& m = bits_[static_cast<int>(d)];
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bits = m[a * words_ + w];
    while (bits) {
      int bit = std::countr_zero(bits);
      out.push_back(static_cast<PatternId>(w * 64 + bit));
      bits &= bits - 1;
    }
  }
  return out;
}

void RuleSet::CheckCompatible(const RuleSet& other) const {
  if (other.pattern_count_ != pattern_count_) {
    throw Error(ErrorCode::kInternal, "rule sets range over different catalogs");
  }
}

RuleSet RuleSet::Union(const RuleSet& other) const {
  CheckCompatible(other);
  RuleSet out = *this;
  for (int d = 0; d < 4; ++d) {
    for (std::size_t i = 0; i < out.bits_[d].size(); ++i) out.bits_[d][i] |= other.bits_[d][i];
  }
  return out;
}

RuleSet RuleSet::Minus(const RuleSet& other) const {
  CheckCompatible(other);
  RuleSet out = *this;
  for (int d = 0; d < 4; ++d) {
    for (std::size_t i = 0; i < out.bits_[d].size(); ++i) out.bits_[d][i] &= ~other.bits_[d][i];
  }
  return out;
}

RuleSet RuleSet::Intersect(const RuleSet& other) const {
  CheckCompatible(other);
  RuleSet out = *this;
  for (int d = 0; d < 4; ++d) {
    for (std::size_t i = 0; i < out.bits_[d].size(); ++i) out.bits_[d][i] &= other.bits_[d][i];
  }
  return out;
}

bool RuleSet::IsSubsetOf(const RuleSet& other) const {
  CheckCompatible(other);
  for (int d = 0; d < 4; ++d) {
    for (std::size_t i = 0; i < bits_[d].size(); ++i) {
      if (bits_[d][i] & ~other.bits_[d][i]) return false;
    }
  }
  return true;
}

bool RuleSet::InversionClosed() const {
  for (const AdjacencyRule& r : Rules()) {
    if (!Contains(r.Inverse())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Learning

bool Agrees(const Pattern& a, const Pattern& b, Direction d) {
  if (a.n != b.n) {
    throw Error(ErrorCode::kConfig, "cannot overlap patterns of different sizes");
  }
  const int n = a.n;
  const int dx = Dx(d);
  const int dy = Dy(d);
  const int x0 = std::max(0, -dx), x1 = std::min(n, n - dx);
  const int y0 = std::max(0, -dy), y1 = std::min(n, n - dy);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (a.at(x + dx, y + dy) != b.at(x, y)) return false;
    }
  }
  return true;
}

RuleSet ComputeLegal(const PatternCatalog& catalog) {
  const auto count = static_cast<PatternId>(catalog.size());
  RuleSet legal(count);
  // Right and down suffice; left and up are their inverses.
  for (PatternId a = 0; a < count; ++a) {
    if (!catalog.generative(a)) continue;
    for (PatternId b = 0; b < count; ++b) {
      if (!catalog.generative(b)) continue;
      for (Direction d : {Direction::kRight, Direction::kDown}) {
        if (Agrees(catalog.pattern(a), catalog.pattern(b), d)) legal.InsertPair({a, d, b});
      }
    }
  }
  return legal;
}

namespace {

PatternId MustClassify(const TileGrid& grid, int x, int y, int n, bool wrap,
                       const PatternCatalog& catalog) {
  auto id = catalog.Find(Window(grid, x, y, n, wrap));
  if (!id) {
    throw Error(ErrorCode::kInternal, "window at (" + std::to_string(x) + "," +
                                          std::to_string(y) + ") is not in the catalog");
  }
  return *id;
}

// Records (window, d, window + d) for every adjacent window pair.
void ScanAdjacencies(const TileGrid& grid, int n, bool wrap, const PatternCatalog& catalog,
                     RuleSet& out) {
  const int cols = WindowColumns(grid, n, wrap);
  const int rows = WindowRows(grid, n, wrap);
  std::vector<PatternId> ids(static_cast<std::size_t>(cols) * rows);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      ids[static_cast<std::size_t>(y) * cols + x] = MustClassify(grid, x, y, n, wrap, catalog);
    }
  }
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      PatternId a = ids[static_cast<std::size_t>(y) * cols + x];
      if (wrap || x + 1 < cols) {
        out.InsertPair({a, Direction::kRight, ids[static_cast<std::size_t>(y) * cols + (x + 1) % cols]});
      }
      if (wrap || y + 1 < rows) {
        out.InsertPair({a, Direction::kDown, ids[static_cast<std::size_t>((y + 1) % rows) * cols + x]});
      }
    }
  }
}

}  // namespace

RuleSet ComputeObserved(const std::vector<const TileGrid*>& positives,
                        const PatternCatalog& catalog, const PatternConfig& cfg) {
  RuleSet observed(catalog.size());
  for (const TileGrid* grid : positives) {
    CheckPatternConfig(*grid, cfg);
    ScanAdjacencies(*grid, cfg.n, cfg.wrap_input, catalog, observed);
  }
  return observed;
}

RuleSet ComputeNegative(const std::vector<const TileGrid*>& negatives,
                        const RuleSet& positives_observed, const PatternCatalog& catalog) {
  RuleSet demonstrated(catalog.size());
  for (const TileGrid* grid : negatives) {
    CheckPatternConfig(*grid, PatternConfig{catalog.n(), false, {}});
    ScanAdjacencies(*grid, catalog.n(), false, catalog, demonstrated);
  }
  return demonstrated.Minus(positives_observed);
}

LearnResult Learn(const AdjacencySets& sets, const PatternCatalog& catalog, Strategy strategy) {
  LearnResult result;
  switch (strategy) {
    case Strategy::kMgg: result.valid = sets.legal; break;
    case Strategy::kLgg: result.valid = sets.observed; break;
    case Strategy::kMggMinusNegatives: result.valid = sets.legal.Minus(sets.negative); break;
  }
  for (PatternId p = 0; p < catalog.size(); ++p) {
    if (!catalog.generative(p)) continue;
    for (Direction d : kDirections) {
      if (result.valid.Neighbors(p, d).empty()) result.starved.push_back({p, d});
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Export and diff

std::string ValidityToJson(const PatternCatalog& catalog, const Palette& palette,
                           const RuleSet& valid, Strategy strategy, const ValidityCounts& counts) {
  std::vector<std::pair<std::string, PatternId>> keyed;
  for (PatternId id = 0; id < catalog.size(); ++id) {
    if (catalog.generative(id)) keyed.emplace_back(PatternKey(catalog.pattern(id), palette), id);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::uint32_t> canonical(catalog.size(), UINT32_MAX);
  for (std::size_t i = 0; i < keyed.size(); ++i) canonical[keyed[i].second] = static_cast<std::uint32_t>(i);

  std::vector<std::tuple<std::uint32_t, int, std::uint32_t>> triples;
  for (const AdjacencyRule& r : valid.Rules()) {
    if (canonical[r.a] == UINT32_MAX || canonical[r.b] == UINT32_MAX) {
      throw Error(ErrorCode::kInternal, "valid set references a non-generative pattern");
    }
    triples.emplace_back(canonical[r.a], static_cast<int>(r.dir), canonical[r.b]);
  }
  std::sort(triples.begin(), triples.end());

  nlohmann::json doc;
  doc["format"] = "wfcteach.validity/1";
  doc["n"] = catalog.n();
  doc["strategy"] = StrategyName(strategy);
  doc["counts"] = {{"legal", counts.legal},
                   {"observed", counts.observed},
                   {"negative", counts.negative},
                   {"valid", valid.size()}};
  auto& pats = doc["patterns"] = nlohmann::json::array();
  for (const auto& [key, id] : keyed) pats.push_back(key);
  auto& out = doc["triples"] = nlohmann::json::array();
  for (const auto& [a, d, b] : triples) {
    out.push_back({a, DirectionName(static_cast<Direction>(d)), b});
  }
  return doc.dump(1) + "\n";
}

std::vector<std::string> RuleKeys(const RuleSet& rules, const PatternCatalog& catalog,
                                  const Palette& palette) {
  std::vector<std::string> keys(catalog.size());
  for (PatternId id = 0; id < catalog.size(); ++id) keys[id] = PatternKey(catalog.pattern(id), palette);
  std::vector<std::string> out;
  for (const AdjacencyRule& r : rules.Rules()) {
    out.push_back(keys[r.a] + " " + DirectionName(r.dir) + " " + keys[r.b]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::set<std::string> ExportRuleKeys(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("validity export is not JSON: ") + e.what());
  }
  if (doc.value("format", "") != "wfcteach.validity/1") {
    throw Error(ErrorCode::kFormat, "not a wfcteach validity export");
  }
  try {
    const auto pats = doc.at("patterns").get<std::vector<std::string>>();
    std::set<std::string> out;
    for (const auto& t : doc.at("triples")) {
      auto a = t.at(0).get<std::size_t>();
      auto d = t.at(1).get<std::string>();
      auto b = t.at(2).get<std::size_t>();
      if (a >= pats.size() || b >= pats.size() || !ParseDirection(d)) {
        throw Error(ErrorCode::kFormat, "validity export has an invalid triple");
      }
      out.insert(pats[a] + " " + d + " " + pats[b]);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("malformed validity export: ") + e.what());
  }
}

}  // namespace

ValidityDiff DiffValidity(std::string_view a_json, std::string_view b_json) {
  auto a = ExportRuleKeys(a_json);
  auto b = ExportRuleKeys(b_json);
  ValidityDiff diff;
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(diff.added));
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff.removed));
  return diff;
}

std::string FormatDiff(const ValidityDiff& diff, std::string_view a_label,
                       std::string_view b_label) {
  std::string out;
  out += "--- ";
  out += a_label;
  out += "\n+++ ";
  out += b_label;
  out += "\n";
  for (const auto& r : diff.removed) out += "- " + r + "\n";
  for (const auto& r : diff.added) out += "+ " + r + "\n";
  out += "added " + std::to_string(diff.added.size()) + " removed " +
         std::to_string(diff.removed.size()) + "\n";
  return out;
}

}  // namespace wfcteach
