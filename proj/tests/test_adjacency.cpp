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

#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "wfcteach/adjacency.hpp"
#include "wfcteach/error.hpp"
#include "wfcteach/session.hpp"

namespace wfcteach {
namespace {

struct Corpus {
  Palette palette;
  std::vector<Example> examples;

  void Add(std::string_view text, Label label) {
    TileGrid g = IngestText(text, &palette);
    palette = g.palette;
    examples.push_back({"e" + std::to_string(examples.size()), std::move(g), label, {}});
  }

  std::vector<oracle::Example> ForOracle() const {
    std::vector<oracle::Example> out;
    for (const Example& e : examples) {
      TileGrid g = e.grid;
      g.palette = palette;
      out.push_back({oracle::FromGrid(g), e.label == Label::kPositive});
    }
    return out;
  }
};

PatternConfig Cfg(int n, bool wrap) {
  PatternConfig cfg;
  cfg.n = n;
  cfg.wrap_input = wrap;
  return cfg;
}

Pattern P(std::string_view text, Palette& palette) {
  TileGrid g = IngestText(text, &palette);
  palette = g.palette;
  return Pattern{g.width, g.cells};
}

void ExpectMatchesOracle(const Corpus& c, const PatternConfig& cfg, Strategy strategy) {
  const char* name = StrategyName(strategy);
  TrainedModel m = Train(c.examples, c.palette, cfg, strategy);
  oracle::Result o = oracle::Compute(
      c.ForOracle(), {cfg.n, cfg.wrap_input, cfg.symmetry.rotations, cfg.symmetry.reflections},
      name);
  EXPECT_EQ(oracle::ToWeights(m.catalog, m.palette), o.weights) << name;
  EXPECT_EQ(oracle::ToTriples(m.sets.legal, m.catalog, m.palette), o.legal) << name;
  EXPECT_EQ(oracle::ToTriples(m.sets.observed, m.catalog, m.palette), o.observed) << name;
  EXPECT_EQ(oracle::ToTriples(m.sets.negative, m.catalog, m.palette), o.negative) << name;
  EXPECT_EQ(oracle::ToTriples(m.valid, m.catalog, m.palette), o.valid) << name;
}

TEST(Agrees, OverlapMatches) {
  // b one row below a: a's lower rows must equal b's upper rows.
  Palette pal;
  Pattern a = P("rgb\nggg\nbbb\n", pal);
  Pattern b = P("ggg\nbbb\nrrr\n", pal);
  EXPECT_TRUE(Agrees(a, b, Direction::kDown));
  EXPECT_TRUE(Agrees(b, a, Direction::kUp));
  Pattern c = P("ggg\nbgb\nrrr\n", pal);
  EXPECT_FALSE(Agrees(a, c, Direction::kDown));
}

TEST(Agrees, CenterConflictsWithRightColumn) {
  // A green right column against a blue center: never legal to the left.
  Palette pal;
  Pattern blue_center = P("...\n.b.\n...\n", pal);
  Pattern green_right = P("..g\n..g\n..g\n", pal);
  EXPECT_FALSE(Agrees(green_right, blue_center, Direction::kRight));
  EXPECT_FALSE(Agrees(blue_center, green_right, Direction::kLeft));
}

TEST(Agrees, UniformWithItself) {
  Palette pal;
  Pattern u = P("aaa\naaa\naaa\n", pal);
  for (Direction d : kDirections) EXPECT_TRUE(Agrees(u, u, d));
}

TEST(Legal, SingleUniformPattern) {
  Corpus c;
  c.Add("aaaaa\naaaaa\naaaaa\naaaaa\naaaaa\n", Label::kPositive);
  TrainedModel m = Train(c.examples, c.palette, Cfg(3, false), Strategy::kMgg);
  ASSERT_EQ(m.catalog.size(), 1u);
  EXPECT_EQ(m.sets.legal.size(), 4u);
  EXPECT_EQ(m.sets.observed.size(), 4u);
  for (Direction d : kDirections) EXPECT_TRUE(m.sets.legal.Contains({0, d, 0}));
}

TEST(Legal, Checkerboard) {
  Corpus c;
  c.Add("abab\nbaba\nabab\nbaba\n", Label::kPositive);
  TrainedModel m = Train(c.examples, c.palette, Cfg(2, true), Strategy::kMgg);
  EXPECT_EQ(m.sets.legal.size(), 8u);
  EXPECT_EQ(m.sets.observed, m.sets.legal);
  ExpectMatchesOracle(c, Cfg(2, true), Strategy::kMgg);
}

TEST(Legal, FlowersMatchesOracleAndContainsObserved) {
  Corpus c;
  TileGrid g = LoadGridFile(fixtures::FlowersFile("iter1_flowers"));
  c.palette = g.palette;
  c.examples.push_back({"e0", g, Label::kPositive, {}});
  ExpectMatchesOracle(c, Cfg(3, true), Strategy::kMggMinusNegatives);
  TrainedModel m = Train(c.examples, c.palette, Cfg(3, true), Strategy::kMgg);
  EXPECT_TRUE(m.sets.observed.IsSubsetOf(m.sets.legal));
  EXPECT_LT(m.sets.observed.size(), m.sets.legal.size());
}

TEST(Negative, IdenticalToPositiveIsEmpty) {
  Corpus c;
  c.Add("aab\nabb\nbba\n", Label::kPositive);
  c.Add("aab\nabb\nbba\n", Label::kNegative);
  TrainedModel m = Train(c.examples, c.palette, Cfg(2, false), Strategy::kMggMinusNegatives);
  EXPECT_TRUE(m.sets.negative.empty());
  EXPECT_EQ(m.valid, m.sets.legal);
}

TEST(Negative, TwoTileDemonstrationGivesInversePair) {
  Corpus c;
  c.Add("ab\nba\n", Label::kPositive);
  c.Add("aa\n", Label::kNegative);
  TrainedModel m = Train(c.examples, c.palette, Cfg(1, true), Strategy::kMggMinusNegatives);
  ASSERT_EQ(m.sets.negative.size(), 2u);
  const PatternId a = 0;
  EXPECT_TRUE(m.sets.negative.Contains({a, Direction::kRight, a}));
  EXPECT_TRUE(m.sets.negative.Contains({a, Direction::kLeft, a}));
  EXPECT_FALSE(m.valid.Contains({a, Direction::kRight, a}));
  EXPECT_TRUE(m.valid.Contains({a, Direction::kDown, a}));
}

TEST(Negative, TooSmallForPatternSize) {
  Corpus c;
  c.Add("abc\nbca\ncab\n", Label::kPositive);
  c.Add("ab\nbc\n", Label::kNegative);
  try {
    Train(c.examples, c.palette, Cfg(3, true), Strategy::kMggMinusNegatives);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSize);
  }
}

TEST(Learn, StrategyLaws) {
  Corpus c;
  c.Add("aab.\nab..\nbb.a\n..ab\n", Label::kPositive);
  c.Add("ab.\n.ab\n", Label::kNegative);
  for (bool wrap : {false, true}) {
    TrainedModel mgg = Train(c.examples, c.palette, Cfg(2, wrap), Strategy::kMgg);
    TrainedModel lgg = Train(c.examples, c.palette, Cfg(2, wrap), Strategy::kLgg);
    TrainedModel neg = Train(c.examples, c.palette, Cfg(2, wrap), Strategy::kMggMinusNegatives);
    EXPECT_EQ(mgg.valid, mgg.sets.legal);
    EXPECT_EQ(lgg.valid, lgg.sets.observed);
    EXPECT_EQ(neg.valid, neg.sets.legal.Minus(neg.sets.negative));
    for (const TrainedModel* m : {&mgg, &lgg, &neg}) {
      EXPECT_TRUE(m->sets.observed.IsSubsetOf(m->sets.legal));
      EXPECT_TRUE(m->valid.IsSubsetOf(m->sets.legal));
      EXPECT_TRUE(m->sets.legal.InversionClosed());
      EXPECT_TRUE(m->sets.observed.InversionClosed());
      EXPECT_TRUE(m->sets.negative.InversionClosed());
      EXPECT_TRUE(m->valid.InversionClosed());
      EXPECT_TRUE(m->sets.negative.Intersect(m->sets.observed).empty());
    }
  }
}

// Random small corpora against the exhaustive recomputation.
TEST(Oracle, RandomCorpora) {
  std::mt19937 rng(2024);
  auto random_grid = [&](int w, int h, int tiles) {
    std::string text;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) text += static_cast<char>('a' + rng() % tiles);
      text += '\n';
    }
    return text;
  };
  const Strategy strategies[] = {Strategy::kMgg, Strategy::kLgg, Strategy::kMggMinusNegatives};
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 3;
    const bool wrap = (trial / 3) % 2 == 0;
    Corpus c;
    c.Add(random_grid(4 + rng() % 3, 4 + rng() % 3, 2 + trial % 2), Label::kPositive);
    if (trial % 4 == 0) c.Add(random_grid(5, 4, 2), Label::kPositive);
    if (trial % 2 == 0) c.Add(random_grid(n + 1, n + 1, 2), Label::kNegative);
    PatternConfig cfg = Cfg(n, wrap);
    if (trial % 5 == 0) cfg.symmetry = {true, trial % 10 == 0};
    for (Strategy s : strategies) {
      SCOPED_TRACE("trial " + std::to_string(trial));
      ExpectMatchesOracle(c, cfg, s);
    }
  }
}

TEST(Learn, StarvedPatternsReported) {
  Corpus c;
  c.Add("ab\n", Label::kPositive);
  TrainedModel m = Train(c.examples, c.palette, Cfg(1, false), Strategy::kLgg);
  // No vertical neighbors and one-sided horizontal ones.
  EXPECT_FALSE(m.starved.empty());
}

TEST(RuleSet, Algebra) {
  RuleSet a(3), b(3);
  a.InsertPair({0, Direction::kRight, 1});
  b.InsertPair({0, Direction::kRight, 1});
  b.InsertPair({2, Direction::kDown, 2});
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(b.size(), 4u);
  EXPECT_TRUE(a.IsSubsetOf(b));
  EXPECT_EQ(b.Minus(a).size(), 2u);
  EXPECT_EQ(a.Union(b), b);
  EXPECT_EQ(a.Intersect(b), a);
  EXPECT_TRUE(b.InversionClosed());
  b.Erase({2, Direction::kDown, 2});
  EXPECT_FALSE(b.InversionClosed());
  EXPECT_EQ(a.Neighbors(1, Direction::kLeft), std::vector<PatternId>{0});
  EXPECT_THROW(a.Insert({3, Direction::kUp, 0}), Error);
}

TEST(Export, DiffByContent) {
  Corpus c;
  c.Add("abab\nbaba\n", Label::kPositive);
  TrainedModel before = Train(c.examples, c.palette, Cfg(1, true), Strategy::kMggMinusNegatives);
  c.Add("aa\n", Label::kNegative);
  TrainedModel after = Train(c.examples, c.palette, Cfg(1, true), Strategy::kMggMinusNegatives);
  ValidityDiff same = DiffValidity(before.validity_json, before.validity_json);
  EXPECT_TRUE(same.added.empty());
  EXPECT_TRUE(same.removed.empty());
  ValidityDiff d = DiffValidity(before.validity_json, after.validity_json);
  EXPECT_TRUE(d.added.empty());
  ASSERT_EQ(d.removed.size(), 2u);
  EXPECT_EQ(d.removed, RuleKeys(after.sets.negative, after.catalog, after.palette));
  const std::string text = FormatDiff(d, "1", "2");
  EXPECT_NE(text.find("--- 1"), std::string::npos);
  EXPECT_NE(text.find("added 0 removed 2"), std::string::npos);
}

TEST(Export, RejectsMalformed) {
  EXPECT_THROW(DiffValidity("not json", "{}"), Error);
}

}  // namespace
}  // namespace wfcteach
