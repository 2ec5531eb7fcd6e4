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

#include <algorithm>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "wfcteach/digest.hpp"
#include "wfcteach/error.hpp"
#include "wfcteach/session.hpp"

namespace wfcteach {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInternal;
}

TileGrid Flowers(const std::string& name) { return LoadGridFile(fixtures::FlowersFile(name)); }

SolverConfig SmallOutput() {
  SolverConfig cfg;
  cfg.width = 16;
  cfg.height = 16;
  cfg.max_restarts = 20;
  return cfg;
}

std::vector<std::string> ValidKeys(const TrainedModel& m) {
  return RuleKeys(m.valid, m.catalog, m.palette);
}

TEST(Crop, ExtractsRectangle) {
  TileGrid g = fixtures::Text("abcd\nefgh\nijkl\n");
  TileGrid c = Crop(g, {1, 1, 2, 2});
  EXPECT_EQ(EmitText(c), "fg\njk\n");
  EXPECT_EQ(CodeOf([&] { Crop(g, {3, 0, 2, 1}); }), ErrorCode::kBounds);
  EXPECT_EQ(CodeOf([&] { Crop(g, {0, 0, 0, 1}); }), ErrorCode::kBounds);
  EXPECT_EQ(CodeOf([&] { Crop(g, {-1, 0, 1, 1}); }), ErrorCode::kBounds);
}

TEST(NegativeSize, NeedsOneAdjacency) {
  EXPECT_NO_THROW(CheckNegativeSize(fixtures::Text("abc\nabc\nabc\nabc\n"), 3));
  EXPECT_NO_THROW(CheckNegativeSize(fixtures::Text("abcd\nabcd\nabcd\n"), 3));
  EXPECT_EQ(CodeOf([] { CheckNegativeSize(fixtures::Text("abc\nabc\nabc\n"), 3); }),
            ErrorCode::kSize);
}

TEST(Train, PureFunctionOfInputs) {
  TeachingSession s;
  s.AddExample(Flowers("iter1_flowers"), Label::kPositive);
  s.AddExample(Flowers("iter3_tiny_pair"), Label::kPositive);
  TrainedModel a = s.Retrain();
  TrainedModel b = s.Retrain();
  EXPECT_EQ(a.validity_json, b.validity_json);
  EXPECT_EQ(a.digest, b.digest);
  EXPECT_EQ(a.digest, Sha256Hex(a.validity_json));
}

TEST(Train, ExportIndependentOfExampleOrder) {
  const std::vector<std::string> names = {"iter1_flowers", "iter2_flowers_red", "iter5_hill"};
  std::vector<std::string> order = names;
  std::string reference;
  do {
    TeachingSession s;
    for (const std::string& n : order) s.AddExample(Flowers(n), Label::kPositive);
    const std::string json = s.Retrain().validity_json;
    if (reference.empty()) reference = json;
    EXPECT_EQ(json, reference);
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST(Train, DuplicatePositiveKeepsValidSet) {
  TeachingSession s;
  s.AddExample(Flowers("iter1_flowers"), Label::kPositive);
  const auto before = ValidKeys(s.Retrain());
  s.AddExample(Flowers("iter1_flowers"), Label::kPositive);
  const TrainedModel& m = s.Retrain();
  EXPECT_EQ(ValidKeys(m), before);
  EXPECT_EQ(m.catalog.weight(0) % 2, 0u);
}

TEST(Train, StrategiesOrdered) {
  TeachingSession s;
  s.AddExample(Flowers("iter1_flowers"), Label::kPositive);
  s.AddExample(Crop(Flowers("iter1_flowers"), {0, 0, 3, 4}), Label::kNegative);
  s.Configure(s.pattern_config(), Strategy::kLgg);
  const TrainedModel lgg = s.Retrain();
  s.Configure(s.pattern_config(), Strategy::kMggMinusNegatives);
  const TrainedModel neg = s.Retrain();
  s.Configure(s.pattern_config(), Strategy::kMgg);
  const TrainedModel mgg = s.Retrain();
  EXPECT_TRUE(lgg.valid.IsSubsetOf(neg.valid));
  EXPECT_TRUE(neg.valid.IsSubsetOf(mgg.valid));
  EXPECT_LT(lgg.valid.size(), mgg.valid.size());
}

TEST(Session, ExampleLifecycleAndStaleness) {
  TeachingSession s;
  EXPECT_EQ(CodeOf([&] { s.model(); }), ErrorCode::kTraining);
  const std::string id = s.AddExample(Flowers("iter1_flowers"), Label::kPositive);
  EXPECT_EQ(id, "e0001");
  EXPECT_EQ(CodeOf([&] { s.model(); }), ErrorCode::kTraining);
  s.Retrain();
  EXPECT_FALSE(s.stale());
  EXPECT_NO_THROW(s.model());
  const std::string second = s.AddExample(Flowers("iter5_hill"), Label::kPositive);
  EXPECT_TRUE(s.stale());
  EXPECT_EQ(CodeOf([&] { s.model(); }), ErrorCode::kStale);
  EXPECT_EQ(CodeOf([&] { s.GeneratePortfolio(1, 0, SmallOutput()); }), ErrorCode::kStale);
  s.RemoveExample(second);
  EXPECT_EQ(CodeOf([&] { s.RemoveExample(second); }), ErrorCode::kNotFound);
  EXPECT_EQ(CodeOf([&] { s.example("e9999"); }), ErrorCode::kNotFound);
  s.Retrain();
  EXPECT_EQ(s.iteration(), 2);
  EXPECT_EQ(s.history()[1].example_ids, std::vector<std::string>{id});
}

TEST(Session, NegativeMustUseKnownTiles) {
  TeachingSession s;
  s.AddExample(fixtures::Text("abab\nbaba\n"), Label::kPositive);
  try {
    s.AddExample(fixtures::Text("abc\nabc\n"), Label::kNegative);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownTile);
    EXPECT_NE(std::string(e.what()).find("(2,0)"), std::string::npos) << e.what();
  }
  EXPECT_EQ(s.examples().size(), 1u);
  s.AddExample(fixtures::Text("abc\nabc\n"), Label::kPositive);
  EXPECT_EQ(s.palette().size(), 3u);
}

TEST(Session, PortfolioDeterministicAndNamed) {
  auto run = [] {
    TeachingSession s;
    s.AddExample(Flowers("iter1_flowers"), Label::kPositive);
    s.Retrain();
    return s.GeneratePortfolio(6, 42, SmallOutput());
  };
  Portfolio a = run();
  Portfolio b = run();
  ASSERT_EQ(a.samples.size(), 6u);
  EXPECT_EQ(a.samples[0].id, "s0001");
  EXPECT_EQ(a.samples[5].id, "s0006");
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].seed, MixSeed(42, i));
    EXPECT_EQ(a.samples[i].result.grid.ids, b.samples[i].result.grid.ids);
    ASSERT_TRUE(a.samples[i].image.has_value());
    EXPECT_EQ(EmitImage(*a.samples[i].image), EmitImage(*b.samples[i].image));
  }
}

TEST(Session, PortfolioIndependentOfThreads) {
  TeachingSession s;
  s.AddExample(Flowers("iter1_flowers"), Label::kPositive);
  const TrainedModel& m = s.Retrain();
  auto one = SolvePortfolio(m, 8, 3, SmallOutput(), 1);
  auto many = SolvePortfolio(m, 8, 3, SmallOutput(), 4);
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].result.grid.ids, many[i].result.grid.ids);
  }
}

TEST(Soundness, ViolationsListed) {
  RuleSet valid(2);
  valid.InsertPair({0, Direction::kRight, 1});
  valid.InsertPair({0, Direction::kDown, 0});
  valid.InsertPair({1, Direction::kDown, 1});
  EXPECT_TRUE(SoundnessViolations(PatternGrid{2, 1, {0, 1}}, false, valid).empty());
  auto v = SoundnessViolations(PatternGrid{2, 1, {0, 1}}, true, valid);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].a, 1u);
  EXPECT_EQ(v[0].b, 0u);
}

class FlowersRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { run_ = new std::vector<fixtures::FlowersIteration>(fixtures::RunFlowers()); }
  static void TearDownTestSuite() {
    delete run_;
    run_ = nullptr;
  }
  static std::vector<fixtures::FlowersIteration>* run_;
};
std::vector<fixtures::FlowersIteration>* FlowersRun::run_ = nullptr;

TEST_F(FlowersRun, CatalogStaysSmall) {
  ASSERT_EQ(run_->size(), 7u);
  for (const auto& it : *run_) {
    EXPECT_LE(it.model.catalog.generative_count(), 400u) << it.iteration;
  }
  EXPECT_LE((*run_)[0].model.catalog.size(), 50u);
}

TEST_F(FlowersRun, NegativesOnlyRemove) {
  for (int k : {4, 7}) {
    const auto& before = (*run_)[k - 2].model;
    const auto& after = (*run_)[k - 1].model;
    ASSERT_TRUE((*run_)[k - 1].crop.has_value());
    EXPECT_GT(after.sets.negative.size(), before.sets.negative.size());
    ValidityDiff d = DiffValidity(before.validity_json, after.validity_json);
    EXPECT_TRUE(d.added.empty()) << k;
    EXPECT_FALSE(d.removed.empty()) << k;
  }
}

TEST_F(FlowersRun, PortfoliosSound) {
  for (const auto& it : *run_) {
    ASSERT_EQ(it.portfolio.size(), static_cast<std::size_t>(fixtures::kPortfolioSize));
    for (const Sample& s : it.portfolio) {
      if (!s.result.solved()) continue;
      EXPECT_TRUE(SoundnessViolations(s.result.grid, true, it.model.valid).empty());
    }
  }
}

TEST_F(FlowersRun, CroppedArtifactsDisappear) {
  // Once cropped, the floating-stem block is no longer producible: its
  // center rows would need a removed adjacency.
  const auto& it = (*run_)[3];
  const TileGrid crop = it.examples.back().grid;
  for (const Sample& s : it.portfolio) {
    if (!s.image) continue;
    const TileGrid& g = *s.image;
    for (int y = 0; y + crop.height <= g.height; ++y) {
      for (int x = 0; x + crop.width <= g.width; ++x) {
        TileGrid window = Crop(g, {x, y, crop.width, crop.height});
        EXPECT_NE(window.cells, crop.cells) << s.id << " at " << x << "," << y;
      }
    }
  }
}

}  // namespace
}  // namespace wfcteach
