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

#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "wfcteach/digest.hpp"
#include "wfcteach/error.hpp"
#include "wfcteach/store.hpp"

namespace wfcteach {
namespace {

namespace fs = std::filesystem;

class StoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("wfcteach-store-" + std::to_string(std::random_device{}()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static GenerateOptions Options(int count, std::uint64_t seed) {
    GenerateOptions o;
    o.count = count;
    o.seed = seed;
    o.solver.width = 12;
    o.solver.height = 12;
    o.solver.max_restarts = 20;
    return o;
  }

  fs::path dir_;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(ParseRect, Forms) {
  EXPECT_EQ(ParseRect("1,2,3,4"), (Rect{1, 2, 3, 4}));
  EXPECT_FALSE(ParseRect("1,2,3").has_value());
  EXPECT_FALSE(ParseRect("1,2,3,4,").has_value());
  EXPECT_FALSE(ParseRect("a,2,3,4").has_value());
}

TEST_F(StoreTest, CreateOpenRoundTrip) {
  {
    SessionStore s = SessionStore::Create(dir_);
    EXPECT_EQ(s.revision(), 1);
    s.AddExampleFile(fixtures::FlowersFile("iter1_flowers"), Label::kPositive);
    EXPECT_EQ(s.revision(), 2);
    s.Retrain();
    s.Generate(Options(3, 9));
    EXPECT_EQ(s.revision(), 4);
  }
  EXPECT_TRUE(SessionStore::Exists(dir_));
  SessionStore s = SessionStore::Open(dir_);
  EXPECT_EQ(s.revision(), 4);
  EXPECT_EQ(s.session().examples().size(), 1u);
  EXPECT_EQ(s.session().iteration(), 1);
  EXPECT_FALSE(s.session().stale());
  EXPECT_EQ(s.session().latest_portfolio().size(), 3u);
  EXPECT_TRUE(fs::exists(s.RunDir(1) / "validity.json"));
  EXPECT_TRUE(fs::exists(dir_ / "history.jsonl"));
  EXPECT_EQ(Sha256Hex(s.ValidityExport(1)), s.session().history()[0].digest);
  for (const std::string& id : s.session().latest_portfolio()) {
    if (!s.session().sample(id).result.solved()) continue;
    TileGrid on_disk = LoadGridFile(s.SamplePath(id));
    EXPECT_EQ(EmitImage(on_disk), EmitImage(*s.session().sample(id).image));
  }
}

TEST_F(StoreTest, ReopenedSessionRegeneratesSameSamples) {
  SessionStore a = SessionStore::Create(dir_);
  a.AddExampleFile(fixtures::FlowersFile("iter1_flowers"), Label::kPositive);
  a.Retrain();
  Portfolio first = a.Generate(Options(2, 5));
  SessionStore b = SessionStore::Open(dir_);
  Portfolio second = b.Generate(Options(2, 5));
  ASSERT_EQ(second.samples.size(), 2u);
  EXPECT_EQ(second.samples[0].id, "s0003");
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(first.samples[i].result.grid.ids, second.samples[i].result.grid.ids);
  }
}

TEST_F(StoreTest, CreateTwiceConflicts) {
  SessionStore::Create(dir_);
  try {
    SessionStore::Create(dir_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConflict);
  }
}

TEST_F(StoreTest, OpenMissingNotFound) {
  try {
    SessionStore::Open(dir_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST_F(StoreTest, CropFromSampleRecordsOrigin) {
  SessionStore s = SessionStore::Create(dir_);
  s.AddExampleFile(fixtures::FlowersFile("iter1_flowers"), Label::kPositive);
  s.Retrain();
  Portfolio p = s.Generate(Options(1, 1));
  ASSERT_TRUE(p.samples[0].result.solved());
  const std::string id = s.CropExample(p.samples[0].id, {2, 3, 3, 4}, Label::kNegative);
  const Example& e = s.session().example(id);
  EXPECT_EQ(e.label, Label::kNegative);
  EXPECT_EQ(e.origin.kind, Origin::Kind::kCropped);
  EXPECT_EQ(e.origin.sample, p.samples[0].id);
  EXPECT_EQ(e.origin.rect, (Rect{2, 3, 3, 4}));
  EXPECT_EQ(e.grid.cells, Crop(*p.samples[0].image, {2, 3, 3, 4}).cells);
  EXPECT_THROW(s.CropExample("s9999", {0, 0, 3, 4}, Label::kNegative), Error);
  EXPECT_THROW(s.CropExample(p.samples[0].id, {10, 10, 3, 4}, Label::kNegative), Error);

  SessionStore reopened = SessionStore::Open(dir_);
  EXPECT_EQ(reopened.session().example(id).origin, e.origin);
  EXPECT_EQ(reopened.session().example(id).grid.cells, e.grid.cells);
}

TEST_F(StoreTest, RemoveExample) {
  SessionStore s = SessionStore::Create(dir_);
  const std::string id = s.AddExampleFile(fixtures::FlowersFile("iter1_flowers"), Label::kPositive);
  const int rev = s.revision();
  try {
    s.RemoveExample("e0042");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  EXPECT_EQ(s.revision(), rev);
  s.RemoveExample(id);
  EXPECT_EQ(s.revision(), rev + 1);
  EXPECT_TRUE(SessionStore::Open(dir_).session().examples().empty());
}

TEST_F(StoreTest, DiffByIterationOrPath) {
  SessionStore s = SessionStore::Create(dir_);
  s.AddExample(fixtures::Text("abab\nbaba\n"), Label::kPositive);
  s.Train(PatternConfig{1, true, {}}, Strategy::kMggMinusNegatives);
  s.AddExample(fixtures::Text("aa\n"), Label::kNegative);
  s.Retrain();
  const std::string by_iteration = s.Diff("1", "2");
  EXPECT_NE(by_iteration.find("added 0 removed 2"), std::string::npos) << by_iteration;
  const std::string by_path =
      s.Diff((s.RunDir(1) / "validity.json").string(), (s.RunDir(2) / "validity.json").string());
  EXPECT_NE(by_path.find("added 0 removed 2"), std::string::npos);
  EXPECT_THROW(s.Diff("1", "7"), Error);
  EXPECT_THROW(s.ValidityExport(0), Error);
}

TEST_F(StoreTest, ManifestIsJson) {
  SessionStore s = SessionStore::Create(dir_);
  s.AddExampleFile(fixtures::FlowersFile("iter1_flowers"), Label::kPositive);
  const std::string manifest = Slurp(dir_ / "session.json");
  EXPECT_NE(manifest.find("wfcteach.session/1"), std::string::npos);
  EXPECT_NE(manifest.find("e0001"), std::string::npos);
}

}  // namespace
}  // namespace wfcteach
