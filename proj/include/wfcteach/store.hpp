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

// Directory-backed teaching sessions.
//
//   <dir>/session.json              manifest (wfcteach.session/1)
//   <dir>/history.jsonl             append-only mutation log
//   <dir>/examples/<id>.png|.txt    example images
//   <dir>/samples/<id>.png|.txt     rendered work samples
//   <dir>/samples/<id>.json         solved pattern grids
//   <dir>/runs/iter-NNNN/           catalog.json, validity.json per training
//
// Every mutation rewrites the manifest and appends one history line; the
// revision counter increases by exactly one per mutation.

#ifndef WFCTEACH_STORE_HPP_
#define WFCTEACH_STORE_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "wfcteach/session.hpp"

namespace wfcteach {

struct GenerateOptions {
  int count = 1;
  std::uint64_t seed = 0;
  SolverConfig solver;  // solver.seed is ignored; samples derive their own
};

class SessionStore {
 public:
  // Throws kConflict when dir already holds a session.
  static SessionStore Create(const std::filesystem::path& dir);
  // Throws kNotFound when dir holds no session.
  static SessionStore Open(const std::filesystem::path& dir);
  static bool Exists(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const { return dir_; }
  const TeachingSession& session() const { return session_; }
  int revision() const { return revision_; }

  std::string AddExample(const TileGrid& grid, Label label, Origin origin = {});
  std::string AddExampleFile(const std::filesystem::path& file, Label label);
  // `sample` is a work-sample id of this session or a path to an image.
  std::string CropExample(const std::string& sample, const Rect& rect, Label label);
  void RemoveExample(const std::string& id);

  // Updates the pattern configuration / strategy, then retrains.
  const TrainedModel& Train(const PatternConfig& cfg, Strategy strategy);
  const TrainedModel& Retrain();

  Portfolio Generate(const GenerateOptions& options);

  std::filesystem::path SamplePath(const std::string& id) const;
  std::filesystem::path RunDir(int iteration) const;
  std::string ValidityExport(int iteration) const;

  // Diff between two training runs. Each reference is an iteration number of
  // this session or a path to a validity export.
  std::string Diff(const std::string& a, const std::string& b) const;

 private:
  SessionStore(std::filesystem::path dir, TeachingSession session, int revision)
      : dir_(std::move(dir)), session_(std::move(session)), revision_(revision) {}

  void Commit(const std::string& event_json);
  void WriteManifest() const;
  std::string ResolveExport(const std::string& ref) const;

  std::filesystem::path dir_;
  TeachingSession session_;
  int revision_ = 0;
};

// Parses "x,y,w,h".
std::optional<Rect> ParseRect(std::string_view text);

}  // namespace wfcteach

#endif  // WFCTEACH_STORE_HPP_
