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

#include "wfcteach/store.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "wfcteach/error.hpp"

namespace wfcteach {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "session.json";
constexpr const char* kHistory = "history.jsonl";
constexpr const char* kFormat = "wfcteach.session/1";

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes through a temporary file so a crash never leaves a torn manifest.
void WriteText(const fs::path& path, std::string_view text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << text;
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot replace " + path.string() + ": " + ec.message());
}

Tile ParseTileKey(const std::string& key) {
  if (key.size() == 9 && key[0] == '#') {
    std::uint8_t v[4];
    for (int i = 0; i < 4; ++i) {
      auto [ptr, ec] = std::from_chars(key.data() + 1 + 2 * i, key.data() + 3 + 2 * i, v[i], 16);
      if (ec != std::errc() || ptr != key.data() + 3 + 2 * i) {
        throw Error(ErrorCode::kFormat, "bad palette entry " + key);
      }
    }
    return Rgba{v[0], v[1], v[2], v[3]};
  }
  if (key.size() >= 3 && key.front() == '\'' && key.back() == '\'') {
    return key.substr(1, key.size() - 2);
  }
  throw Error(ErrorCode::kFormat, "bad palette entry " + key);
}

json ConfigJson(const PatternConfig& cfg) {
  return {{"n", cfg.n},
          {"wrap_input", cfg.wrap_input},
          {"symmetry",
           {{"reflections", cfg.symmetry.reflections}, {"rotations", cfg.symmetry.rotations}}}};
}

PatternConfig ConfigFromJson(const json& j) {
  PatternConfig cfg;
  cfg.n = j.at("n").get<int>();
  cfg.wrap_input = j.at("wrap_input").get<bool>();
  cfg.symmetry.reflections = j.at("symmetry").at("reflections").get<bool>();
  cfg.symmetry.rotations = j.at("symmetry").at("rotations").get<bool>();
  return cfg;
}

json OriginJson(const Origin& o) {
  json j = {{"kind", OriginKindName(o.kind)}};
  if (o.kind == Origin::Kind::kCropped) {
    j["sample"] = o.sample;
    j["rect"] = {o.rect.x, o.rect.y, o.rect.w, o.rect.h};
  }
  return j;
}

Origin OriginFromJson(const json& j) {
  Origin o;
  auto kind = ParseOriginKind(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::kFormat, "bad example origin");
  o.kind = *kind;
  if (o.kind == Origin::Kind::kCropped) {
    o.sample = j.at("sample").get<std::string>();
    auto r = j.at("rect");
    o.rect = {r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<int>(), r.at(3).get<int>()};
  }
  return o;
}

json StatsJson(const SolveStats& s) {
  return {{"observations", s.observations},
          {"propagations", s.propagations},
          {"restarts", s.restarts},
          {"wall_ms", s.wall_ms}};
}

const char* GridExtension(const Palette& palette) { return palette.AllColors() ? ".png" : ".txt"; }

void SaveGrid(const fs::path& path, const TileGrid& grid) {
  if (path.extension() == ".txt") {
    WriteText(path, EmitText(grid));
  } else {
    WriteFileBytes(path.string(), EmitImage(grid));
  }
}

// Relative path of an existing grid file for an id, preferring PNG.
std::string GridFile(const fs::path& dir, const char* sub, const std::string& id) {
  std::string png = std::string(sub) + "/" + id + ".png";
  return fs::exists(dir / png) ? png : std::string(sub) + "/" + id + ".txt";
}

}  // namespace

std::optional<Rect> ParseRect(std::string_view text) {
  int v[4];
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < 4; ++i) {
    auto [next, ec] = std::from_chars(p, end, v[i]);
    if (ec != std::errc()) return std::nullopt;
    p = next;
    if (i < 3) {
      if (p == end || *p != ',') return std::nullopt;
      ++p;
    }
  }
  if (p != end) return std::nullopt;
  return Rect{v[0], v[1], v[2], v[3]};
}

bool SessionStore::Exists(const fs::path& dir) { return fs::exists(dir / kManifest); }

SessionStore SessionStore::Create(const fs::path& dir) {
  if (Exists(dir)) throw Error(ErrorCode::kConflict, "a session already exists in " + dir.string());
  std::error_code ec;
  for (const char* sub : {"examples", "samples", "runs"}) {
    fs::create_directories(dir / sub, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + (dir / sub).string() + ": " + ec.message());
  }
  SessionStore store(dir, TeachingSession(), 0);
  store.Commit(json{{"event", "create"}}.dump());
  return store;
}

SessionStore SessionStore::Open(const fs::path& dir) {
  if (!Exists(dir)) throw Error(ErrorCode::kNotFound, "no session in " + dir.string());
  json m;
  try {
    m = json::parse(ReadText(dir / kManifest));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("corrupt session manifest: ") + e.what());
  }
  if (m.value("format", "") != kFormat) {
    throw Error(ErrorCode::kFormat, "unsupported session manifest format");
  }
  try {
    TeachingSession::State state;
    state.cfg = ConfigFromJson(m.at("pattern"));
    auto strategy = ParseStrategy(m.at("strategy").get<std::string>());
    if (!strategy) throw Error(ErrorCode::kFormat, "bad strategy in manifest");
    state.strategy = *strategy;
    for (const auto& key : m.at("palette")) state.palette.FindOrAdd(ParseTileKey(key.get<std::string>()));
    for (const auto& e : m.at("examples")) {
      Example ex;
      ex.id = e.at("id").get<std::string>();
      auto label = ParseLabel(e.at("label").get<std::string>());
      if (!label) throw Error(ErrorCode::kFormat, "bad example label");
      ex.label = *label;
      ex.origin = OriginFromJson(e.at("origin"));
      ex.grid = LoadGridFile((dir / e.at("file").get<std::string>()).string(), &state.palette,
                             PaletteMode::kSealed);
      state.examples.push_back(std::move(ex));
    }
    for (const auto& s : m.at("samples")) {
      Sample sample;
      sample.id = s.at("id").get<std::string>();
      sample.seed = s.at("seed").get<std::uint64_t>();
      sample.iteration = s.at("iteration").get<int>();
      sample.solver.width = s.at("width").get<int>();
      sample.solver.height = s.at("height").get<int>();
      sample.solver.wrap = s.at("wrap").get<bool>();
      sample.solver.max_restarts = s.at("max_restarts").get<int>();
      sample.solver.seed = sample.seed;
      const auto& st = s.at("stats");
      sample.result.stats.observations = st.at("observations").get<std::uint64_t>();
      sample.result.stats.propagations = st.at("propagations").get<std::uint64_t>();
      sample.result.stats.restarts = st.at("restarts").get<int>();
      sample.result.stats.wall_ms = st.at("wall_ms").get<double>();
      if (s.at("status").get<std::string>() == "solved") {
        sample.result.outcome = SolveResult::Outcome::kSolved;
        const json g = json::parse(ReadText(dir / s.at("grid").get<std::string>()));
        sample.result.grid.width = g.at("width").get<int>();
        sample.result.grid.height = g.at("height").get<int>();
        sample.result.grid.ids = g.at("ids").get<std::vector<PatternId>>();
        sample.image = LoadGridFile((dir / s.at("file").get<std::string>()).string(),
                                    &state.palette, PaletteMode::kSealed);
      } else {
        sample.result.outcome = SolveResult::Outcome::kContradiction;
        if (!s.at("failing_cell").is_null()) sample.result.failing_cell = s.at("failing_cell").get<int>();
      }
      state.samples.push_back(std::move(sample));
    }
    state.latest_portfolio = m.at("latest_portfolio").get<std::vector<std::string>>();
    state.next_example = m.at("counters").at("example").get<int>();
    state.next_sample = m.at("counters").at("sample").get<int>();
    state.stale = m.at("stale").get<bool>();

    std::istringstream history(ReadText(dir / kHistory));
    std::string line;
    while (std::getline(history, line)) {
      if (line.empty()) continue;
      const json ev = json::parse(line);
      const std::string kind = ev.at("event").get<std::string>();
      if (kind == "retrain") {
        IterationRecord r;
        r.iteration = ev.at("iteration").get<int>();
        r.example_ids = ev.at("examples").get<std::vector<std::string>>();
        r.strategy = *ParseStrategy(ev.at("strategy").get<std::string>());
        r.cfg = ConfigFromJson(ev.at("pattern"));
        r.digest = ev.at("digest").get<std::string>();
        state.history.push_back(std::move(r));
      } else if (kind == "portfolio" && !state.history.empty()) {
        for (const auto& id : ev.at("samples")) {
          state.history.back().sample_ids.push_back(id.get<std::string>());
        }
      }
    }
    return SessionStore(dir, TeachingSession::Restore(std::move(state)),
                        m.at("revision").get<int>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("corrupt session: ") + e.what());
  }
}

void SessionStore::WriteManifest() const {
  const TeachingSession& s = session_;
  json m;
  m["format"] = kFormat;
  m["pattern"] = ConfigJson(s.pattern_config());
  m["strategy"] = StrategyName(s.strategy());
  auto& pal = m["palette"] = json::array();
  for (const Tile& t : s.palette().entries()) pal.push_back(TileKey(t));
  auto& ex = m["examples"] = json::array();
  for (const Example& e : s.examples()) {
    ex.push_back({{"id", e.id},
                  {"label", LabelName(e.label)},
                  {"origin", OriginJson(e.origin)},
                  {"file", GridFile(dir_, "examples", e.id)},
                  {"width", e.grid.width},
                  {"height", e.grid.height}});
  }
  auto& samples = m["samples"] = json::array();
  for (const auto& [id, sample] : s.samples()) {
    json j = {{"id", id},
              {"seed", sample.seed},
              {"iteration", sample.iteration},
              {"width", sample.solver.width},
              {"height", sample.solver.height},
              {"wrap", sample.solver.wrap},
              {"max_restarts", sample.solver.max_restarts},
              {"status", sample.result.solved() ? "solved" : "contradiction"},
              {"stats", StatsJson(sample.result.stats)},
              {"failing_cell", nullptr}};
    if (sample.result.solved()) {
      j["file"] = GridFile(dir_, "samples", id);
      j["grid"] = "samples/" + id + ".json";
    } else if (sample.result.failing_cell) {
      j["failing_cell"] = *sample.result.failing_cell;
    }
    samples.push_back(std::move(j));
  }
  m["latest_portfolio"] = s.latest_portfolio();
  m["counters"] = {{"example", s.next_example()}, {"sample", s.next_sample()}};
  m["revision"] = revision_;
  m["iteration"] = s.iteration();
  m["stale"] = s.stale();
  WriteText(dir_ / kManifest, m.dump(1) + "\n");
}

void SessionStore::Commit(const std::string& event_json) {
  ++revision_;
  json ev = json::parse(event_json);
  ev["revision"] = revision_;
  {
    std::ofstream out(dir_ / kHistory, std::ios::app | std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot append to history");
    out << ev.dump() << "\n";
  }
  WriteManifest();
}

std::string SessionStore::AddExample(const TileGrid& grid, Label label, Origin origin) {
  std::string id = session_.AddExample(grid, label, origin);
  const Example& e = session_.example(id);
  TileGrid saved = e.grid;
  saved.palette = session_.palette();
  // Existing example files keep their format; a first symbol tile makes
  // every later file text.
  SaveGrid(dir_ / "examples" / (id + GridExtension(session_.palette())), saved);
  Commit(json{{"event", "add-example"},
              {"id", id},
              {"label", LabelName(label)},
              {"origin", OriginJson(origin)}}
             .dump());
  return id;
}

std::string SessionStore::AddExampleFile(const fs::path& file, Label label) {
  Origin origin;
  origin.kind = Origin::Kind::kImported;
  return AddExample(LoadGridFile(file.string()), label, origin);
}

std::string SessionStore::CropExample(const std::string& sample, const Rect& rect, Label label) {
  TileGrid source;
  auto it = session_.samples().find(sample);
  if (it != session_.samples().end()) {
    if (!it->second.image) {
      throw Error(ErrorCode::kNotFound, "sample " + sample + " has no image (contradiction)");
    }
    source = *it->second.image;
    source.palette = session_.palette();
  } else if (fs::exists(sample)) {
    source = LoadGridFile(sample);
  } else {
    throw Error(ErrorCode::kNotFound, "no sample " + sample);
  }
  Origin origin;
  origin.kind = Origin::Kind::kCropped;
  origin.sample = sample;
  origin.rect = rect;
  return AddExample(Crop(source, rect), label, origin);
}

void SessionStore::RemoveExample(const std::string& id) {
  session_.RemoveExample(id);
  std::error_code ec;
  for (const char* ext : {".png", ".txt"}) fs::remove(dir_ / "examples" / (id + ext), ec);
  Commit(json{{"event", "remove-example"}, {"id", id}}.dump());
}

const TrainedModel& SessionStore::Train(const PatternConfig& cfg, Strategy strategy) {
  session_.Configure(cfg, strategy);
  return Retrain();
}

const TrainedModel& SessionStore::Retrain() {
  const TrainedModel& model = session_.Retrain();
  const IterationRecord& record = session_.history().back();
  const fs::path run = RunDir(record.iteration);
  std::error_code ec;
  fs::create_directories(run, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + run.string());
  WriteText(run / "catalog.json", model.catalog_json);
  WriteText(run / "validity.json", model.validity_json);
  Commit(json{{"event", "retrain"},
              {"iteration", record.iteration},
              {"examples", record.example_ids},
              {"strategy", StrategyName(record.strategy)},
              {"pattern", ConfigJson(record.cfg)},
              {"digest", record.digest},
              {"patterns", model.catalog.size()},
              {"valid", model.valid.size()}}
             .dump());
  return model;
}

Portfolio SessionStore::Generate(const GenerateOptions& options) {
  Portfolio portfolio = session_.GeneratePortfolio(options.count, options.seed, options.solver);
  const TrainedModel& model = session_.model();
  json ids = json::array();
  for (const Sample& s : portfolio.samples) {
    ids.push_back(s.id);
    if (!s.result.solved()) continue;
    SaveGrid(SamplePath(s.id), *s.image);
    WriteText(dir_ / "samples" / (s.id + ".json"),
              PatternGridToJson(s.result.grid, s.solver.wrap, s.seed, model.catalog_digest));
  }
  Commit(json{{"event", "portfolio"},
              {"iteration", portfolio.iteration},
              {"count", options.count},
              {"seed", options.seed},
              {"width", options.solver.width},
              {"height", options.solver.height},
              {"wrap", options.solver.wrap},
              {"samples", ids}}
             .dump());
  return portfolio;
}

fs::path SessionStore::SamplePath(const std::string& id) const {
  return dir_ / "samples" / (id + GridExtension(session_.palette()));
}

fs::path SessionStore::RunDir(int iteration) const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "iter-%04d", iteration);
  return dir_ / "runs" / buf;
}

std::string SessionStore::ValidityExport(int iteration) const {
  if (iteration < 1 || iteration > session_.iteration()) {
    throw Error(ErrorCode::kNotFound, "no training iteration " + std::to_string(iteration));
  }
  return ReadText(RunDir(iteration) / "validity.json");
}

std::string SessionStore::ResolveExport(const std::string& ref) const {
  int iteration = 0;
  auto [p, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), iteration);
  if (ec == std::errc() && p == ref.data() + ref.size()) return ValidityExport(iteration);
  if (!fs::exists(ref)) throw Error(ErrorCode::kNotFound, "no training run " + ref);
  return ReadText(ref);
}

std::string SessionStore::Diff(const std::string& a, const std::string& b) const {
  return FormatDiff(DiffValidity(ResolveExport(a), ResolveExport(b)), a, b);
}

}  // namespace wfcteach
