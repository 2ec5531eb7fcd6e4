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

#include "wfcteach/service.hpp"

#include <atomic>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>

#include "httplib.h"
#include "json.hpp"

#include "wfcteach/error.hpp"
#include "wfcteach/store.hpp"

namespace wfcteach {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Slot {
  std::mutex mu;
  std::atomic<bool> training{false};
  std::optional<SessionStore> store;
  // Last published state, served while a retrain holds `mu`.
  std::mutex snapshot_mu;
  json snapshot;

  void Publish(json state) {
    std::lock_guard lock(snapshot_mu);
    snapshot = std::move(state);
  }
  json Snapshot() {
    std::lock_guard lock(snapshot_mu);
    return snapshot;
  }
};

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict:
    case ErrorCode::kTraining:
    case ErrorCode::kStale: return 409;
    case ErrorCode::kIo:
    case ErrorCode::kInternal: return 500;
    default: return 400;
  }
}

void SendJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(1) + "\n", "application/json");
}

void SendError(httplib::Response& res, int status, const std::string& code,
               const std::string& message) {
  SendJson(res, status, {{"error", {{"code", code}, {"message", message}}}});
}

json StatsJson(const SolveStats& s) {
  return {{"observations", s.observations},
          {"propagations", s.propagations},
          {"restarts", s.restarts},
          {"wall_ms", s.wall_ms}};
}

json SampleJson(const std::string& session_id, const Sample& s) {
  json j = {{"id", s.id},
            {"seed", s.seed},
            {"iteration", s.iteration},
            {"width", s.solver.width},
            {"height", s.solver.height},
            {"status", s.result.solved() ? "solved" : "contradiction"},
            {"stats", StatsJson(s.result.stats)}};
  if (s.result.solved()) {
    j["image"] = "/sessions/" + session_id + "/samples/" + s.id + ".png";
  } else if (s.result.failing_cell) {
    j["failing_cell"] = {*s.result.failing_cell % s.solver.width,
                         *s.result.failing_cell / s.solver.width};
  }
  return j;
}

json StateJson(const std::string& id, const SessionStore& store, bool training) {
  const TeachingSession& s = store.session();
  json j;
  j["id"] = id;
  j["revision"] = store.revision();
  j["iteration"] = s.iteration();
  j["status"] = training ? "training" : (s.trained() && !s.stale()) ? "fresh" : "stale";
  j["trained"] = s.trained();
  j["strategy"] = StrategyName(s.strategy());
  j["pattern"] = {{"n", s.pattern_config().n},
                  {"wrap_input", s.pattern_config().wrap_input},
                  {"symmetry",
                   {{"reflections", s.pattern_config().symmetry.reflections},
                    {"rotations", s.pattern_config().symmetry.rotations}}}};
  auto& ex = j["examples"] = json::array();
  for (const Example& e : s.examples()) {
    json origin = {{"kind", OriginKindName(e.origin.kind)}};
    if (e.origin.kind == Origin::Kind::kCropped) {
      origin["sample"] = e.origin.sample;
      origin["rect"] = {e.origin.rect.x, e.origin.rect.y, e.origin.rect.w, e.origin.rect.h};
    }
    ex.push_back({{"id", e.id},
                  {"label", LabelName(e.label)},
                  {"origin", origin},
                  {"width", e.grid.width},
                  {"height", e.grid.height},
                  {"thumbnail", "/sessions/" + id + "/examples/" + e.id + ".png"}});
  }
  auto& portfolio = j["latest_portfolio"] = json::array();
  for (const std::string& sid : s.latest_portfolio()) {
    portfolio.push_back(SampleJson(id, s.sample(sid)));
  }
  j["digest"] = s.history().empty() ? json(nullptr) : json(s.history().back().digest);
  auto& history = j["history"] = json::array();
  for (const IterationRecord& r : s.history()) {
    history.push_back({{"iteration", r.iteration},
                       {"digest", r.digest},
                       {"strategy", StrategyName(r.strategy)},
                       {"examples", r.example_ids},
                       {"samples", r.sample_ids}});
  }
  return j;
}

json ParseBody(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json body = json::parse(req.body);
    if (!body.is_object()) throw Error(ErrorCode::kFormat, "request body must be a JSON object");
    return body;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("request body is not JSON: ") + e.what());
  }
}

std::optional<Rect> RectFromJson(const json& j) {
  try {
    if (j.is_array() && j.size() == 4) {
      return Rect{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
    }
    if (j.is_object()) {
      return Rect{j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(),
                  j.at("h").get<int>()};
    }
    if (j.is_string()) return ParseRect(j.get<std::string>());
  } catch (const json::exception&) {
  }
  return std::nullopt;
}

}  // namespace

struct Service::Impl {
  fs::path root;
  httplib::Server server;
  std::mutex registry_mu;
  std::map<std::string, std::shared_ptr<Slot>> sessions;

  std::shared_ptr<Slot> Find(const std::string& id) {
    std::lock_guard lock(registry_mu);
    auto it = sessions.find(id);
    if (it != sessions.end()) return it->second;
    if (id.find('/') != std::string::npos || id.find("..") != std::string::npos ||
        !SessionStore::Exists(root / id)) {
      throw Error(ErrorCode::kNotFound, "no session " + id);
    }
    auto slot = std::make_shared<Slot>();
    slot->store.emplace(SessionStore::Open(root / id));
    slot->Publish(StateJson(id, *slot->store, false));
    sessions[id] = slot;
    return slot;
  }

  // Runs a mutation under the session lock. Fails with 409 while the session
  // trains or when the caller's expected revision is out of date.
  template <typename Fn>
  void Mutate(const httplib::Request& req, httplib::Response& res, const json& body, Fn&& fn) {
    const std::string id = req.path_params.at("id");
    auto slot = Find(id);
    if (slot->training) throw Error(ErrorCode::kConflict, "session " + id + " is training");
    std::lock_guard lock(slot->mu);
    if (body.contains("expected_revision") &&
        body["expected_revision"].get<int>() != slot->store->revision()) {
      throw Error(ErrorCode::kConflict, "session revision is " +
                                            std::to_string(slot->store->revision()));
    }
    json extra = fn(*slot);
    json state = StateJson(id, *slot->store, false);
    slot->Publish(state);
    for (auto& [k, v] : extra.items()) state[k] = v;
    SendJson(res, 200, state);
  }

  template <typename Fn>
  httplib::Server::Handler Guard(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        SendError(res, HttpStatus(e.code()), ErrorCodeName(e.code()), e.what());
      } catch (const json::exception& e) {
        SendError(res, 400, "format", e.what());
      } catch (const std::exception& e) {
        SendError(res, 500, "internal", e.what());
      }
    };
  }

  void Routes() {
    server.Post("/sessions", Guard([this](const httplib::Request& req, httplib::Response& res) {
      json body = ParseBody(req);
      std::lock_guard lock(registry_mu);
      std::string id;
      for (int i = 1;; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "sess-%04d", i);
        if (!SessionStore::Exists(root / buf) && !sessions.count(buf)) {
          id = buf;
          break;
        }
      }
      auto slot = std::make_shared<Slot>();
      slot->store.emplace(SessionStore::Create(root / id));
      slot->Publish(StateJson(id, *slot->store, false));
      sessions[id] = slot;
      SendJson(res, 201, slot->Snapshot());
    }));

    server.Get("/sessions/:id", Guard([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.path_params.at("id");
      auto slot = Find(id);
      std::unique_lock lock(slot->mu, std::try_to_lock);
      if (!lock.owns_lock()) {
        if (slot->training) {
          json state = slot->Snapshot();
          state["status"] = "training";
          SendJson(res, 200, state);
          return;
        }
        lock.lock();
      }
      SendJson(res, 200, StateJson(id, *slot->store, false));
    }));

    server.Post("/sessions/:id/examples",
                Guard([this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_file("image")) throw Error(ErrorCode::kFormat, "multipart field 'image' is required");
      auto label = ParseLabel(req.has_file("label") ? req.get_file_value("label").content : "");
      if (!label) throw Error(ErrorCode::kFormat, "label must be positive or negative");
      Origin origin;
      origin.kind = Origin::Kind::kImported;
      if (req.has_file("origin")) {
        auto kind = ParseOriginKind(req.get_file_value("origin").content);
        if (!kind || *kind == Origin::Kind::kCropped) {
          throw Error(ErrorCode::kFormat, "origin must be authored or imported");
        }
        origin.kind = *kind;
      }
      json body = json::object();
      if (req.has_file("expected_revision")) {
        body["expected_revision"] = std::stoi(req.get_file_value("expected_revision").content);
      }
      const std::string& content = req.get_file_value("image").content;
      TileGrid grid = IngestImage(std::span(reinterpret_cast<const std::uint8_t*>(content.data()),
                                            content.size()));
      Mutate(req, res, body, [&](Slot& slot) {
        return json{{"example_id", slot.store->AddExample(grid, *label, origin)}};
      });
    }));

    server.Delete("/sessions/:id/examples/:eid",
                  Guard([this](const httplib::Request& req, httplib::Response& res) {
      Mutate(req, res, json::object(), [&](Slot& slot) {
        slot.store->RemoveExample(req.path_params.at("eid"));
        return json::object();
      });
    }));

    server.Get("/sessions/:id/examples/:file",
               Guard([this](const httplib::Request& req, httplib::Response& res) {
      std::string file = req.path_params.at("file");
      if (file.size() < 5 || file.substr(file.size() - 4) != ".png") {
        throw Error(ErrorCode::kNotFound, "example images are served as <id>.png");
      }
      auto slot = Find(req.path_params.at("id"));
      std::lock_guard lock(slot->mu);
      const Example& e = slot->store->session().example(file.substr(0, file.size() - 4));
      TileGrid g = e.grid;
      g.palette = slot->store->session().palette();
      auto png = EmitImage(g);
      res.set_content(std::string(png.begin(), png.end()), "image/png");
    }));

    server.Post("/sessions/:id/examples/crop",
                Guard([this](const httplib::Request& req, httplib::Response& res) {
      json body = ParseBody(req);
      auto rect = RectFromJson(body.value("rect", json()));
      if (!rect) throw Error(ErrorCode::kFormat, "rect must be [x, y, w, h]");
      auto label = ParseLabel(body.value("label", "negative"));
      if (!label) throw Error(ErrorCode::kFormat, "label must be positive or negative");
      const std::string sample = body.at("sample_id").get<std::string>();
      Mutate(req, res, body, [&](Slot& slot) {
        if (!slot.store->session().samples().count(sample)) {
          throw Error(ErrorCode::kNotFound, "no sample " + sample);
        }
        return json{{"example_id", slot.store->CropExample(sample, *rect, *label)}};
      });
    }));

    server.Post("/sessions/:id/retrain",
                Guard([this](const httplib::Request& req, httplib::Response& res) {
      json body = ParseBody(req);
      const std::string id = req.path_params.at("id");
      auto slot = Find(id);
      Mutate(req, res, body, [&](Slot& s) {
        s.training = true;
        struct Reset {
          Slot& s;
          ~Reset() { s.training = false; }
        } reset{s};
        PatternConfig cfg = s.store->session().pattern_config();
        Strategy strategy = s.store->session().strategy();
        if (body.contains("strategy")) {
          auto parsed = ParseStrategy(body["strategy"].get<std::string>());
          if (!parsed) throw Error(ErrorCode::kFormat, "strategy must be mgg, lgg or mgg-neg");
          strategy = *parsed;
        }
        cfg.n = body.value("n", cfg.n);
        cfg.wrap_input = body.value("wrap_input", cfg.wrap_input);
        if (body.contains("symmetry")) {
          cfg.symmetry.reflections = body["symmetry"].value("reflections", false);
          cfg.symmetry.rotations = body["symmetry"].value("rotations", false);
        }
        const TrainedModel& m = s.store->Train(cfg, strategy);
        json starved = json::array();
        for (const Starvation& st : m.starved) {
          starved.push_back({{"pattern", st.pattern}, {"direction", DirectionName(st.dir)}});
        }
        return json{{"patterns", m.catalog.size()},
                    {"legal", m.sets.legal.size()},
                    {"observed", m.sets.observed.size()},
                    {"negative", m.sets.negative.size()},
                    {"valid", m.valid.size()},
                    {"starved", starved}};
      });
    }));

    server.Get("/sessions/:id/validity",
               Guard([this](const httplib::Request& req, httplib::Response& res) {
      auto slot = Find(req.path_params.at("id"));
      std::lock_guard lock(slot->mu);
      const TeachingSession& s = slot->store->session();
      int iteration = s.iteration();
      if (req.has_param("iteration")) iteration = std::stoi(req.get_param_value("iteration"));
      std::string exported = slot->store->ValidityExport(iteration);
      SendJson(res, 200, {{"iteration", iteration},
                          {"digest", s.history().at(static_cast<std::size_t>(iteration) - 1).digest},
                          {"export", exported}});
    }));

    server.Post("/sessions/:id/portfolio",
                Guard([this](const httplib::Request& req, httplib::Response& res) {
      json body = ParseBody(req);
      GenerateOptions options;
      options.count = body.value("count", 1);
      options.seed = body.value("seed", std::uint64_t{0});
      options.solver.width = body.value("width", options.solver.width);
      options.solver.height = body.value("height", options.solver.height);
      options.solver.wrap = body.value("wrap", true);
      options.solver.max_restarts = body.value("max_restarts", options.solver.max_restarts);
      const std::string id = req.path_params.at("id");
      Mutate(req, res, body, [&](Slot& slot) {
        Portfolio p = slot.store->Generate(options);
        json samples = json::array();
        for (const Sample& s : p.samples) samples.push_back(SampleJson(id, s));
        return json{{"portfolio", samples}};
      });
    }));

    server.Get("/sessions/:id/samples/:file",
               Guard([this](const httplib::Request& req, httplib::Response& res) {
      std::string file = req.path_params.at("file");
      if (file.size() < 5 || file.substr(file.size() - 4) != ".png") {
        throw Error(ErrorCode::kNotFound, "samples are served as <id>.png");
      }
      auto slot = Find(req.path_params.at("id"));
      std::lock_guard lock(slot->mu);
      const Sample& s = slot->store->session().sample(file.substr(0, file.size() - 4));
      if (!s.image) throw Error(ErrorCode::kNotFound, "sample " + s.id + " has no image");
      TileGrid g = *s.image;
      g.palette = slot->store->session().palette();
      auto png = EmitImage(g);
      res.set_content(std::string(png.begin(), png.end()), "image/png");
    }));

    server.Get("/sessions/:id/diff", Guard([this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("a") || !req.has_param("b")) {
        throw Error(ErrorCode::kFormat, "query parameters a and b are required");
      }
      auto slot = Find(req.path_params.at("id"));
      std::lock_guard lock(slot->mu);
      auto parse = [](const std::string& v) {
        try {
          return std::stoi(v);
        } catch (const std::exception&) {
          throw Error(ErrorCode::kFormat, "iteration must be an integer: " + v);
        }
      };
      const int a = parse(req.get_param_value("a"));
      const int b = parse(req.get_param_value("b"));
      ValidityDiff diff =
          DiffValidity(slot->store->ValidityExport(a), slot->store->ValidityExport(b));
      SendJson(res, 200, {{"a", a},
                          {"b", b},
                          {"added", diff.added},
                          {"removed", diff.removed},
                          {"text", FormatDiff(diff, std::to_string(a), std::to_string(b))}});
    }));
  }
};

Service::Service(fs::path root) : impl_(std::make_unique<Impl>()) {
  impl_->root = std::move(root);
  std::error_code ec;
  fs::create_directories(impl_->root, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + impl_->root.string());
  impl_->Routes();
}

Service::~Service() { Stop(); }

int Service::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::Run() { return impl_->server.listen_after_bind(); }

void Service::Stop() { impl_->server.stop(); }

bool Service::running() const { return impl_->server.is_running(); }

}  // namespace wfcteach
