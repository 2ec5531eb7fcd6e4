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

#include "wfcteach/wfcteach.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "wfcteach/error.hpp"
#include "wfcteach/service.hpp"
#include "wfcteach/store.hpp"

struct wt_session {
  wfcteach::SessionStore store;
};

struct wt_portfolio {
  wfcteach::Portfolio portfolio;
};

namespace {

using wfcteach::ErrorCode;

thread_local std::string last_error;

wt_status StatusOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFormat: return WT_E_FORMAT;
    case ErrorCode::kUnknownTile: return WT_E_UNKNOWN_TILE;
    case ErrorCode::kRender: return WT_E_FORMAT;
    case ErrorCode::kConfig: return WT_E_CONFIG;
    case ErrorCode::kBounds: return WT_E_BOUNDS;
    case ErrorCode::kCatalog: return WT_E_INTERNAL;
    case ErrorCode::kSize: return WT_E_SIZE;
    case ErrorCode::kTraining: return WT_E_TRAINING;
    case ErrorCode::kStale: return WT_E_STALE;
    case ErrorCode::kNotFound: return WT_E_NOT_FOUND;
    case ErrorCode::kConflict: return WT_E_CONFLICT;
    case ErrorCode::kIo: return WT_E_IO;
    case ErrorCode::kInternal: return WT_E_INTERNAL;
  }
  return WT_E_INTERNAL;
}

wt_status Fail(wt_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename Fn>
wt_status Call(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return WT_OK;
  } catch (const wfcteach::Error& e) {
    return Fail(StatusOf(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(WT_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(WT_E_INTERNAL, e.what());
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

wfcteach::Label LabelOf(wt_label label) {
  return label == WT_NEGATIVE ? wfcteach::Label::kNegative : wfcteach::Label::kPositive;
}

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw wfcteach::Error(ErrorCode::kNotFound, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

extern "C" {

const char* wt_version(void) { return "0.1.0"; }

const char* wt_last_error(void) { return last_error.c_str(); }

const char* wt_status_name(wt_status status) {
  switch (status) {
    case WT_OK: return "ok";
    case WT_E_ARGUMENT: return "argument";
    case WT_E_FORMAT: return "format";
    case WT_E_UNKNOWN_TILE: return "unknown-tile";
    case WT_E_CONFIG: return "config";
    case WT_E_BOUNDS: return "bounds";
    case WT_E_SIZE: return "size";
    case WT_E_TRAINING: return "training";
    case WT_E_STALE: return "stale";
    case WT_E_NOT_FOUND: return "not-found";
    case WT_E_CONFLICT: return "conflict";
    case WT_E_IO: return "io";
    case WT_E_INTERNAL: return "internal";
  }
  return "unknown";
}

void wt_string_free(char* s) { std::free(s); }

void wt_train_options_default(wt_train_options* options) {
  if (options == nullptr) return;
  wfcteach::PatternConfig cfg;
  options->n = cfg.n;
  options->wrap_input = cfg.wrap_input ? 1 : 0;
  options->symmetry = 0;
  options->strategy = WT_STRATEGY_MGG_MINUS_NEGATIVES;
}

void wt_generate_options_default(wt_generate_options* options) {
  if (options == nullptr) return;
  wfcteach::SolverConfig cfg;
  options->count = 1;
  options->seed = 0;
  options->width = cfg.width;
  options->height = cfg.height;
  options->wrap = cfg.wrap ? 1 : 0;
  options->max_restarts = cfg.max_restarts;
}

wt_status wt_session_init(const char* dir, wt_session** out) {
  if (dir == nullptr || out == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  return Call([&] { *out = new wt_session{wfcteach::SessionStore::Create(dir)}; });
}

wt_status wt_session_open(const char* dir, wt_session** out) {
  if (dir == nullptr || out == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  return Call([&] { *out = new wt_session{wfcteach::SessionStore::Open(dir)}; });
}

void wt_session_close(wt_session* session) { delete session; }

wt_status wt_session_describe(const wt_session* session, char** out_json) {
  if (session == nullptr || out_json == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  return Call([&] { *out_json = Dup(ReadAll((session->store.dir() / "session.json").string())); });
}

wt_status wt_session_pattern_options(const wt_session* session, wt_train_options* out) {
  if (session == nullptr || out == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  const wfcteach::TeachingSession& s = session->store.session();
  out->n = s.pattern_config().n;
  out->wrap_input = s.pattern_config().wrap_input ? 1 : 0;
  out->symmetry = (s.pattern_config().symmetry.reflections ? WT_SYMMETRY_REFLECTIONS : 0) |
                  (s.pattern_config().symmetry.rotations ? WT_SYMMETRY_ROTATIONS : 0);
  out->strategy = static_cast<wt_strategy>(s.strategy());
  return WT_OK;
}

wt_status wt_session_add_example_file(wt_session* session, const char* path, wt_label label,
                                      char** out_id) {
  if (session == nullptr || path == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  return Call([&] {
    std::string id = session->store.AddExampleFile(path, LabelOf(label));
    if (out_id != nullptr) *out_id = Dup(id);
  });
}

wt_status wt_session_crop_example(wt_session* session, const char* sample, int x, int y, int w,
                                  int h, wt_label label, char** out_id) {
  if (session == nullptr || sample == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  return Call([&] {
    std::string id = session->store.CropExample(sample, wfcteach::Rect{x, y, w, h}, LabelOf(label));
    if (out_id != nullptr) *out_id = Dup(id);
  });
}

wt_status wt_session_remove_example(wt_session* session, const char* id) {
  if (session == nullptr || id == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  return Call([&] { session->store.RemoveExample(id); });
}

wt_status wt_session_train(wt_session* session, const wt_train_options* options,
                           wt_train_report* report) {
  if (session == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  wt_train_options opts;
  if (options != nullptr) {
    opts = *options;
  } else {
    wt_session_pattern_options(session, &opts);
  }
  if (opts.strategy < WT_STRATEGY_MGG || opts.strategy > WT_STRATEGY_MGG_MINUS_NEGATIVES) {
    return Fail(WT_E_ARGUMENT, "unknown strategy");
  }
  return Call([&] {
    wfcteach::PatternConfig cfg;
    cfg.n = opts.n;
    cfg.wrap_input = opts.wrap_input != 0;
    cfg.symmetry.reflections = (opts.symmetry & WT_SYMMETRY_REFLECTIONS) != 0;
    cfg.symmetry.rotations = (opts.symmetry & WT_SYMMETRY_ROTATIONS) != 0;
    const wfcteach::TrainedModel& m =
        session->store.Train(cfg, static_cast<wfcteach::Strategy>(opts.strategy));
    if (report == nullptr) return;
    report->iteration = session->store.session().iteration();
    report->patterns = m.catalog.size();
    report->legal = m.sets.legal.size();
    report->observed = m.sets.observed.size();
    report->negative = m.sets.negative.size();
    report->valid = m.valid.size();
    report->starved = m.starved.size();
    std::snprintf(report->digest, sizeof(report->digest), "%s", m.digest.c_str());
  });
}

wt_status wt_session_generate(wt_session* session, const wt_generate_options* options,
                              wt_portfolio** out) {
  if (session == nullptr || options == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  return Call([&] {
    wfcteach::GenerateOptions g;
    g.count = options->count;
    g.seed = options->seed;
    g.solver.width = options->width;
    g.solver.height = options->height;
    g.solver.wrap = options->wrap != 0;
    g.solver.max_restarts = options->max_restarts;
    auto p = std::make_unique<wt_portfolio>(wt_portfolio{session->store.Generate(g)});
    if (out != nullptr) *out = p.release();
  });
}

size_t wt_portfolio_size(const wt_portfolio* portfolio) {
  return portfolio == nullptr ? 0 : portfolio->portfolio.samples.size();
}

wt_status wt_portfolio_sample(const wt_portfolio* portfolio, size_t index, wt_sample_info* out) {
  if (portfolio == nullptr || out == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  if (index >= portfolio->portfolio.samples.size()) {
    return Fail(WT_E_BOUNDS, "sample index out of range");
  }
  const wfcteach::Sample& s = portfolio->portfolio.samples[index];
  out->id = s.id.c_str();
  out->seed = s.seed;
  out->solved = s.result.solved() ? 1 : 0;
  out->failing_x = -1;
  out->failing_y = -1;
  if (!s.result.solved() && s.result.failing_cell) {
    out->failing_x = *s.result.failing_cell % s.solver.width;
    out->failing_y = *s.result.failing_cell / s.solver.width;
  }
  out->restarts = s.result.stats.restarts;
  out->observations = static_cast<int64_t>(s.result.stats.observations);
  out->propagations = static_cast<int64_t>(s.result.stats.propagations);
  out->wall_ms = s.result.stats.wall_ms;
  return WT_OK;
}

void wt_portfolio_free(wt_portfolio* portfolio) { delete portfolio; }

wt_status wt_session_sample_path(const wt_session* session, const char* id, char** out_path) {
  if (session == nullptr || id == nullptr || out_path == nullptr) {
    return Fail(WT_E_ARGUMENT, "null argument");
  }
  return Call([&] {
    const wfcteach::Sample& s = session->store.session().sample(id);
    if (!s.image) throw wfcteach::Error(ErrorCode::kNotFound, "sample " + s.id + " has no image");
    *out_path = Dup(session->store.SamplePath(id).string());
  });
}

wt_status wt_session_validity_export(const wt_session* session, int iteration,
                                     char** out_json) {
  if (session == nullptr || out_json == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  return Call([&] { *out_json = Dup(session->store.ValidityExport(iteration)); });
}

wt_status wt_session_diff(const wt_session* session, const char* a, const char* b,
                          char** out_text) {
  if (session == nullptr || a == nullptr || b == nullptr || out_text == nullptr) {
    return Fail(WT_E_ARGUMENT, "null argument");
  }
  return Call([&] { *out_text = Dup(session->store.Diff(a, b)); });
}

wt_status wt_validity_diff_files(const char* a_path, const char* b_path, char** out_text) {
  if (a_path == nullptr || b_path == nullptr || out_text == nullptr) {
    return Fail(WT_E_ARGUMENT, "null argument");
  }
  return Call([&] {
    *out_text = Dup(wfcteach::FormatDiff(wfcteach::DiffValidity(ReadAll(a_path), ReadAll(b_path)),
                                         a_path, b_path));
  });
}

wt_status wt_serve(const char* root, const char* host, int port,
                   void (*on_bound)(int port, void* user), void* user) {
  if (root == nullptr) return Fail(WT_E_ARGUMENT, "null argument");
  return Call([&] {
    wfcteach::Service service(root);
    const int bound = service.Bind(host != nullptr ? host : "127.0.0.1", port);
    if (bound < 0) {
      throw wfcteach::Error(ErrorCode::kIo, "cannot bind port " + std::to_string(port));
    }
    if (on_bound != nullptr) on_bound(bound, user);
    if (!service.Run()) throw wfcteach::Error(ErrorCode::kIo, "server stopped with an error");
  });
}

}  // extern "C"
