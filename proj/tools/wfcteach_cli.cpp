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

// wfcteach: command-line driver over the C interface.
//
// Exit codes: 0 success, 1 usage, 2 data or format error, 3 at least one
// generated sample ended in contradiction after all restarts.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wfcteach/wfcteach.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitContradiction = 3;

struct CliError {
  int code;
};

struct SessionCloser {
  void operator()(wt_session* s) const { wt_session_close(s); }
};
using SessionPtr = std::unique_ptr<wt_session, SessionCloser>;

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { wt_string_free(s); }
  std::string str() const { return s != nullptr ? s : ""; }
};

void Check(wt_status status) {
  if (status == WT_OK) return;
  std::cerr << "wfcteach: " << wt_status_name(status) << ": " << wt_last_error() << "\n";
  throw CliError{status == WT_E_ARGUMENT || status == WT_E_CONFIG ? kExitUsage : kExitData};
}

SessionPtr OpenSession(const std::string& dir) {
  wt_session* s = nullptr;
  Check(wt_session_open(dir.c_str(), &s));
  return SessionPtr(s);
}

struct RectArg {
  int x = 0, y = 0, w = 0, h = 0;
};

bool ParseRectArg(const std::string& text, RectArg& out) {
  char tail = 0;
  return std::sscanf(text.c_str(), "%d,%d,%d,%d%c", &out.x, &out.y, &out.w, &out.h, &tail) == 4 &&
         out.x >= 0 && out.y >= 0 && out.w > 0 && out.h > 0;
}

void OnBound(int port, void* user) {
  std::cout << "listening on http://" << static_cast<const char*>(user) << ":" << port << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Example-driven tile generation with a teaching loop"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wt_version()));
  std::string session_dir = ".";
  app.add_option("--session", session_dir, "Session directory")->capture_default_str();

  // session
  auto* session_cmd = app.add_subcommand("session", "Create and edit a session");
  session_cmd->require_subcommand(1);
  session_cmd->add_subcommand("init", "Create an empty session");
  std::string positive_file, negative_file;
  session_cmd->add_subcommand("add-positive", "Add a positive example image")
      ->add_option("file", positive_file, "PNG or text grid")
      ->required()
      ->check(CLI::ExistingFile);
  session_cmd->add_subcommand("add-negative", "Add a negative example image")
      ->add_option("file", negative_file, "PNG or text grid")
      ->required()
      ->check(CLI::ExistingFile);
  std::string crop_from, crop_rect;
  auto add_crop = [&](const char* name, const char* help) {
    auto* cmd = session_cmd->add_subcommand(name, help);
    cmd->add_option("--from", crop_from, "Work-sample id or image path")->required();
    cmd->add_option("--rect", crop_rect, "x,y,w,h")->required();
    return cmd;
  };
  add_crop("crop-negative", "Crop a negative example out of a work sample");
  add_crop("crop-positive", "Crop a positive example out of a work sample");
  std::string remove_id;
  session_cmd->add_subcommand("remove", "Remove an example")
      ->add_option("id", remove_id, "Example id")
      ->required();
  session_cmd->add_subcommand("show", "Print the session manifest");

  // train
  auto* train_cmd = app.add_subcommand("train", "Retrain the model from the examples");
  std::string strategy;
  int n = 0;
  std::string symmetry;
  bool no_wrap_input = false;
  bool train_json = false;
  train_cmd->add_option("--strategy", strategy, "Adjacency strategy")
      ->check(CLI::IsMember({"mgg", "lgg", "mgg-neg"}));
  train_cmd->add_option("--n", n, "Pattern size")->check(CLI::Range(1, 8));
  train_cmd->add_option("--symmetry", symmetry, "Augment examples")
      ->check(CLI::IsMember({"none", "rotations", "reflections", "all"}));
  train_cmd->add_flag("--no-wrap-input", no_wrap_input, "Do not wrap examples toroidally");
  train_cmd->add_flag("--json", train_json, "Print the report as JSON");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Generate a portfolio of work samples");
  wt_generate_options gen;
  wt_generate_options_default(&gen);
  bool no_wrap = false;
  bool gen_json = false;
  std::string out_dir;
  gen_cmd->add_option("--count", gen.count, "Number of samples")->check(CLI::Range(1, 10000));
  gen_cmd->add_option("--seed", gen.seed, "Portfolio seed");
  gen_cmd->add_option("--width", gen.width, "Output width in cells")->check(CLI::Range(1, 4096));
  gen_cmd->add_option("--height", gen.height, "Output height in cells")->check(CLI::Range(1, 4096));
  gen_cmd->add_option("--max-restarts", gen.max_restarts, "Restarts after a contradiction")
      ->check(CLI::Range(0, 100000));
  gen_cmd->add_flag("--no-wrap", no_wrap, "Bounded instead of toroidal output");
  gen_cmd->add_option("--out", out_dir, "Also copy sample images here");
  gen_cmd->add_flag("--json", gen_json, "Print the portfolio as JSON");

  // inspect
  auto* inspect_cmd = app.add_subcommand("inspect", "Inspect training runs");
  inspect_cmd->require_subcommand(1);
  std::string diff_a, diff_b;
  auto* diff_cmd = inspect_cmd->add_subcommand("diff", "Triple diff between two training runs");
  diff_cmd->add_option("--a", diff_a, "Iteration number or validity export path")->required();
  diff_cmd->add_option("--b", diff_b, "Iteration number or validity export path")->required();
  int validity_iteration = 0;
  inspect_cmd->add_subcommand("validity", "Print a validity export")
      ->add_option("--iteration", validity_iteration, "Training iteration (default: latest)");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve_cmd->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host, "Bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*session_cmd) {
      if (session_cmd->got_subcommand("init")) {
        wt_session* s = nullptr;
        Check(wt_session_init(session_dir.c_str(), &s));
        wt_session_close(s);
        std::cout << "initialized session in " << session_dir << "\n";
        return kExitOk;
      }
      const bool crop_neg = session_cmd->got_subcommand("crop-negative");
      const bool crop_pos = session_cmd->got_subcommand("crop-positive");
      RectArg rect;
      if ((crop_neg || crop_pos) && !ParseRectArg(crop_rect, rect)) {
        std::cerr << "wfcteach: --rect must be x,y,w,h with w, h > 0\n";
        return kExitUsage;
      }
      SessionPtr s = OpenSession(session_dir);
      OwnedString id;
      if (session_cmd->got_subcommand("add-positive")) {
        Check(wt_session_add_example_file(s.get(), positive_file.c_str(), WT_POSITIVE, &id.s));
      } else if (session_cmd->got_subcommand("add-negative")) {
        Check(wt_session_add_example_file(s.get(), negative_file.c_str(), WT_NEGATIVE, &id.s));
      } else if (crop_neg || crop_pos) {
        Check(wt_session_crop_example(s.get(), crop_from.c_str(), rect.x, rect.y, rect.w, rect.h,
                                      crop_neg ? WT_NEGATIVE : WT_POSITIVE, &id.s));
      } else if (session_cmd->got_subcommand("remove")) {
        Check(wt_session_remove_example(s.get(), remove_id.c_str()));
        std::cout << "removed " << remove_id << "\n";
        return kExitOk;
      } else {
        OwnedString manifest;
        Check(wt_session_describe(s.get(), &manifest.s));
        std::cout << manifest.str();
        return kExitOk;
      }
      std::cout << id.str() << "\n";
      return kExitOk;
    }

    if (*train_cmd) {
      SessionPtr s = OpenSession(session_dir);
      wt_train_options opts;
      Check(wt_session_pattern_options(s.get(), &opts));
      if (!strategy.empty()) {
        opts.strategy = strategy == "mgg"   ? WT_STRATEGY_MGG
                        : strategy == "lgg" ? WT_STRATEGY_LGG
                                            : WT_STRATEGY_MGG_MINUS_NEGATIVES;
      }
      if (n > 0) opts.n = n;
      if (!symmetry.empty()) {
        opts.symmetry = symmetry == "none"        ? 0
                        : symmetry == "rotations" ? WT_SYMMETRY_ROTATIONS
                        : symmetry == "reflections"
                            ? WT_SYMMETRY_REFLECTIONS
                            : WT_SYMMETRY_ROTATIONS | WT_SYMMETRY_REFLECTIONS;
      }
      if (no_wrap_input) opts.wrap_input = 0;
      wt_train_report r;
      Check(wt_session_train(s.get(), &opts, &r));
      if (train_json) {
        nlohmann::json j = {{"iteration", r.iteration}, {"patterns", r.patterns},
                            {"legal", r.legal},         {"observed", r.observed},
                            {"negative", r.negative},   {"valid", r.valid},
                            {"starved", r.starved},     {"digest", r.digest}};
        std::cout << j.dump(1) << "\n";
      } else {
        std::cout << "iteration " << r.iteration << "\n"
                  << "patterns " << r.patterns << "\n"
                  << "legal " << r.legal << "\n"
                  << "observed " << r.observed << "\n"
                  << "negative " << r.negative << "\n"
                  << "valid " << r.valid << "\n"
                  << "starved " << r.starved << "\n"
                  << "digest " << r.digest << "\n";
      }
      return kExitOk;
    }

    if (*gen_cmd) {
      gen.wrap = no_wrap ? 0 : 1;
      SessionPtr s = OpenSession(session_dir);
      if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) {
          std::cerr << "wfcteach: cannot create " << out_dir << "\n";
          return kExitData;
        }
      }
      wt_portfolio* raw = nullptr;
      Check(wt_session_generate(s.get(), &gen, &raw));
      std::unique_ptr<wt_portfolio, void (*)(wt_portfolio*)> portfolio(raw, wt_portfolio_free);
      bool any_failed = false;
      nlohmann::json j = nlohmann::json::array();
      for (size_t i = 0; i < wt_portfolio_size(portfolio.get()); ++i) {
        wt_sample_info info;
        Check(wt_portfolio_sample(portfolio.get(), i, &info));
        std::string path;
        if (info.solved) {
          OwnedString p;
          Check(wt_session_sample_path(s.get(), info.id, &p.s));
          path = p.str();
          if (!out_dir.empty()) {
            fs::path dst = fs::path(out_dir) / fs::path(path).filename();
            fs::copy_file(path, dst, fs::copy_options::overwrite_existing);
            path = dst.string();
          }
        } else {
          any_failed = true;
        }
        nlohmann::json sj = {{"id", info.id},
                             {"seed", info.seed},
                             {"status", info.solved ? "solved" : "contradiction"},
                             {"restarts", info.restarts},
                             {"observations", info.observations},
                             {"propagations", info.propagations},
                             {"wall_ms", info.wall_ms}};
        if (info.solved) sj["file"] = path;
        if (!info.solved && info.failing_x >= 0) sj["failing_cell"] = {info.failing_x, info.failing_y};
        if (gen_json) {
          j.push_back(sj);
          continue;
        }
        std::cout << info.id << " seed=" << info.seed << " "
                  << (info.solved ? "solved" : "contradiction") << " restarts=" << info.restarts
                  << " observations=" << info.observations
                  << " propagations=" << info.propagations;
        if (info.solved) {
          std::cout << " file=" << path;
        } else if (info.failing_x >= 0) {
          std::cout << " failing_cell=" << info.failing_x << "," << info.failing_y;
        }
        std::cout << "\n";
      }
      if (gen_json) std::cout << j.dump(1) << "\n";
      return any_failed ? kExitContradiction : kExitOk;
    }

    if (*inspect_cmd) {
      OwnedString text;
      if (inspect_cmd->got_subcommand("diff")) {
        if (fs::is_regular_file(diff_a) && fs::is_regular_file(diff_b)) {
          Check(wt_validity_diff_files(diff_a.c_str(), diff_b.c_str(), &text.s));
        } else {
          SessionPtr s = OpenSession(session_dir);
          Check(wt_session_diff(s.get(), diff_a.c_str(), diff_b.c_str(), &text.s));
        }
      } else {
        SessionPtr s = OpenSession(session_dir);
        int iteration = validity_iteration;
        if (iteration == 0) {
          OwnedString manifest;
          Check(wt_session_describe(s.get(), &manifest.s));
          iteration = nlohmann::json::parse(manifest.str()).value("iteration", 0);
        }
        Check(wt_session_validity_export(s.get(), iteration, &text.s));
      }
      std::cout << text.str();
      return kExitOk;
    }

    if (*serve_cmd) {
      Check(wt_serve(session_dir.c_str(), host.c_str(), port, OnBound,
                     const_cast<char*>(host.c_str())));
      return kExitOk;
    }
  } catch (const CliError& e) {
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "wfcteach: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
