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

// HTTP + JSON facade over directory sessions kept under one root. The
// endpoint schema lives in docs/openapi.yaml.
//
// Requests run concurrently; mutations of one session are serialized by a
// per-session lock, and mutations arriving while that session retrains are
// rejected with 409.

#ifndef WFCTEACH_SERVICE_HPP_
#define WFCTEACH_SERVICE_HPP_

#include <filesystem>
#include <memory>
#include <string>

namespace wfcteach {

class Service {
 public:
  explicit Service(std::filesystem::path root);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds without serving. Port 0 picks a free port. Returns the bound port,
  // or -1 on failure.
  int Bind(const std::string& host, int port);
  // Serves until Stop(). Requires a successful Bind().
  bool Run();
  void Stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wfcteach

#endif  // WFCTEACH_SERVICE_HPP_
