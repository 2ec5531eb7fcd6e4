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

#ifndef WFCTEACH_ERROR_HPP_
#define WFCTEACH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace wfcteach {

// Error categories. The C API maps each one onto a wt_status value, so the
// order here is part of nothing; add freely.
enum class ErrorCode {
  kFormat,       // malformed PNG / text / JSON input
  kUnknownTile,  // color or symbol absent from a sealed palette
  kRender,       // palette entry cannot be rendered to the requested format
  kConfig,       // invalid pattern / solver configuration
  kBounds,       // coordinate or rectangle outside a grid
  kCatalog,      // pattern id not present in a catalog
  kSize,         // example too small for its label
  kTraining,     // training preconditions not met
  kStale,        // trained model out of date, retrain required
  kNotFound,     // unknown session, example or sample id
  kConflict,     // concurrent mutation rejected
  kIo,           // filesystem failure
  kInternal,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wfcteach

#endif  // WFCTEACH_ERROR_HPP_
