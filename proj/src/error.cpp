// Copyright 2026 The rmcredit Authors.
//
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

#include "rmcredit/error.hpp"

namespace rmcredit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kArgument: return "argument";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kAlignment: return "alignment";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace rmcredit
