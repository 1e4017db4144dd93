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

#pragma once

#include <stdexcept>
#include <string>

namespace rmcredit {

/// Failure categories. The numeric values are shared with the C API status codes.
enum class ErrorCode : int {
  kArgument = 1,    // precondition violated by the caller
  kDomain = 2,      // value outside the mathematical domain (e.g. nonpositive price)
  kAlignment = 3,   // time grids of price series do not match
  kDegenerate = 4,  // zero-variance series, singular matrix, flat margin
  kNumeric = 5,     // decomposition or quadrature failure
  kParse = 6,       // malformed input text
  kIo = 7,          // file system failure
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::kArgument, what);
}

}  // namespace rmcredit
