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
#include <vector>

#include "config.hpp"
#include "rmcredit/rmcredit.h"

namespace rmcredit::cli {

/// A failed library call, carrying its status code.
class LibraryError : public std::runtime_error {
 public:
  LibraryError(rmc_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
  rmc_status status() const noexcept { return status_; }

 private:
  rmc_status status_;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

int exit_code(rmc_status status) noexcept;

/// Runs the subcommand and returns the names of the files written to the output directory.
std::vector<std::string> run_command(const RunConfig& config);

}  // namespace rmcredit::cli
