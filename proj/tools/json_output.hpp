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

#include <string>

#include "json.hpp"

namespace rmcredit::cli {

using Json = nlohmann::ordered_json;

/// Decimal text with 17 significant digits; "inf", "-inf" or "nan" otherwise.
std::string format_number(double value);

/// Pretty-printed JSON with every floating-point value written by format_number.
/// Non-finite values become strings.
std::string dump_json(const Json& value);

}  // namespace rmcredit::cli
