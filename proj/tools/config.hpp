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

// Run configuration for the command-line tool: a typed key schema per
// subcommand, flat key=value config files, and resolution with the
// precedence flag > file > default.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmcredit::cli {

/// Invalid invocation or configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string key, const std::string& what) : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Unreadable or unwritable file; maps to exit code 4.
class IoError : public std::runtime_error {
 public:
  IoError(std::string path, const std::string& what) : std::runtime_error(what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

enum class ValueKind {
  kReal,       // finite double within [min, max]
  kRealOrInf,  // as kReal, or "inf"
  kCount,      // non-negative integer within [min, max]
  kCountOrInf,
  kSeed,  // unsigned 64-bit integer
  kChoice,
  kRealList,  // comma-separated reals within [min, max]
  kBool,
  kPath,
};

struct KeySpec {
  std::string name;
  ValueKind kind = ValueKind::kReal;
  std::string fallback;  // default text; empty with required = false means unset
  bool required = false;
  double min = -1e300;
  double max = 1e300;
  bool open_min = false;  // value must be strictly above min
  bool open_max = false;  // value must be strictly below max
  std::vector<std::string> choices;
  std::string help;
};

struct SubcommandSchema {
  std::string name;
  std::string summary;
  bool stochastic = false;
  std::vector<KeySpec> keys;

  const KeySpec* find(const std::string& key) const;
};

const std::vector<SubcommandSchema>& schemas();
const SubcommandSchema& schema(const std::string& subcommand);

enum class Source { kDefault, kFile, kFlag };
const char* to_string(Source source) noexcept;

class RunConfig {
 public:
  std::string subcommand;
  std::filesystem::path output_dir = ".";
  std::optional<std::filesystem::path> config_file;
  std::map<std::string, std::string> values;  // resolved text of every set key
  std::map<std::string, Source> sources;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  const std::string& text(const std::string& key) const;
  double real(const std::string& key) const;  // also accepts "inf"
  std::uint64_t count(const std::string& key) const;
  std::uint64_t seed() const { return count("seed"); }
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
};

/// Reads a flat key=value file. Blank lines and text after '#' are ignored.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);
std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin);

/// Merges defaults, file values and flags, then validates every key.
RunConfig parse_config(const std::string& subcommand, const std::map<std::string, std::string>& flags,
                       const std::map<std::string, std::string>& file_values = {});

/// Checks one value against its key's type and range; returns a trimmed copy.
std::string validate_value(const KeySpec& spec, const std::string& value);

}  // namespace rmcredit::cli
