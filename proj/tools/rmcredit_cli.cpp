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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "json_output.hpp"
#include "rmcredit/rmcredit.h"

namespace {

using namespace rmcredit::cli;

constexpr const char* kToolVersion = "1.0.0";

struct Failure {
  int exit_code = kExitUsage;
  std::string kind;
  std::string message;
  Json detail = Json::object();
};

int report(const Failure& f) {
  Json error = {{"exit_code", f.exit_code}, {"kind", f.kind}, {"message", f.message}};
  for (auto it = f.detail.begin(); it != f.detail.end(); ++it) error[it.key()] = it.value();
  std::cerr << dump_json(Json{{"error", error}});
  return f.exit_code;
}

std::map<std::string, std::string> read_manifest(const std::filesystem::path& path, const std::string& subcommand) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot read manifest " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("manifest", "malformed manifest " + path.string() + ": " + e.what());
  }
  if (!doc.contains("subcommand") || !doc.contains("config") || !doc["config"].is_object())
    throw UsageError("manifest", "manifest " + path.string() + " lacks subcommand or config");
  if (doc["subcommand"] != subcommand)
    throw UsageError("manifest", "manifest " + path.string() + " was written by '" +
                                     doc["subcommand"].get<std::string>() + "', not '" + subcommand + "'");
  std::map<std::string, std::string> values;
  for (auto it = doc["config"].begin(); it != doc["config"].end(); ++it) {
    if (!it.value().is_string()) throw UsageError(it.key(), "manifest value for '" + it.key() + "' is not a string");
    values[it.key()] = it.value().get<std::string>();
  }
  return values;
}

void write_manifest(const RunConfig& config, const std::vector<std::string>& outputs, double seconds) {
  Json values = Json::object();
  Json sources = Json::object();
  for (const auto& [key, value] : config.values) {
    values[key] = value;
    sources[key] = to_string(config.sources.at(key));
  }
  Json manifest = {{"tool", "rmcredit"},
                   {"tool_version", kToolVersion},
                   {"library_version", rmc_version()},
                   {"subcommand", config.subcommand},
                   {"seed", config.has("seed") ? Json(config.seed()) : Json(nullptr)},
                   {"config", values},
                   {"sources", sources},
                   {"config_file", config.config_file ? Json(config.config_file->string()) : Json(nullptr)},
                   {"outputs", outputs},
                   {"wall_time_seconds", seconds}};
  const auto path = config.output_dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  out << dump_json(manifest);
  out.close();
  if (!out) throw IoError(path.string(), "cannot write " + path.string());
}

struct SubcommandOptions {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_file;
  std::string manifest;
  std::string output_dir = ".";
};

std::string flag_names(const std::string& key) {
  std::string dashed = key;
  for (auto& ch : dashed)
    if (ch == '_') ch = '-';
  return dashed == key ? "--" + key : "--" + key + ",--" + dashed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Credit risk under fluctuating asset correlations", "rmcredit"};
  app.set_version_flag("--version", std::string(kToolVersion) + " (library " + rmc_version() + ")");
  app.require_subcommand(1);

  std::map<std::string, SubcommandOptions> subs;
  for (const auto& schema : schemas()) {
    SubcommandOptions& s = subs[schema.name];
    s.app = app.add_subcommand(schema.name, schema.summary);
    for (const auto& key : schema.keys) {
      std::string help = key.help;
      if (!key.fallback.empty()) help += " (default " + key.fallback + ")";
      if (key.required) help += " (required)";
      s.options[key.name] = s.app->add_option(flag_names(key.name), s.values[key.name], help);
    }
    s.app->add_option("--config", s.config_file, "flat key=value configuration file");
    s.app->add_option("--manifest", s.manifest, "re-run the configuration recorded in a manifest");
    s.app->add_option("--out", s.output_dir, "output directory (default .)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report({kExitUsage, "usage", e.what(), {{"hint", "run with --help for usage"}}});
  }

  const std::string name = app.get_subcommands().front()->get_name();
  SubcommandOptions& s = subs.at(name);
  const auto started = std::chrono::steady_clock::now();
  try {
    std::map<std::string, std::string> flags;
    for (const auto& [key, option] : s.options)
      if (option->count() > 0) flags[key] = s.values[key];
    if (!s.config_file.empty() && !s.manifest.empty())
      throw UsageError("config", "--config and --manifest are mutually exclusive");
    std::map<std::string, std::string> file_values;
    std::optional<std::filesystem::path> source;
    if (!s.config_file.empty()) {
      source = s.config_file;
      file_values = read_config_file(s.config_file);
    } else if (!s.manifest.empty()) {
      source = s.manifest;
      file_values = read_manifest(s.manifest, name);
    }
    RunConfig config = parse_config(name, flags, file_values);
    config.config_file = source;
    config.output_dir = s.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec || !std::filesystem::is_directory(config.output_dir))
      throw IoError(config.output_dir.string(), "cannot create output directory " + config.output_dir.string());

    const auto outputs = run_command(config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_manifest(config, outputs, seconds);
    return kExitOk;
  } catch (const UsageError& e) {
    return report({kExitUsage, "usage", e.what(), {{"key", e.key()}}});
  } catch (const IoError& e) {
    return report({kExitIo, "io", e.what(), {{"path", e.path()}}});
  } catch (const LibraryError& e) {
    const int code = exit_code(e.status());
    const char* kind = code == kExitUsage ? "usage" : code == kExitIo ? "io" : "numeric";
    return report({code, kind, e.what(), {{"category", rmc_status_name(e.status())}}});
  } catch (const std::exception& e) {
    return report({kExitNumeric, "numeric", e.what(), {{"category", "internal"}}});
  }
}
