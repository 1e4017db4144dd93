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

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rmcredit::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool is_inf(const std::string& s) { return s == "inf" || s == "infinity" || s == "Inf"; }

std::optional<double> to_real(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_count(const std::string& s) {
  std::uint64_t v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

std::string describe_range(const KeySpec& k) {
  std::ostringstream out;
  out << (k.open_min ? "(" : "[") << k.min << ", " << k.max << (k.open_max ? ")" : "]");
  return out.str();
}

void check_range(const KeySpec& k, double v) {
  const bool low = k.open_min ? v <= k.min : v < k.min;
  const bool high = k.open_max ? v >= k.max : v > k.max;
  if (low || high) throw UsageError(k.name, "value for '" + k.name + "' out of range " + describe_range(k));
}

KeySpec real(std::string name, std::string fallback, double min, double max, std::string help) {
  KeySpec k;
  k.name = std::move(name);
  k.kind = ValueKind::kReal;
  k.fallback = std::move(fallback);
  k.min = min;
  k.max = max;
  k.help = std::move(help);
  return k;
}

KeySpec positive(std::string name, std::string fallback, std::string help) {
  KeySpec k = real(std::move(name), std::move(fallback), 0.0, 1e300, std::move(help));
  k.open_min = true;
  return k;
}

KeySpec count(std::string name, std::string fallback, double min, double max, std::string help) {
  KeySpec k = real(std::move(name), std::move(fallback), min, max, std::move(help));
  k.kind = ValueKind::kCount;
  return k;
}

KeySpec choice(std::string name, std::string fallback, std::vector<std::string> choices, std::string help) {
  KeySpec k;
  k.name = std::move(name);
  k.kind = ValueKind::kChoice;
  k.fallback = std::move(fallback);
  k.choices = std::move(choices);
  k.help = std::move(help);
  return k;
}

KeySpec path(std::string name, std::string help) {
  KeySpec k;
  k.name = std::move(name);
  k.kind = ValueKind::kPath;
  k.required = true;
  k.help = std::move(help);
  return k;
}

KeySpec seed() {
  KeySpec k;
  k.name = "seed";
  k.kind = ValueKind::kSeed;
  k.required = true;
  k.help = "master seed of all random streams";
  return k;
}

KeySpec correlation(std::string fallback) {
  KeySpec k = real("c", std::move(fallback), 0.0, 1.0, "average asset correlation");
  k.open_max = true;
  return k;
}

KeySpec fluctuation(std::string fallback) {
  KeySpec k = positive("n", std::move(fallback), "fluctuation strength of the correlations, or inf");
  k.kind = ValueKind::kRealOrInf;
  return k;
}

KeySpec alphas() {
  KeySpec k = real("alphas", "0.95,0.99,0.999", 0.0, 1.0, "comma-separated confidence levels");
  k.kind = ValueKind::kRealList;
  k.open_min = k.open_max = true;
  return k;
}

std::vector<KeySpec> contract_keys() {
  return {real("mu", "0.17", -1e3, 1e3, "asset drift per unit time"),
          positive("rho", "0.35", "asset volatility per square root of unit time"),
          positive("face", "75", "face value of each credit contract"),
          positive("initial", "100", "initial asset value"),
          positive("maturity", "1", "maturity in units of time")};
}

std::vector<SubcommandSchema> build_schemas() {
  std::vector<SubcommandSchema> out;

  SubcommandSchema estimate{"estimate", "estimate drifts, volatilities and correlations from prices", false, {}};
  estimate.keys = {path("input", "price CSV with header date,asset_id,close"),
                   count("delta_t", "1", 1, 1e6, "return horizon in observation steps"),
                   positive("maturity", "1", "horizon used to express volatility per square root of time"),
                   count("window", "0", 0, 1e9, "sliding correlation window length, 0 disables"),
                   count("stride", "0", 0, 1e9, "window stride, 0 for non-overlapping windows")};
  out.push_back(estimate);

  SubcommandSchema fit{"fit-n", "fit the fluctuation strength to aggregated returns", false, {}};
  fit.keys = {path("input", "price CSV with header date,asset_id,close"),
              count("delta_t", "1", 1, 1e6, "return horizon in observation steps"),
              count("window", "0", 0, 1e9, "local covariance window, 0 for one covariance of the whole sample"),
              positive("n_min", "1", "lower end of the search interval"),
              positive("n_max", "64", "upper end of the search interval"),
              positive("resolution", "0.1", "resolution of the fitted value"),
              count("density_points", "241", 2, 1e6, "points of the exported fitted density"),
              positive("density_range", "6", "half width of the exported density range")};
  out.push_back(fit);

  SubcommandSchema loss{"loss-dist", "averaged portfolio loss density and risk measures", false, {}};
  KeySpec k = count("k", "100", 1, 1e9, "portfolio size, or inf for the limiting density");
  k.kind = ValueKind::kCountOrInf;
  loss.keys = {correlation("0.28"), fluctuation("6"), k};
  for (auto& key : contract_keys()) loss.keys.push_back(key);
  KeySpec smallest = real("grid_smallest", "1e-6", 0.0, 1.0, "smallest positive point of the log grid");
  smallest.open_min = smallest.open_max = true;
  loss.keys.push_back(choice("grid", "uniform", {"uniform", "log"}, "loss grid spacing"));
  loss.keys.push_back(count("grid_points", "512", 2, 1e7, "number of loss grid points"));
  loss.keys.push_back(smallest);
  loss.keys.push_back(alphas());
  out.push_back(loss);

  SubcommandSchema var{"var", "Monte Carlo value at risk and expected tail loss", true, {}};
  var.keys = {count("k", "100", 1, 1e9, "portfolio size"), correlation("0.28"), fluctuation("6")};
  for (auto& key : contract_keys()) var.keys.push_back(key);
  var.keys.push_back(count("trials", "100000", 2, 1e9, "number of simulated scenarios"));
  var.keys.push_back(seed());
  var.keys.push_back(choice("drift", "ito", {"ito", "log_return"}, "meaning of mu"));
  var.keys.push_back(count("workers", "0", 0, 4096, "worker threads, 0 for all cores"));
  var.keys.push_back(alphas());
  KeySpec dump;
  dump.name = "dump_losses";
  dump.kind = ValueKind::kBool;
  dump.fallback = "false";
  dump.help = "also write every simulated loss";
  var.keys.push_back(dump);
  out.push_back(var);

  SubcommandSchema copula{"copula", "two-portfolio loss copula scenario", true, {}};
  KeySpec scenario = choice("scenario", "", {"c0-gaussian", "c0-mixture", "drift-high", "drift-mid", "drift-neg",
                                             "hetero-vol", "two-market"},
                            "scenario name");
  scenario.required = true;
  copula.keys = {scenario,
                 seed(),
                 count("trials", "0", 0, 1e9, "trials per repetition, 0 for the scenario default"),
                 count("repetitions", "0", 0, 1e7, "repetitions, 0 for the scenario default"),
                 count("portfolio_size", "50", 1, 1e6, "contracts per portfolio"),
                 count("bins", "20", 1, 1000, "histogram bins per axis"),
                 choice("ties", "jitter", {"jitter", "midrank"}, "treatment of tied losses"),
                 count("workers", "0", 0, 4096, "worker threads, 0 for all cores")};
  out.push_back(copula);

  SubcommandSchema synth{"synth", "synthetic price series", true, {}};
  synth.keys = {count("assets", "10", 1, 1e6, "number of assets"),
                count("observations", "1000", 2, 1e9, "prices per asset"),
                correlation("0.3"),
                positive("vol", "0.02", "volatility per square root of step"),
                real("mu", "0.0005", -1.0, 1.0, "drift per step"),
                fluctuation("inf"),
                count("regime_length", "25", 1, 1e9, "steps between correlation redraws"),
                seed()};
  out.push_back(synth);
  return out;
}

}  // namespace

const KeySpec* SubcommandSchema::find(const std::string& key) const {
  for (const auto& k : keys)
    if (k.name == key) return &k;
  return nullptr;
}

const std::vector<SubcommandSchema>& schemas() {
  static const std::vector<SubcommandSchema> all = build_schemas();
  return all;
}

const SubcommandSchema& schema(const std::string& subcommand) {
  for (const auto& s : schemas())
    if (s.name == subcommand) return s;
  throw UsageError("", "unknown subcommand '" + subcommand + "'");
}

const char* to_string(Source source) noexcept {
  switch (source) {
    case Source::kDefault: return "default";
    case Source::kFile: return "file";
    case Source::kFlag: return "flag";
  }
  return "default";
}

std::string validate_value(const KeySpec& k, const std::string& raw) {
  const std::string value = trim(raw);
  const auto bad = [&](const std::string& expected) {
    return UsageError(k.name, "invalid value '" + value + "' for '" + k.name + "': expected " + expected);
  };
  switch (k.kind) {
    case ValueKind::kRealOrInf:
      if (is_inf(value)) return "inf";
      [[fallthrough]];
    case ValueKind::kReal: {
      const auto v = to_real(value);
      if (!v) throw bad("a number");
      check_range(k, *v);
      return value;
    }
    case ValueKind::kCountOrInf:
      if (is_inf(value)) return "inf";
      [[fallthrough]];
    case ValueKind::kCount: {
      const auto v = to_count(value);
      if (!v) throw bad("a non-negative integer");
      check_range(k, static_cast<double>(*v));
      return value;
    }
    case ValueKind::kSeed:
      if (!to_count(value)) throw bad("an unsigned 64-bit integer");
      return value;
    case ValueKind::kChoice:
      if (std::find(k.choices.begin(), k.choices.end(), value) == k.choices.end()) {
        std::string list;
        for (const auto& c : k.choices) list += (list.empty() ? "" : ", ") + c;
        throw bad("one of " + list);
      }
      return value;
    case ValueKind::kRealList: {
      const auto parts = split(value, ',');
      if (parts.empty()) throw bad("a comma-separated list of numbers");
      std::string joined;
      for (const auto& p : parts) {
        const auto v = to_real(p);
        if (!v) throw bad("a comma-separated list of numbers");
        check_range(k, *v);
        joined += (joined.empty() ? "" : ",") + p;
      }
      return joined;
    }
    case ValueKind::kBool:
      if (value == "true" || value == "1" || value == "yes") return "true";
      if (value == "false" || value == "0" || value == "no") return "false";
      throw bad("true or false");
    case ValueKind::kPath:
      if (value.empty()) throw bad("a path");
      return value;
  }
  return value;
}

std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(number);
    if (eq == std::string::npos) throw UsageError("", where + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError("", where + ": empty key");
    if (out.count(key)) throw UsageError(key, where + ": duplicate key '" + key + "'");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.string());
}

RunConfig parse_config(const std::string& subcommand, const std::map<std::string, std::string>& flags,
                       const std::map<std::string, std::string>& file_values) {
  const SubcommandSchema& s = schema(subcommand);
  const auto check_known = [&](const std::map<std::string, std::string>& layer, const char* where) {
    for (const auto& [key, value] : layer)
      if (!s.find(key)) throw UsageError(key, std::string("unknown key '") + key + "' in " + where + " for " + subcommand);
  };
  check_known(file_values, "config file");
  check_known(flags, "flags");

  RunConfig config;
  config.subcommand = subcommand;
  for (const KeySpec& k : s.keys) {
    std::string value;
    Source source = Source::kDefault;
    if (auto it = flags.find(k.name); it != flags.end()) {
      value = it->second;
      source = Source::kFlag;
    } else if (auto jt = file_values.find(k.name); jt != file_values.end()) {
      value = jt->second;
      source = Source::kFile;
    } else if (!k.fallback.empty()) {
      value = k.fallback;
    } else {
      if (k.required) throw UsageError(k.name, "missing required key '" + k.name + "' for " + subcommand);
      continue;
    }
    config.values[k.name] = validate_value(k, value);
    config.sources[k.name] = source;
  }
  return config;
}

const std::string& RunConfig::text(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw UsageError(key, "key '" + key + "' is not set");
  return it->second;
}

double RunConfig::real(const std::string& key) const {
  const std::string& v = text(key);
  if (is_inf(v)) return std::numeric_limits<double>::infinity();
  const auto r = to_real(v);
  if (!r) throw UsageError(key, "key '" + key + "' is not a number");
  return *r;
}

std::uint64_t RunConfig::count(const std::string& key) const {
  const auto r = to_count(text(key));
  if (!r) throw UsageError(key, "key '" + key + "' is not an integer");
  return *r;
}

bool RunConfig::flag(const std::string& key) const { return text(key) == "true"; }

std::vector<double> RunConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& p : split(text(key), ',')) out.push_back(*to_real(p));
  return out;
}

}  // namespace rmcredit::cli
