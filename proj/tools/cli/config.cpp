// Copyright 2026 The zitter Authors
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

#include "cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "zitter/errors.hpp"

namespace zitter::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw InvalidConfig("config key '" + std::string(key) + "': not a number: '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw InvalidConfig("config key '" + std::string(key) + "': not an integer: '" + std::string(text) + "'");
  }
  return v;
}

struct Preset {
  const char* name;
  double alpha;
  double beta;
  double inv_lambda_c;
};

// All presets share a = 0.9, d = 8 nm; fig2c takes the 0.08 gap.
constexpr Preset kPresets[] = {
    {"fig1a", 0.04, 1.2, 6.0},  {"fig1b", 0.04, 1.2, 2.0}, {"fig1c", 0.04, 1.2, 0.14},
    {"fig2a", 1.2, 0.04, 8.0},  {"fig2b", 1.2, 0.04, 2.0}, {"fig2c", 1.2, 0.04, 0.08},
    {"fig3a", 0.04, 1.2, 0.09}, {"fig3b", 0.04, 1.2, 0.14}, {"fig3c", 0.04, 1.2, 0.5},
};

}  // namespace

void RunConfig::validate() const {
  packet.validate();
  if (!(t0 >= 0.0) || !(t1 > t0) || !std::isfinite(t1)) throw InvalidConfig("time grid needs 0 <= t0 < t1");
  if (steps < 2) throw InvalidConfig("time grid needs steps >= 2");
  if (!(rel_tol > 0.0)) throw InvalidConfig("rel_tol must be positive");
}

RunConfig parse_run_config(std::string_view text, const std::optional<RunConfig>& base) {
  std::map<std::string, std::string, std::less<>> entries;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidConfig("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty() || value.empty()) {
      throw InvalidConfig("config line " + std::to_string(line_no) + ": empty key or value");
    }
    if (!entries.emplace(key, value).second) throw InvalidConfig("config key '" + key + "' given twice");
  }

  static const char* const kRequired[] = {"d_nm", "alpha_inv_nm", "beta_inv_nm", "a", "inv_lambda_c_inv_nm"};
  if (!base) {
    for (const char* key : kRequired) {
      if (!entries.count(key)) throw InvalidConfig(std::string("config is missing required key '") + key + "'");
    }
  }

  RunConfig cfg = base.value_or(RunConfig{});
  bool b_given = false;
  for (const auto& [key, value] : entries) {
    if (key == "d_nm") {
      cfg.packet.d = parse_double(key, value);
    } else if (key == "alpha_inv_nm") {
      cfg.packet.alpha = parse_double(key, value);
    } else if (key == "beta_inv_nm") {
      cfg.packet.beta = parse_double(key, value);
    } else if (key == "a") {
      cfg.packet.a = parse_double(key, value);
    } else if (key == "b") {
      cfg.packet.b = parse_double(key, value);
      b_given = true;
    } else if (key == "inv_lambda_c_inv_nm") {
      cfg.packet.inv_lambda_c = parse_double(key, value);
    } else if (key == "v_f_nm_per_fs") {
      cfg.packet.v_f = parse_double(key, value);
    } else if (key == "t0_fs") {
      cfg.t0 = parse_double(key, value);
    } else if (key == "t1_fs") {
      cfg.t1 = parse_double(key, value);
    } else if (key == "steps") {
      cfg.steps = parse_int(key, value);
    } else if (key == "method") {
      const auto m = parse_method(value);
      if (!m) throw InvalidConfig("config key 'method': expected quadrature, series or both");
      cfg.method = *m;
    } else if (key == "rel_tol") {
      cfg.rel_tol = parse_double(key, value);
    } else {
      throw InvalidConfig("unknown config key '" + key + "'");
    }
  }
  if (!b_given && entries.count("a")) {
    if (std::fabs(cfg.packet.a) > 1.0) throw InvalidConfig("spinor amplitude |a| must not exceed 1");
    cfg.packet.b = std::sqrt(1.0 - cfg.packet.a * cfg.packet.a);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::optional<RunConfig>& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidConfig("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), base);
}

RunConfig preset_config(std::string_view name) {
  for (const Preset& p : kPresets) {
    if (name == p.name) {
      RunConfig cfg;
      cfg.packet = PacketConfig::make(8.0, p.alpha, p.beta, 0.9, std::nullopt, p.inv_lambda_c);
      return cfg;
    }
  }
  throw InvalidConfig("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const Preset& p : kPresets) names.emplace_back(p.name);
  return names;
}

std::vector<double> time_grid(const RunConfig& cfg) {
  std::vector<double> ts(cfg.steps);
  const double h = (cfg.t1 - cfg.t0) / (cfg.steps - 1);
  for (int i = 0; i < cfg.steps; ++i) ts[i] = cfg.t0 + i * h;
  ts.back() = cfg.t1;
  return ts;
}

}  // namespace zitter::cli
