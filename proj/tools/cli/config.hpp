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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zitter/model.hpp"

namespace zitter::cli {

/// Packet parameters plus the time grid and evaluation settings of one run.
struct RunConfig {
  PacketConfig packet{};
  double t0 = 0.0;
  double t1 = 40.0;
  int steps = 401;
  Method method = Method::quadrature;
  double rel_tol = 1e-8;

  void validate() const;
};

/// `key = value` lines with `#` comments. Keys not present keep their value in
/// `base`; without a base, d_nm, alpha_inv_nm, beta_inv_nm, a and
/// inv_lambda_c_inv_nm are required. Throws InvalidConfig.
RunConfig parse_run_config(std::string_view text, const std::optional<RunConfig>& base = std::nullopt);

RunConfig load_run_config(const std::filesystem::path& path, const std::optional<RunConfig>& base = std::nullopt);

/// fig1a..fig3c; throws InvalidConfig for an unknown name.
RunConfig preset_config(std::string_view name);

std::vector<std::string> preset_names();

/// steps equally spaced times from t0 to t1 inclusive.
std::vector<double> time_grid(const RunConfig& cfg);

}  // namespace zitter::cli
