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

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cli/csv.hpp"

namespace zitter::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Worker count from ZB_THREADS: unset or 0 means hardware concurrency.
int worker_count();

/// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Table builders behind the subcommands. `strict` turns unconverged points into NonConvergence.
CsvTable observe_table(const RunConfig& cfg, Observable obs, bool strict, int workers);
CsvTable uncertainty_table(const RunConfig& cfg, Pair pair, bool strict, int workers);
CsvTable weights_table(const RunConfig& cfg);

}  // namespace zitter::cli
