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

// Hermite-series representations of the packet expectation values: a second,
// quadrature-free route that expands in powers of 2 inv_lambda_c v_f t.

#include "zitter/model.hpp"

namespace zitter {

struct SeriesResult {
  double value = 0.0;
  int terms_used = 0;  // outer shells summed
  bool converged = false;
  double last_term_magnitude = 0.0;
  double max_term_magnitude = 0.0;  // largest single term, after the observable's multiplier
  double est_error = 0.0;
};

inline constexpr double kSeriesTolerance = 1e-14;
inline constexpr int kSeriesMaxShells = 150;

/// Throws GapRequired when cfg.inv_lambda_c == 0. Shell counts above 198 exceed
/// the Hermite table limit and throw IndexOverflow. Terms beyond the double range
/// give converged = false with a NaN value.
SeriesResult series_expectation(Observable obs, double t, const PacketConfig& cfg, double tol = kSeriesTolerance,
                                int n_max = kSeriesMaxShells);

SeriesResult series_x(double t, const PacketConfig& cfg, double tol = kSeriesTolerance, int n_max = kSeriesMaxShells);
SeriesResult series_y(double t, const PacketConfig& cfg, double tol = kSeriesTolerance, int n_max = kSeriesMaxShells);
SeriesResult series_x2(double t, const PacketConfig& cfg, double tol = kSeriesTolerance, int n_max = kSeriesMaxShells);
SeriesResult series_y2(double t, const PacketConfig& cfg, double tol = kSeriesTolerance, int n_max = kSeriesMaxShells);
SeriesResult series_vx(double t, const PacketConfig& cfg, double tol = kSeriesTolerance, int n_max = kSeriesMaxShells);
SeriesResult series_vy(double t, const PacketConfig& cfg, double tol = kSeriesTolerance, int n_max = kSeriesMaxShells);

}  // namespace zitter
