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

// Gaussian-weighted 2D quadrature for the packet integrals, a brute-force grid
// oracle, and a half-line rule for the Bessel closed forms.
//
// The 2D rule works in polar coordinates about k = 0. Kernel phases depend only
// on |k|, so oscillation lives on the radial axis alone: radial panels are
// composite Gauss-Legendre, refined until the phase changes by at most pi/4 per
// panel; the angular rule is the periodic trapezoid, sized by the concentration
// of the Gaussian on each circle.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "zitter/model.hpp"

namespace zitter {

struct QuadSettings {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_level = 12;
  double truncation_radius = 8.0;  // in units of 1/d
  int threads = 1;
  int min_panels = 32;
  int min_angular = 16;
  std::int64_t max_evaluations = 400'000'000;
};

struct QuadResult {
  double value = 0.0;
  double est_error = 0.0;
  std::int64_t evaluations = 0;
  bool converged = false;
  int levels = 0;
  std::vector<double> error_history;
};

/// Several integrals sharing one node set.
struct MultiQuadResult {
  std::vector<double> value;
  std::vector<double> est_error;
  std::int64_t evaluations = 0;
  bool converged = false;
  int levels = 0;
  std::vector<double> error_history;  // max component error per level
};

/// Writes one value per component for the wavevector given.
using PacketIntegrand = std::function<void(Wavevector, std::span<double>)>;
using ScalarIntegrand = std::function<double(Wavevector)>;

/// (d^2/pi) Int d^2k exp[-d^2 |k - (alpha, beta)|^2] f(k), one entry per component.
/// `phase_rate` is the factor multiplying sqrt(k^2 + inv_lambda_c^2) in the
/// integrand's phase (v_f t for the time kernels, 0 for static integrands).
/// Throws InvalidKernel on a non-finite integrand value.
MultiQuadResult integrate_packet_weighted(const PacketIntegrand& f, std::size_t components, const PacketConfig& cfg,
                                          const QuadSettings& settings = {}, double phase_rate = 0.0);

QuadResult integrate_packet_weighted(const ScalarIntegrand& f, const PacketConfig& cfg,
                                     const QuadSettings& settings = {}, double phase_rate = 0.0);

/// Midpoint sum over [alpha +- radius/d] x [beta +- radius/d]; grid_n >= 64.
double oracle_riemann(const ScalarIntegrand& f, const PacketConfig& cfg, int grid_n, double radius = 8.0);

/// Int_0^inf g(q) dq on [0, peak + truncation_radius] by composite Gauss-Legendre.
/// Result is flagged unconverged if g at the cut exceeds 1e-16 of its largest sample.
QuadResult integrate_halfline(const std::function<double(double)>& g, const QuadSettings& settings = {},
                              double peak = 0.0, double phase_rate = 0.0);

}  // namespace zitter
