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

// Packet/material parameters and the analytic integrands of every expectation value.
//
// Units: lengths in nm, wavevectors in 1/nm, times in fs, velocities in nm/fs.
// hbar is absorbed: momenta are reported as wavevectors (hbar/nm), products of
// position and momentum uncertainty in units of hbar.

#include <optional>
#include <string_view>

namespace zitter {

struct Wavevector {
  double kx = 0.0;
  double ky = 0.0;
};

/// Gaussian packet  exp[-d^2 |k - (alpha,beta)|^2 / 2] (a, b)^T  in a gapped Dirac cone.
struct PacketConfig {
  double d = 8.0;             // packet width, nm
  double alpha = 0.0;         // center wavevector x, 1/nm
  double beta = 0.0;          // center wavevector y, 1/nm
  double a = 1.0;             // upper spinor amplitude
  double b = 0.0;             // lower spinor amplitude
  double inv_lambda_c = 0.0;  // M v_F / hbar, 1/nm; 0 is the gapless cone
  double v_f = 1.0;           // Fermi velocity, nm/fs

  /// Builds and validates a config. When `b` is omitted it is +sqrt(1 - a^2).
  static PacketConfig make(double d, double alpha, double beta, double a, std::optional<double> b,
                           double inv_lambda_c, double v_f = 1.0);

  /// Throws InvalidConfig unless a^2+b^2 = 1 (1e-12), d > 0, v_f > 0, inv_lambda_c >= 0.
  void validate() const;

  PacketConfig with_gap(double new_inv_lambda_c) const;

  double spinor_z() const noexcept { return a * a - b * b; }
  double spinor_x() const noexcept { return 2.0 * a * b; }
  double center_norm() const noexcept;
  bool gapless() const noexcept { return inv_lambda_c == 0.0; }
};

/// Integrand value split into its secular (spreading) and trembling (zb) parts.
struct SplitKernel {
  double spreading = 0.0;
  double zb = 0.0;

  double total() const noexcept { return spreading + zb; }
};

enum class Observable { X, Y, X2, Y2, VX, VY };

enum class Method { quadrature, series, both };

/// Uncertainty products: x with p_x, y with p_y, x with v_x, y with v_y.
enum class Pair { XP, YP, XV, YV };

std::string_view to_string(Observable obs) noexcept;
std::string_view to_string(Method method) noexcept;
std::string_view to_string(Pair pair) noexcept;
std::optional<Observable> parse_observable(std::string_view text) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;
std::optional<Pair> parse_pair(std::string_view text) noexcept;

struct ExpectationResult {
  double value = 0.0;
  double spreading_part = 0.0;
  double zb_part = 0.0;
  double est_error = 0.0;
  Method method = Method::quadrature;
  bool converged = true;
};

/// theta = v_f t sqrt(|k|^2 + inv_lambda_c^2).
double phase(Wavevector k, double t, const PacketConfig& cfg) noexcept;

/// exp[-d^2 (kx-alpha)^2 - d^2 (ky-beta)^2]; the d^2/pi normalization belongs to the integrator.
double gaussian_weight(Wavevector k, const PacketConfig& cfg) noexcept;

// Position kernels, nm. In the gapless case the 1/k^2 factors make k = 0 a
// direction-dependent limit; the kernels return zero there.
SplitKernel kernel_x(Wavevector k, double t, const PacketConfig& cfg) noexcept;
SplitKernel kernel_y(Wavevector k, double t, const PacketConfig& cfg) noexcept;

// Second-moment kernels, nm^2, without the constant d^2/2.
SplitKernel kernel_x2(Wavevector k, double t, const PacketConfig& cfg) noexcept;
SplitKernel kernel_y2(Wavevector k, double t, const PacketConfig& cfg) noexcept;

// Velocity kernels, nm/fs: exact time derivatives of kernel_x / kernel_y.
SplitKernel kernel_vx(Wavevector k, double t, const PacketConfig& cfg) noexcept;
SplitKernel kernel_vy(Wavevector k, double t, const PacketConfig& cfg) noexcept;

SplitKernel kernel(Observable obs, Wavevector k, double t, const PacketConfig& cfg) noexcept;

/// Constant added to the integrated kernel: d^2/2 for X2 and Y2, zero otherwise.
double kernel_offset(Observable obs, const PacketConfig& cfg) noexcept;

/// Heisenberg-picture v_x(t) at fixed k as [[U, u1 + i u2], [u1 - i u2, -U]].
struct VelocityOperator {
  double diag = 0.0;
  double off_re = 0.0;
  double off_im = 0.0;

  /// Coefficient of the identity in v_x(t)^2.
  double square() const noexcept { return diag * diag + off_re * off_re + off_im * off_im; }
};

VelocityOperator velocity_operator_x(Wavevector k, double t, const PacketConfig& cfg) noexcept;

/// <v_x^2> = <v_y^2> = v_f^2 for every state.
double velocity_square(const PacketConfig& cfg) noexcept;

/// Uncertainty product of the nonrelativistic p^2/2M Hamiltonian with the same packet.
/// XP/YP in units of hbar, XV/YV in nm^2/fs. Throws GapRequired when inv_lambda_c == 0.
double free_baseline(Pair pair, double t, const PacketConfig& cfg);

}  // namespace zitter
