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

// Expectation values, uncertainty products, spectral weights, limits and the
// critical gap values built on the kernels, the quadrature and the series.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zitter/model.hpp"
#include "zitter/quadrature.hpp"
#include "zitter/series.hpp"

namespace zitter {

struct ExpectationOptions {
  Method method = Method::quadrature;
  QuadSettings quad{};
  double series_tol = kSeriesTolerance;
  int series_n_max = kSeriesMaxShells;
};

/// One observable at one time. X2/Y2 include the d^2/2 offset in `value` but in
/// neither part. In series mode the spreading part is the exact secular term from
/// the J integrals and the zb part is the remainder.
ExpectationResult expectation(Observable obs, double t, const PacketConfig& cfg, const ExpectationOptions& opts = {});

struct UncertaintyPoint {
  double t = 0.0;
  double delta_pos = 0.0;
  double delta_conj = 0.0;
  double product = 0.0;
  double free_baseline = 0.0;  // NaN for a gapless packet
  double spreading_share = 0.0;
  double zb_share = 0.0;
  double est_error = 0.0;
  bool converged = true;
};

/// Delta(position) times Delta(p) (momentum pairs, units of hbar) or Delta(v)
/// (velocity pairs, nm^2/fs). Delta v uses <v^2> = v_f^2.
UncertaintyPoint uncertainty(Pair pair, double t, const PacketConfig& cfg, const ExpectationOptions& opts = {});

struct SpectralWeights {
  double p_plus = 0.0;
  double p_minus = 0.0;
  double delta_p = 0.0;
  double est_error = 0.0;
};

SpectralWeights packet_split_weights(const PacketConfig& cfg, const QuadSettings& settings = {});

/// Settings used for every J integral unless the caller passes others.
QuadSettings j_settings();

/// Int d^2k exp[-d^2 |k - k0|^2] kx^m ky^n / (k^2 + inv_lambda_c^2), no d^2/pi prefactor.
double j_integral(int m, int n, const PacketConfig& cfg, const QuadSettings& settings = j_settings());

struct JIntegrals {
  double j00 = 0.0;  // NaN when gapless (log-divergent)
  double j10 = 0.0;
  double j01 = 0.0;
  double j20 = 0.0;
  double j02 = 0.0;
  double j11 = 0.0;
  double est_error = 0.0;
  bool converged = true;
};

JIntegrals j_integrals(const PacketConfig& cfg, const QuadSettings& settings = j_settings());

/// Long-time x-pair function; x replaces cfg.inv_lambda_c.
double gamma_fn(double x, const PacketConfig& cfg, const QuadSettings& settings = j_settings());
/// Long-time y-pair function; x replaces cfg.inv_lambda_c.
double delta_fn(double x, const PacketConfig& cfg, const QuadSettings& settings = j_settings());

enum class CriticalKind { mu1, mu2, mu2_star, nu1, nu2, nu2_star };

std::string_view to_string(CriticalKind kind) noexcept;
std::optional<CriticalKind> parse_critical_kind(std::string_view text) noexcept;

/// mu1 = 1/sqrt(2 d^2 (1 - 4a^2b^2)), nu1 = 1/(sqrt(2) d). Throws DegenerateSpinor for mu1 at a = b.
double critical_closed(CriticalKind kind, const PacketConfig& cfg);

struct RootResult {
  double root = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

inline constexpr std::pair<double, double> kDefaultBracket{1e-3, 20.0};
inline constexpr double kBracketCap = 1280.0;

/// Root of gamma = 1, delta = 1, gamma = 1/(2x^2d^2) or delta = 1/(2x^2d^2). The bracket's
/// upper end doubles up to kBracketCap; throws NoSignChange if no crossing is found.
RootResult solve_critical(CriticalKind kind, const PacketConfig& cfg, std::pair<double, double> bracket = kDefaultBracket,
                          double tol = 1e-4, const QuadSettings& settings = j_settings());

struct CriticalValue {
  CriticalKind kind = CriticalKind::mu1;
  double value = 0.0;  // +inf when divergent
  bool divergent = false;
  RootResult root{};   // empty for closed forms and divergent values
};

struct CriticalReport {
  CriticalValue mu1, mu2, mu2_star, nu1, nu2, nu2_star;

  const CriticalValue& get(CriticalKind kind) const;
};

/// Evaluates one critical value; NoSignChange becomes a divergent (inf) entry.
CriticalValue critical_value(CriticalKind kind, const PacketConfig& cfg);

/// x-pair values from `x_cfg`, y-pair values from `y_cfg`.
CriticalReport critical_report(const PacketConfig& x_cfg, const PacketConfig& y_cfg);

enum class TableId { I, II };

/// Table geometry: d = 8, center (1.2/n, 1.2) for table I and (1.2, 1.2/n) for table II;
/// n = 0 stands for n = infinity (that component of the center is zero).
PacketConfig table_config(TableId table, double a, int n);

inline constexpr std::array<double, 2> kTableSpinors{0.9, 0.7};
inline constexpr std::array<int, 6> kTableColumns{10, 20, 30, 40, 50, 0};

struct TableCell {
  CriticalKind kind;
  double a;
  int n;  // 0 = infinity
  CriticalValue value;
};

/// The full grid: three quantities, both spinors, all six columns.
std::vector<TableCell> critical_table(TableId table);

/// value(t) ~ c0 + c1 t + c2 t^2 as t -> 0.
struct ShortTimeCoefficients {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

ShortTimeCoefficients short_time_limit(Observable obs, const PacketConfig& cfg);

/// X, Y: drift velocity (nm/fs). X2, Y2: coefficient of (v_f t)^2. VX, VY: the same drift.
double long_time_slope(Observable obs, const PacketConfig& cfg, const QuadSettings& settings = j_settings());

/// Exact secular part at time t (excluding the d^2/2 offset of X2/Y2).
double spreading_part(Observable obs, double t, const PacketConfig& cfg, const QuadSettings& settings = j_settings());

// Gapless closed forms for alpha = 0, a = 1, b = 0, beta > 0 through half-line
// Bessel integrals. Throw InvalidConfig for any other packet.
QuadResult gapless_x(double t, const PacketConfig& cfg, const QuadSettings& settings = {});
QuadResult gapless_x2(double t, const PacketConfig& cfg, const QuadSettings& settings = {});
QuadResult gapless_y2(double t, const PacketConfig& cfg, const QuadSettings& settings = {});

/// 10^3 d / v_f.
double late_time(const PacketConfig& cfg);
/// pi / (v_f E0) with E0 the energy at the packet center.
double zb_period(const PacketConfig& cfg);
/// `samples` times spread over `periods` ZB periods starting at late_time.
std::vector<double> late_window(const PacketConfig& cfg, int samples = 5, double periods = 50.0);

}  // namespace zitter
