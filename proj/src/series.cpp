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

#include "zitter/series.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "zitter/compensated.hpp"
#include "zitter/errors.hpp"
#include "zitter/special_functions.hpp"

namespace zitter {

namespace {

// One product coef * i^ipow * H_j(i alpha d) H_k(i beta d) with j = 2m + ja and
// k = 2l - 2m + kb. All such products are real: ipow + j + k is even.
struct Block {
  double coef;
  int ipow;
  int ja;
  int kb;
};

// Generic shape of every expansion:
//   prefix + multiplier * sum_n s^{2n+p}/(2n+f)! sum_l C(n,l)(-1)^{n-l} D^{-2l-q}
//            sum_m C(l,m) sum_blocks
struct Layout {
  double prefix;
  double multiplier;
  int power_offset;
  int factorial_offset;
  int d_offset;
};

struct Expansion {
  Layout layout;
  std::vector<Block> (*blocks)(int n, const PacketConfig& cfg, double tau);
};

std::vector<Block> blocks_x(int n, const PacketConfig& cfg, double tau) {
  const double g = cfg.spinor_z();
  const double h = cfg.spinor_x();
  const double s = 2.0 * cfg.inv_lambda_c * tau;
  const double big_d = 2.0 * cfg.inv_lambda_c * cfg.d;
  return {{g * cfg.d * (2 * n + 3), 3, 0, 1},
          {g * cfg.d * s, 3, 1, 0},
          {h * tau, 0, 0, 2},
          {-h * tau * big_d * big_d, 0, 0, 0}};
}

std::vector<Block> blocks_y(int n, const PacketConfig& cfg, double tau) {
  const double g = cfg.spinor_z();
  const double ab = cfg.a * cfg.b;
  const double lambda_c = 1.0 / cfg.inv_lambda_c;
  const double s = 2.0 * cfg.inv_lambda_c * tau;
  const double big_d = 2.0 * cfg.inv_lambda_c * cfg.d;
  return {{g * cfg.d * (2 * n + 3), 1, 1, 0},
          {-g * cfg.d * s, 1, 0, 1},
          {ab * lambda_c * (2 * n + 3) * big_d * big_d, 0, 0, 0},
          {-ab * lambda_c * s, 0, 1, 1}};
}

std::vector<Block> blocks_x2(int, const PacketConfig& cfg, double) {
  const double big_d = 2.0 * cfg.inv_lambda_c * cfg.d;
  return {{1.0, 0, 0, 2}, {-big_d * big_d, 0, 0, 0}};
}

std::vector<Block> blocks_y2(int, const PacketConfig& cfg, double) {
  const double big_d = 2.0 * cfg.inv_lambda_c * cfg.d;
  return {{1.0, 0, 2, 0}, {-big_d * big_d, 0, 0, 0}};
}

std::vector<Block> blocks_vx(int n, const PacketConfig& cfg, double tau) {
  const double g = cfg.spinor_z();
  const double h = cfg.spinor_x();
  const double mu_tau = cfg.inv_lambda_c * tau;
  const double big_d = 2.0 * cfg.inv_lambda_c * cfg.d;
  return {{g * big_d * (n + 1), 1, 0, 1},
          {g * big_d * mu_tau, 1, 1, 0},
          {h * mu_tau * big_d * big_d, 0, 0, 0},
          {-h * mu_tau, 0, 0, 2}};
}

std::vector<Block> blocks_vy(int n, const PacketConfig& cfg, double tau) {
  const double g = cfg.spinor_z();
  const double h = cfg.spinor_x();
  const double s = 2.0 * cfg.inv_lambda_c * tau;
  const double big_d = 2.0 * cfg.inv_lambda_c * cfg.d;
  return {{g * (2 * n + 2), 1, 1, 0},
          {-g * s, 1, 0, 1},
          {h * (2 * n + 2) * big_d, 0, 0, 0},
          {-h * tau / cfg.d, 0, 1, 1}};
}

Expansion expansion_for(Observable obs, const PacketConfig& cfg, double tau) {
  const double v = cfg.v_f;
  const double h = cfg.spinor_x();
  const double second = 0.5 * cfg.d * cfg.d + tau * tau;
  switch (obs) {
    case Observable::X: return {{h * tau, 1.0, 2, 3, 2}, blocks_x};
    case Observable::Y: return {{0.0, 1.0, 2, 3, 2}, blocks_y};
    case Observable::X2: return {{second, 2.0 * cfg.d * cfg.d, 4, 4, 4}, blocks_x2};
    case Observable::Y2: return {{second, 2.0 * cfg.d * cfg.d, 4, 4, 4}, blocks_y2};
    case Observable::VX: return {{h * v, -2.0 * v, 1, 2, 2}, blocks_vx};
    case Observable::VY: return {{0.0, v, 1, 2, 1}, blocks_vy};
  }
  throw std::logic_error("unknown observable");
}

constexpr int kQuietShells = 3;
constexpr double kCancellationLimit = 1e-9;

}  // namespace

SeriesResult series_expectation(Observable obs, double t, const PacketConfig& cfg, double tol, int n_max) {
  cfg.validate();
  if (cfg.gapless()) throw GapRequired("series expansion needs inv_lambda_c > 0");
  if (!(t >= 0.0)) throw InvalidConfig("time must be non-negative");
  if (n_max < 1) throw InvalidConfig("series needs at least one shell");

  const double tau = cfg.v_f * t;
  const Expansion ex = expansion_for(obs, cfg, tau);
  const Layout& lay = ex.layout;

  SeriesResult result;
  result.value = lay.prefix;
  if (tau == 0.0) {
    result.converged = true;
    return result;
  }

  const int table_size = 2 * n_max + 4;
  const HermiteTable herm_a(cfg.alpha * cfg.d, table_size - 1);
  const HermiteTable herm_b(cfg.beta * cfg.d, table_size - 1);
  const double log_s = std::log(2.0 * cfg.inv_lambda_c * tau);
  const double log_big_d = std::log(2.0 * cfg.inv_lambda_c * cfg.d);
  const double mult = std::fabs(lay.multiplier);
  const int mult_sign = lay.multiplier < 0 ? -1 : 1;

  CompensatedSum outer;
  double previous_shell = std::numeric_limits<double>::infinity();
  int quiet = 0;
  double max_term = 0.0;
  double recent_tail = 0.0;
  bool overflowed = false;
  for (int n = 0; n < n_max && !overflowed; ++n) {
    const std::vector<Block> blocks = ex.blocks(n, cfg, tau);
    const double log_pre = (2 * n + lay.power_offset) * log_s - log_factorial(2 * n + lay.factorial_offset);
    CompensatedSum shell;
    for (const Block& blk : blocks) {
      if (overflowed) break;
      if (blk.coef == 0.0) continue;
      const int parity = blk.ipow + blk.ja + blk.kb;
      if (parity % 2 != 0) throw std::logic_error("series block with odd power of i");
      const int coef_sign = ((n + parity / 2) % 2 == 0 ? 1 : -1) * (blk.coef < 0 ? -1 : 1) * mult_sign;
      const double log_coef = std::log(std::fabs(blk.coef)) + std::log(mult) + log_pre;
      for (int l = 0; l <= n && !overflowed; ++l) {
        const double log_l = log_coef + log_binomial(n, l) - (2 * l + lay.d_offset) * log_big_d;
        for (int m = 0; m <= l; ++m) {
          const int j = 2 * m + blk.ja;
          const int k = 2 * l - 2 * m + blk.kb;
          const int sa = herm_a.sign(j);
          const int sb = herm_b.sign(k);
          if (sa == 0 || sb == 0) continue;
          const double magnitude =
              std::exp(log_l + log_binomial(l, m) + herm_a.log_abs(j) + herm_b.log_abs(k));
          if (!std::isfinite(magnitude)) {
            overflowed = true;
            break;
          }
          max_term = std::max(max_term, magnitude);
          shell += coef_sign * sa * sb * magnitude;
        }
      }
    }
    if (overflowed) break;
    const double contribution = shell.value();
    outer += contribution;
    result.terms_used = n + 1;
    result.last_term_magnitude = std::fabs(contribution);

    const double total = lay.prefix + outer.value();
    const bool decaying = std::fabs(contribution) <= previous_shell;
    if (decaying && std::fabs(contribution) <= tol * std::fabs(total)) {
      ++quiet;
      recent_tail += std::fabs(contribution);
    } else {
      quiet = 0;
      recent_tail = 0.0;
    }
    previous_shell = std::fabs(contribution);
    if (quiet >= kQuietShells) {
      result.converged = true;
      break;
    }
  }

  CompensatedSum value;
  value += lay.prefix;
  value += outer.value();
  result.value = value.value();
  result.max_term_magnitude = max_term;
  const double rounding = 16.0 * std::numeric_limits<double>::epsilon() * max_term;
  result.est_error = recent_tail + rounding;
  if (!result.converged) result.est_error = std::max(result.est_error, result.last_term_magnitude);
  if (rounding > kCancellationLimit * std::fabs(result.value)) result.converged = false;
  if (overflowed) {
    // Terms left the double range: the expansion is far outside its useful regime.
    result.converged = false;
    result.value = std::numeric_limits<double>::quiet_NaN();
    result.est_error = std::numeric_limits<double>::infinity();
  }
  return result;
}

SeriesResult series_x(double t, const PacketConfig& cfg, double tol, int n_max) {
  return series_expectation(Observable::X, t, cfg, tol, n_max);
}
SeriesResult series_y(double t, const PacketConfig& cfg, double tol, int n_max) {
  return series_expectation(Observable::Y, t, cfg, tol, n_max);
}
SeriesResult series_x2(double t, const PacketConfig& cfg, double tol, int n_max) {
  return series_expectation(Observable::X2, t, cfg, tol, n_max);
}
SeriesResult series_y2(double t, const PacketConfig& cfg, double tol, int n_max) {
  return series_expectation(Observable::Y2, t, cfg, tol, n_max);
}
SeriesResult series_vx(double t, const PacketConfig& cfg, double tol, int n_max) {
  return series_expectation(Observable::VX, t, cfg, tol, n_max);
}
SeriesResult series_vy(double t, const PacketConfig& cfg, double tol, int n_max) {
  return series_expectation(Observable::VY, t, cfg, tol, n_max);
}

}  // namespace zitter
