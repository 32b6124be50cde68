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

#include "zitter/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zitter/errors.hpp"

namespace zitter {

namespace {

void check_index(int n, int n_max) {
  if (n < 0) throw IndexOverflow("Hermite index must be non-negative");
  if (n > n_max) {
    throw IndexOverflow("Hermite index " + std::to_string(n) + " exceeds limit " + std::to_string(n_max));
  }
}

// sign = +1 gives G_n, sign = -1 gives H_n.
double hermite_recurrence(int n, double x, double sign) {
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur + sign * 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  if (!std::isfinite(cur)) throw Overflow("Hermite value out of double range at n = " + std::to_string(n));
  return cur;
}

constexpr int kLogFactorialTable = 4096;

const std::array<double, kLogFactorialTable + 1>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kLogFactorialTable + 1> t{};
    t[0] = 0.0;
    for (int k = 1; k <= kLogFactorialTable; ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
    return t;
  }();
  return table;
}

constexpr double kSeriesCutover = 15.0;
constexpr double kOverflowLimit = 700.0;

// Power series; all terms positive.
double bessel_series(int nu, double x) {
  const double h = 0.5 * x;
  const double h2 = h * h;
  double term = nu == 0 ? 1.0 : h;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= h2 / (static_cast<double>(k) * static_cast<double>(k + nu));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// sqrt(2 pi x) e^{-x} I_nu(x) by the Hankel expansion, truncated at its smallest term.
double bessel_asymptotic_core(int nu, double x) {
  const double four_nu2 = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(four_nu2 - odd * odd) / (8.0 * k * x);
    const double mag = std::fabs(term);
    if (mag > last) break;
    sum += term;
    last = mag;
    if (mag < 1e-17 * std::fabs(sum)) break;
  }
  return sum;
}

void check_bessel_args(int nu, double x) {
  if (nu != 0 && nu != 1) throw Error("bessel_i supports nu = 0 or 1 only");
  if (!(x >= 0.0)) throw Error("bessel_i requires x >= 0");
}

}  // namespace

double hermite(int n, double x, int n_max) {
  check_index(n, n_max);
  return hermite_recurrence(n, x, -1.0);
}

double hermite_imag_scaled(int n, double x, int n_max) {
  check_index(n, n_max);
  return hermite_recurrence(n, x, 1.0);
}

HermiteTable::HermiteTable(double x, int n, int n_max) : x_(x) {
  check_index(n, n_max);
  log_abs_.resize(static_cast<std::size_t>(n) + 1);
  sign_.resize(static_cast<std::size_t>(n) + 1);

  // Scaled forward recurrence: true G_k = g_k * exp(scale).
  constexpr double kRescale = 1e150;
  const double log_rescale = std::log(kRescale);
  double scale = 0.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  auto store = [&](int k, double g) {
    if (g == 0.0) {
      log_abs_[k] = -std::numeric_limits<double>::infinity();
      sign_[k] = 0;
    } else {
      log_abs_[k] = std::log(std::fabs(g)) + scale;
      sign_[k] = g > 0.0 ? 1 : -1;
    }
  };
  store(0, prev);
  if (n == 0) return;
  store(1, cur);
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur + 2.0 * k * prev;
    prev = cur;
    cur = next;
    if (std::fabs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      scale += log_rescale;
    }
    store(k + 1, cur);
  }
}

void HermiteTable::check(int n) const {
  if (n < 0 || n >= size()) {
    throw IndexOverflow("Hermite table index " + std::to_string(n) + " outside [0, " + std::to_string(size() - 1) +
                        "]");
  }
}

double HermiteTable::log_abs(int n) const {
  check(n);
  return log_abs_[n];
}

int HermiteTable::sign(int n) const {
  check(n);
  return sign_[n];
}

double HermiteTable::value(int n) const {
  check(n);
  if (sign_[n] == 0) return 0.0;
  const double v = std::exp(log_abs_[n]);
  if (!std::isfinite(v)) throw Overflow("Hermite table entry out of double range at n = " + std::to_string(n));
  return sign_[n] * v;
}

double log_factorial(int n) {
  if (n < 0) throw Error("log_factorial of a negative integer");
  if (n <= kLogFactorialTable) return log_factorial_table()[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw Error("log_binomial requires 0 <= k <= n");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double bessel_i(int nu, double x) {
  check_bessel_args(nu, x);
  if (x > kOverflowLimit) throw Overflow("bessel_i argument above 700");
  if (x < kSeriesCutover) return bessel_series(nu, x);
  return std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) * bessel_asymptotic_core(nu, x);
}

double bessel_i_scaled(int nu, double x) {
  check_bessel_args(nu, x);
  if (x < kSeriesCutover) return std::exp(-x) * bessel_series(nu, x);
  return bessel_asymptotic_core(nu, x) / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace zitter
