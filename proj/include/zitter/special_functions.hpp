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

// Hermite polynomials at real and pure-imaginary arguments, and the modified
// Bessel functions I_0, I_1.

#include <cstddef>
#include <vector>

namespace zitter {

inline constexpr int kHermiteMaxIndex = 400;

/// Physicists' H_n(x) by forward recurrence. Throws IndexOverflow for n > n_max
/// and Overflow when the value leaves the double range.
double hermite(int n, double x, int n_max = kHermiteMaxIndex);

/// G_n(x) with H_n(ix) = i^n G_n(x); G_{n+1} = 2x G_n + 2n G_{n-1}.
double hermite_imag_scaled(int n, double x, int n_max = kHermiteMaxIndex);

/// G_0..G_N at one point, stored as log-magnitude and sign so that entries far
/// beyond the double range stay usable.
class HermiteTable {
 public:
  HermiteTable(double x, int n, int n_max = kHermiteMaxIndex);

  double x() const noexcept { return x_; }
  int size() const noexcept { return static_cast<int>(log_abs_.size()); }

  /// log|G_n|; -inf when G_n = 0 (odd n at x = 0).
  double log_abs(int n) const;
  /// -1, 0 or +1.
  int sign(int n) const;
  /// exp(log_abs) * sign; throws Overflow if it does not fit in a double.
  double value(int n) const;

 private:
  void check(int n) const;

  double x_;
  std::vector<double> log_abs_;
  std::vector<signed char> sign_;
};

/// log(n!) from a table, exact to rounding for n <= 4096; lgamma beyond.
double log_factorial(int n);

/// log of the binomial coefficient C(n, k), 0 <= k <= n.
double log_binomial(int n, int k);

/// I_nu(x) for nu in {0, 1} and 0 <= x <= 700. Throws Overflow above 700.
double bessel_i(int nu, double x);

/// exp(-x) I_nu(x), usable for any x >= 0.
double bessel_i_scaled(int nu, double x);

}  // namespace zitter
