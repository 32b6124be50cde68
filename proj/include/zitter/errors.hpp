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

#include <stdexcept>
#include <string>

namespace zitter {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Packet or run parameters violate their invariants.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// A kernel produced NaN or Inf at an integration node.
class InvalidKernel : public Error {
 public:
  using Error::Error;
};

/// Hermite index outside the configured table range.
class IndexOverflow : public Error {
 public:
  using Error::Error;
};

/// Argument too large for an unscaled special function.
class Overflow : public Error {
 public:
  using Error::Error;
};

/// The operation needs a finite gap (inv_lambda_c > 0).
class GapRequired : public Error {
 public:
  using Error::Error;
};

/// a == b makes the closed-form mu1 infinite.
class DegenerateSpinor : public Error {
 public:
  using Error::Error;
};

/// Root bracket has no sign change, even after expansion.
class NoSignChange : public Error {
 public:
  NoSignChange(const std::string& what, double lo, double hi, double f_lo, double f_hi)
      : Error(what), lo_(lo), hi_(hi), f_lo_(f_lo), f_hi_(f_hi) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double f_lo() const noexcept { return f_lo_; }
  double f_hi() const noexcept { return f_hi_; }

 private:
  double lo_;
  double hi_;
  double f_lo_;
  double f_hi_;
};

/// Position variance came out negative beyond its error bar.
class NegativeVariance : public Error {
 public:
  using Error::Error;
};

/// An integral or series did not reach its tolerance and the caller asked for strictness.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace zitter
