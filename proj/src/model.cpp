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

#include "zitter/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "zitter/errors.hpp"

namespace zitter {

namespace {

// Common per-node quantities. E2 = |k|^2 + inv_lambda_c^2.
struct Dispersion {
  double e2;
  double e;
  double sin_t;
  double cos_t;
};

Dispersion dispersion(Wavevector k, double t, const PacketConfig& cfg) noexcept {
  const double mu = cfg.inv_lambda_c;
  const double e2 = k.kx * k.kx + k.ky * k.ky + mu * mu;
  const double e = std::sqrt(e2);
  const double theta = cfg.v_f * t * e;
  return {e2, e, std::sin(theta), std::cos(theta)};
}

bool singular_origin(Wavevector k, const PacketConfig& cfg) noexcept {
  return cfg.inv_lambda_c == 0.0 && k.kx == 0.0 && k.ky == 0.0;
}

}  // namespace

PacketConfig PacketConfig::make(double d, double alpha, double beta, double a, std::optional<double> b,
                                double inv_lambda_c, double v_f) {
  PacketConfig cfg;
  cfg.d = d;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.a = a;
  if (b) {
    cfg.b = *b;
  } else {
    if (std::fabs(a) > 1.0) throw InvalidConfig("spinor amplitude |a| must not exceed 1");
    cfg.b = std::sqrt(1.0 - a * a);
  }
  cfg.inv_lambda_c = inv_lambda_c;
  cfg.v_f = v_f;
  cfg.validate();
  return cfg;
}

void PacketConfig::validate() const {
  if (!(d > 0.0) || !std::isfinite(d)) throw InvalidConfig("packet width d must be positive");
  if (!(v_f > 0.0) || !std::isfinite(v_f)) throw InvalidConfig("Fermi velocity must be positive");
  if (!(inv_lambda_c >= 0.0) || !std::isfinite(inv_lambda_c)) {
    throw InvalidConfig("inv_lambda_c must be finite and non-negative");
  }
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw InvalidConfig("packet center must be finite");
  if (std::fabs(a * a + b * b - 1.0) > 1e-12) {
    throw InvalidConfig("spinor amplitudes must satisfy a^2 + b^2 = 1, got " + std::to_string(a * a + b * b));
  }
}

PacketConfig PacketConfig::with_gap(double new_inv_lambda_c) const {
  PacketConfig copy = *this;
  copy.inv_lambda_c = new_inv_lambda_c;
  return copy;
}

double PacketConfig::center_norm() const noexcept { return std::hypot(alpha, beta); }

std::string_view to_string(Observable obs) noexcept {
  switch (obs) {
    case Observable::X: return "x";
    case Observable::Y: return "y";
    case Observable::X2: return "x2";
    case Observable::Y2: return "y2";
    case Observable::VX: return "vx";
    case Observable::VY: return "vy";
  }
  return "?";
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::quadrature: return "quadrature";
    case Method::series: return "series";
    case Method::both: return "both";
  }
  return "?";
}

std::string_view to_string(Pair pair) noexcept {
  switch (pair) {
    case Pair::XP: return "xp";
    case Pair::YP: return "yp";
    case Pair::XV: return "xv";
    case Pair::YV: return "yv";
  }
  return "?";
}

std::optional<Observable> parse_observable(std::string_view text) noexcept {
  for (auto obs : {Observable::X, Observable::Y, Observable::X2, Observable::Y2, Observable::VX, Observable::VY}) {
    if (text == to_string(obs)) return obs;
  }
  if (text == "X") return Observable::X;
  if (text == "Y") return Observable::Y;
  if (text == "X2") return Observable::X2;
  if (text == "Y2") return Observable::Y2;
  if (text == "VX") return Observable::VX;
  if (text == "VY") return Observable::VY;
  return std::nullopt;
}

std::optional<Method> parse_method(std::string_view text) noexcept {
  for (auto m : {Method::quadrature, Method::series, Method::both}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

std::optional<Pair> parse_pair(std::string_view text) noexcept {
  for (auto p : {Pair::XP, Pair::YP, Pair::XV, Pair::YV}) {
    if (text == to_string(p)) return p;
  }
  return std::nullopt;
}

double phase(Wavevector k, double t, const PacketConfig& cfg) noexcept {
  const double mu = cfg.inv_lambda_c;
  return cfg.v_f * t * std::sqrt(k.kx * k.kx + k.ky * k.ky + mu * mu);
}

double gaussian_weight(Wavevector k, const PacketConfig& cfg) noexcept {
  const double ux = cfg.d * (k.kx - cfg.alpha);
  const double uy = cfg.d * (k.ky - cfg.beta);
  return std::exp(-ux * ux - uy * uy);
}

SplitKernel kernel_x(Wavevector k, double t, const PacketConfig& cfg) noexcept {
  if (singular_origin(k, cfg)) return {};
  const auto [e2, e, s, c] = dispersion(k, t, cfg);
  const double mu = cfg.inv_lambda_c;
  const double g = cfg.spinor_z();
  const double h = cfg.spinor_x();
  const double tau = cfg.v_f * t;
  SplitKernel out;
  out.spreading = tau / e2 * (g * mu * k.kx + h * k.kx * k.kx);
  out.zb = g / e2 * (k.ky * s * s - mu * k.kx / e * s * c) + h / (e2 * e) * s * c * (k.ky * k.ky + mu * mu);
  return out;
}

SplitKernel kernel_y(Wavevector k, double t, const PacketConfig& cfg) noexcept {
  if (singular_origin(k, cfg)) return {};
  const auto [e2, e, s, c] = dispersion(k, t, cfg);
  const double mu = cfg.inv_lambda_c;
  const double g = cfg.spinor_z();
  const double h = cfg.spinor_x();
  const double tau = cfg.v_f * t;
  const double odd = g * mu * k.ky + h * k.kx * k.ky;
  SplitKernel out;
  out.spreading = tau / e2 * odd;
  out.zb = s * s / e2 * (-g * k.kx + h * mu) - s * c / (e2 * e) * odd;
  return out;
}

SplitKernel kernel_x2(Wavevector k, double t, const PacketConfig& cfg) noexcept {
  if (singular_origin(k, cfg)) return {};
  const auto [e2, e, s, c] = dispersion(k, t, cfg);
  const double mu = cfg.inv_lambda_c;
  const double tau = cfg.v_f * t;
  return {tau * tau * k.kx * k.kx / e2, s * s * (k.ky * k.ky + mu * mu) / (e2 * e2)};
}

SplitKernel kernel_y2(Wavevector k, double t, const PacketConfig& cfg) noexcept {
  if (singular_origin(k, cfg)) return {};
  const auto [e2, e, s, c] = dispersion(k, t, cfg);
  const double mu = cfg.inv_lambda_c;
  const double tau = cfg.v_f * t;
  return {tau * tau * k.ky * k.ky / e2, s * s * (k.kx * k.kx + mu * mu) / (e2 * e2)};
}

SplitKernel kernel_vx(Wavevector k, double t, const PacketConfig& cfg) noexcept {
  const double v = cfg.v_f;
  if (singular_origin(k, cfg)) return {};
  const auto [e2, e, s, c] = dispersion(k, t, cfg);
  const double mu = cfg.inv_lambda_c;
  const double g = cfg.spinor_z();
  const double h = cfg.spinor_x();
  const double sin2 = 2.0 * s * c;
  const double cos2 = c * c - s * s;
  SplitKernel out;
  out.spreading = v * (g * mu * k.kx + h * k.kx * k.kx) / e2;
  out.zb = v * (g * (k.ky * sin2 / e - mu * k.kx * cos2 / e2) + h * cos2 * (k.ky * k.ky + mu * mu) / e2);
  return out;
}

SplitKernel kernel_vy(Wavevector k, double t, const PacketConfig& cfg) noexcept {
  const double v = cfg.v_f;
  if (singular_origin(k, cfg)) return {};
  const auto [e2, e, s, c] = dispersion(k, t, cfg);
  const double mu = cfg.inv_lambda_c;
  const double g = cfg.spinor_z();
  const double h = cfg.spinor_x();
  const double sin2 = 2.0 * s * c;
  const double cos2 = c * c - s * s;
  SplitKernel out;
  out.spreading = v * (g * mu * k.ky + h * k.kx * k.ky) / e2;
  out.zb = v * (g * (-k.kx * sin2 / e - mu * k.ky * cos2 / e2) + h * (mu * sin2 / e - k.kx * k.ky * cos2 / e2));
  return out;
}

SplitKernel kernel(Observable obs, Wavevector k, double t, const PacketConfig& cfg) noexcept {
  switch (obs) {
    case Observable::X: return kernel_x(k, t, cfg);
    case Observable::Y: return kernel_y(k, t, cfg);
    case Observable::X2: return kernel_x2(k, t, cfg);
    case Observable::Y2: return kernel_y2(k, t, cfg);
    case Observable::VX: return kernel_vx(k, t, cfg);
    case Observable::VY: return kernel_vy(k, t, cfg);
  }
  return {};
}

double kernel_offset(Observable obs, const PacketConfig& cfg) noexcept {
  return (obs == Observable::X2 || obs == Observable::Y2) ? 0.5 * cfg.d * cfg.d : 0.0;
}

VelocityOperator velocity_operator_x(Wavevector k, double t, const PacketConfig& cfg) noexcept {
  const double v = cfg.v_f;
  if (singular_origin(k, cfg)) return {0.0, v, 0.0};
  const auto [e2, e, s, c] = dispersion(k, t, cfg);
  const double mu = cfg.inv_lambda_c;
  VelocityOperator op;
  op.diag = v * (2.0 * k.ky / e * s * c + 2.0 * mu * k.kx / e2 * s * s);
  op.off_re = v * (c * c + (k.kx * k.kx - k.ky * k.ky - mu * mu) / e2 * s * s);
  op.off_im = v * (-2.0 * k.kx * k.ky / e2 * s * s + 2.0 * mu / e * s * c);
  return op;
}

double velocity_square(const PacketConfig& cfg) noexcept { return cfg.v_f * cfg.v_f; }

double free_baseline(Pair pair, double t, const PacketConfig& cfg) {
  if (!(cfg.inv_lambda_c > 0.0)) {
    throw GapRequired("free-Hamiltonian baseline needs a finite mass (inv_lambda_c > 0)");
  }
  const double lambda_c = 1.0 / cfg.inv_lambda_c;
  const double d2 = cfg.d * cfg.d;
  const double spread = lambda_c * cfg.v_f * t / (2.0 * d2);
  switch (pair) {
    case Pair::XP:
    case Pair::YP:
      return std::sqrt(0.25 + spread * spread);
    case Pair::XV:
    case Pair::YV: {
      const double lv = lambda_c * cfg.v_f;
      return std::sqrt(lv * lv / 4.0 + lv * lv * spread * spread);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace zitter
