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

#include "zitter/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zitter/errors.hpp"
#include "zitter/special_functions.hpp"

namespace zitter {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidConfig("time must be finite and non-negative");
}

// Radial panels are sized by theta = v_f t E, the phase shared by every kernel.
double kernel_phase_rate(double t, const PacketConfig& cfg) { return cfg.v_f * t; }

// Spreading and zb parts of several observables in one pass: components 2i, 2i+1.
MultiQuadResult integrate_observables(std::span<const Observable> list, double t, const PacketConfig& cfg,
                                      const QuadSettings& settings) {
  return integrate_packet_weighted(
      [&](Wavevector k, std::span<double> out) {
        for (std::size_t i = 0; i < list.size(); ++i) {
          const SplitKernel sk = kernel(list[i], k, t, cfg);
          out[2 * i] = sk.spreading;
          out[2 * i + 1] = sk.zb;
        }
      },
      2 * list.size(), cfg, settings, kernel_phase_rate(t, cfg));
}

ExpectationResult expectation_quadrature(Observable obs, double t, const PacketConfig& cfg, const QuadSettings& q) {
  const std::array<Observable, 1> list{obs};
  const MultiQuadResult r = integrate_observables(list, t, cfg, q);
  ExpectationResult out;
  out.spreading_part = r.value[0];
  out.zb_part = r.value[1];
  out.value = r.value[0] + r.value[1] + kernel_offset(obs, cfg);
  out.est_error = r.est_error[0] + r.est_error[1];
  out.method = Method::quadrature;
  out.converged = r.converged;
  return out;
}

ExpectationResult expectation_series(Observable obs, double t, const PacketConfig& cfg,
                                     const ExpectationOptions& opts) {
  const SeriesResult s = series_expectation(obs, t, cfg, opts.series_tol, opts.series_n_max);
  ExpectationResult out;
  out.value = s.value;
  out.spreading_part = spreading_part(obs, t, cfg);
  out.zb_part = s.value - out.spreading_part - kernel_offset(obs, cfg);
  out.est_error = s.est_error;
  out.method = Method::series;
  out.converged = s.converged;
  return out;
}

// Bare J moments; index order j00, j10, j01, j20, j02, j11.
JIntegrals compute_j(const PacketConfig& cfg, const QuadSettings& settings) {
  const bool gapped = !cfg.gapless();
  const double mu2 = cfg.inv_lambda_c * cfg.inv_lambda_c;
  const MultiQuadResult r = integrate_packet_weighted(
      [&](Wavevector k, std::span<double> out) {
        const double e2 = k.kx * k.kx + k.ky * k.ky + mu2;
        const double inv = e2 > 0.0 ? 1.0 / e2 : 0.0;
        out[0] = gapped ? inv : 0.0;
        out[1] = k.kx * inv;
        out[2] = k.ky * inv;
        out[3] = k.kx * k.kx * inv;
        out[4] = k.ky * k.ky * inv;
        out[5] = k.kx * k.ky * inv;
      },
      6, cfg, settings);
  const double scale = std::numbers::pi / (cfg.d * cfg.d);
  JIntegrals j;
  j.j00 = gapped ? scale * r.value[0] : kNaN;
  j.j10 = scale * r.value[1];
  j.j01 = scale * r.value[2];
  j.j20 = scale * r.value[3];
  j.j02 = scale * r.value[4];
  j.j11 = scale * r.value[5];
  for (double e : r.est_error) j.est_error = std::max(j.est_error, scale * e);
  j.converged = r.converged;
  if (!j.converged) throw NonConvergence("J integrals did not reach tolerance");
  return j;
}

struct Drift {
  double x;  // (d^2/pi)[(a^2-b^2) mu J10 + 2ab J20]
  double y;  // (d^2/pi)[(a^2-b^2) mu J01 + 2ab J11]
  double xx; // (d^2/pi) J20
  double yy; // (d^2/pi) J02
};

Drift drift_coefficients(const PacketConfig& cfg, const QuadSettings& settings) {
  const JIntegrals j = compute_j(cfg, settings);
  const double pre = cfg.d * cfg.d / std::numbers::pi;
  const double g = cfg.spinor_z();
  const double h = cfg.spinor_x();
  const double mu = cfg.inv_lambda_c;
  return {pre * (g * mu * j.j10 + h * j.j20), pre * (g * mu * j.j01 + h * j.j11), pre * j.j20, pre * j.j02};
}

double critical_target(CriticalKind kind, double x, const PacketConfig& cfg, const QuadSettings& settings) {
  const double d2 = cfg.d * cfg.d;
  switch (kind) {
    case CriticalKind::mu2: return gamma_fn(x, cfg, settings) - 1.0;
    case CriticalKind::nu2: return delta_fn(x, cfg, settings) - 1.0;
    case CriticalKind::mu2_star: return gamma_fn(x, cfg, settings) - 1.0 / (2.0 * x * x * d2);
    case CriticalKind::nu2_star: return delta_fn(x, cfg, settings) - 1.0 / (2.0 * x * x * d2);
    case CriticalKind::mu1:
    case CriticalKind::nu1: break;
  }
  throw InvalidConfig("closed-form critical values have no target function");
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

void require_gapless_reference(const PacketConfig& cfg) {
  if (!cfg.gapless() || cfg.alpha != 0.0 || cfg.a != 1.0 || cfg.b != 0.0 || !(cfg.beta > 0.0)) {
    throw InvalidConfig("gapless closed forms need inv_lambda_c = 0, alpha = 0, a = 1, b = 0, beta > 0");
  }
}

QuadSettings halfline_settings(const QuadSettings& base) {
  QuadSettings s = base;
  s.rel_tol = std::min(base.rel_tol, 1e-12);
  s.abs_tol = std::min(base.abs_tol, 1e-15);
  return s;
}

// (1 - cos(w q)) / q^2 without cancellation.
double one_minus_cos_over_q2(double w, double q) {
  const double half = 0.5 * w * q;
  if (q == 0.0) return 0.5 * w * w;
  const double s = std::sin(half);
  return 2.0 * s * s / (q * q);
}

}  // namespace

ExpectationResult expectation(Observable obs, double t, const PacketConfig& cfg, const ExpectationOptions& opts) {
  cfg.validate();
  check_time(t);
  switch (opts.method) {
    case Method::quadrature: return expectation_quadrature(obs, t, cfg, opts.quad);
    case Method::series: return expectation_series(obs, t, cfg, opts);
    case Method::both: {
      ExpectationResult q = expectation_quadrature(obs, t, cfg, opts.quad);
      const SeriesResult s = series_expectation(obs, t, cfg, opts.series_tol, opts.series_n_max);
      if (s.converged) q.est_error = std::max(q.est_error, std::fabs(q.value - s.value));
      q.method = Method::both;
      return q;
    }
  }
  throw InvalidConfig("unknown method");
}

UncertaintyPoint uncertainty(Pair pair, double t, const PacketConfig& cfg, const ExpectationOptions& opts) {
  cfg.validate();
  check_time(t);
  const bool x_axis = pair == Pair::XP || pair == Pair::XV;
  const bool velocity = pair == Pair::XV || pair == Pair::YV;
  const Observable first = x_axis ? Observable::X : Observable::Y;
  const Observable second = x_axis ? Observable::X2 : Observable::Y2;
  const Observable speed = x_axis ? Observable::VX : Observable::VY;

  std::vector<Observable> list{first, second};
  if (velocity) list.push_back(speed);
  std::vector<ExpectationResult> parts;
  if (opts.method == Method::quadrature) {
    const MultiQuadResult r = integrate_observables(list, t, cfg, opts.quad);
    for (std::size_t i = 0; i < list.size(); ++i) {
      ExpectationResult e;
      e.spreading_part = r.value[2 * i];
      e.zb_part = r.value[2 * i + 1];
      e.value = e.spreading_part + e.zb_part + kernel_offset(list[i], cfg);
      e.est_error = r.est_error[2 * i] + r.est_error[2 * i + 1];
      e.converged = r.converged;
      parts.push_back(e);
    }
  } else {
    for (Observable obs : list) parts.push_back(expectation(obs, t, cfg, opts));
  }

  const ExpectationResult& m1 = parts[0];
  const ExpectationResult& m2 = parts[1];
  UncertaintyPoint p;
  p.t = t;
  double var = m2.value - m1.value * m1.value;
  const double var_err = m2.est_error + 2.0 * std::fabs(m1.value) * m1.est_error +
                         4.0 * std::numeric_limits<double>::epsilon() * std::fabs(m2.value);
  if (var < 0.0) {
    if (-var > var_err) {
      throw NegativeVariance("position variance " + std::to_string(var) + " below its error bar at t = " +
                             std::to_string(t));
    }
    var = 0.0;
  }
  p.delta_pos = std::sqrt(var);
  double conj_err = 0.0;
  if (velocity) {
    const ExpectationResult& v = parts[2];
    const double vv = velocity_square(cfg) - v.value * v.value;
    p.delta_conj = std::sqrt(std::max(0.0, vv));
    conj_err = p.delta_conj > 0.0 ? std::fabs(v.value) * v.est_error / p.delta_conj : v.est_error;
  } else {
    p.delta_conj = 1.0 / (std::numbers::sqrt2 * cfg.d);
  }
  p.product = p.delta_pos * p.delta_conj;
  const double pos_err = p.delta_pos > 0.0 ? var_err / (2.0 * p.delta_pos) : std::sqrt(var_err);
  p.est_error = pos_err * p.delta_conj + p.delta_pos * conj_err;
  p.free_baseline = cfg.gapless() ? kNaN : free_baseline(pair, t, cfg);

  const double spreading_var = kernel_offset(second, cfg) + m2.spreading_part - m1.spreading_part * m1.spreading_part;
  if (var > 0.0) {
    p.spreading_share = spreading_var / var;
    p.zb_share = 1.0 - p.spreading_share;
  } else {
    p.spreading_share = 1.0;
    p.zb_share = 0.0;
  }
  p.converged = std::all_of(parts.begin(), parts.end(), [](const ExpectationResult& e) { return e.converged; });
  return p;
}

SpectralWeights packet_split_weights(const PacketConfig& cfg, const QuadSettings& settings) {
  cfg.validate();
  const double mu = cfg.inv_lambda_c;
  const double g = cfg.spinor_z();
  const double h = cfg.spinor_x();
  const QuadResult r = integrate_packet_weighted(
      [&](Wavevector k) {
        const double e = std::sqrt(k.kx * k.kx + k.ky * k.ky + mu * mu);
        return e > 0.0 ? (g * mu + h * k.kx) / e : 0.0;
      },
      cfg, settings);
  if (!r.converged) throw NonConvergence("spectral-weight integral did not reach tolerance");
  SpectralWeights w;
  w.delta_p = 0.5 * r.value;
  w.p_plus = 0.5 + w.delta_p;
  w.p_minus = 0.5 - w.delta_p;
  w.est_error = 0.5 * r.est_error;
  return w;
}

QuadSettings j_settings() {
  QuadSettings s;
  s.rel_tol = 1e-12;
  s.abs_tol = 1e-16;
  return s;
}

double j_integral(int m, int n, const PacketConfig& cfg, const QuadSettings& settings) {
  cfg.validate();
  if (m < 0 || n < 0 || m + n > 2) throw InvalidConfig("J integral needs m, n >= 0 and m + n <= 2");
  if (m == 0 && n == 0 && cfg.gapless()) throw GapRequired("J00 diverges logarithmically without a gap");
  const JIntegrals j = compute_j(cfg, settings);
  if (m == 0 && n == 0) return j.j00;
  if (m == 1 && n == 0) return j.j10;
  if (m == 0 && n == 1) return j.j01;
  if (m == 2) return j.j20;
  if (n == 2) return j.j02;
  return j.j11;
}

JIntegrals j_integrals(const PacketConfig& cfg, const QuadSettings& settings) {
  cfg.validate();
  return compute_j(cfg, settings);
}

double gamma_fn(double x, const PacketConfig& cfg, const QuadSettings& settings) {
  if (!(x > 0.0)) throw InvalidConfig("gamma_fn needs x > 0");
  const PacketConfig c = cfg.with_gap(x);
  c.validate();
  const JIntegrals j = compute_j(c, settings);
  const double d2 = cfg.d * cfg.d;
  const double inner = cfg.spinor_z() * x * j.j10 + cfg.spinor_x() * j.j20;
  return 2.0 * x * x * d2 * d2 / std::numbers::pi * (j.j20 - d2 / std::numbers::pi * inner * inner);
}

double delta_fn(double x, const PacketConfig& cfg, const QuadSettings& settings) {
  if (!(x > 0.0)) throw InvalidConfig("delta_fn needs x > 0");
  const PacketConfig c = cfg.with_gap(x);
  c.validate();
  const JIntegrals j = compute_j(c, settings);
  const double d2 = cfg.d * cfg.d;
  const double inner = cfg.spinor_z() * x * j.j01 + cfg.spinor_x() * j.j11;
  return 2.0 * x * x * d2 * d2 / std::numbers::pi * (j.j02 - d2 / std::numbers::pi * inner * inner);
}

std::string_view to_string(CriticalKind kind) noexcept {
  switch (kind) {
    case CriticalKind::mu1: return "mu1";
    case CriticalKind::mu2: return "mu2";
    case CriticalKind::mu2_star: return "mu2star";
    case CriticalKind::nu1: return "nu1";
    case CriticalKind::nu2: return "nu2";
    case CriticalKind::nu2_star: return "nu2star";
  }
  return "?";
}

std::optional<CriticalKind> parse_critical_kind(std::string_view text) noexcept {
  for (auto k : {CriticalKind::mu1, CriticalKind::mu2, CriticalKind::mu2_star, CriticalKind::nu1, CriticalKind::nu2,
                 CriticalKind::nu2_star}) {
    if (text == to_string(k)) return k;
  }
  if (text == "mu2_star") return CriticalKind::mu2_star;
  if (text == "nu2_star") return CriticalKind::nu2_star;
  return std::nullopt;
}

double critical_closed(CriticalKind kind, const PacketConfig& cfg) {
  const double d2 = cfg.d * cfg.d;
  if (kind == CriticalKind::mu1) {
    const double spread = 1.0 - 4.0 * cfg.a * cfg.a * cfg.b * cfg.b;
    if (!(spread > 1e-14)) throw DegenerateSpinor("mu1 is infinite for a = b");
    return 1.0 / std::sqrt(2.0 * d2 * spread);
  }
  if (kind == CriticalKind::nu1) return 1.0 / (std::numbers::sqrt2 * cfg.d);
  throw InvalidConfig("only mu1 and nu1 have closed forms");
}

RootResult solve_critical(CriticalKind kind, const PacketConfig& cfg, std::pair<double, double> bracket, double tol,
                          const QuadSettings& settings) {
  cfg.validate();
  if (kind == CriticalKind::mu1 || kind == CriticalKind::nu1) {
    throw InvalidConfig("mu1 and nu1 are closed forms, not roots");
  }
  auto [lo, hi] = bracket;
  if (!(lo > 0.0) || !(hi > lo)) throw InvalidConfig("root bracket must satisfy 0 < lo < hi");
  if (!(tol > 0.0)) throw InvalidConfig("root tolerance must be positive");
  auto f = [&](double x) { return critical_target(kind, x, cfg, settings); };

  const double lo0 = lo;
  const double f_lo0 = f(lo);
  double f_lo = f_lo0;
  double f_hi = f(hi);
  while (sign_of(f_lo) * sign_of(f_hi) > 0 && hi < kBracketCap) {
    lo = hi;
    f_lo = f_hi;
    hi = std::min(2.0 * hi, kBracketCap);
    f_hi = f(hi);
  }
  if (sign_of(f_lo) * sign_of(f_hi) > 0) {
    throw NoSignChange(std::string(to_string(kind)) + ": no sign change on [" + std::to_string(lo0) + ", " +
                           std::to_string(hi) + "]",
                       lo0, hi, f_lo0, f_hi);
  }

  RootResult out;
  constexpr double kResidual = 1e-10;
  int side = 0;
  for (int iter = 1; iter <= 200; ++iter) {
    out.iterations = iter;
    double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    // Fall back to bisection when the secant step is unusable or the bracket stalls.
    if (!(x > lo && x < hi) || iter % 8 == 0) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::fabs(fx) < kResidual || hi - lo < 1e-13 * hi) {
      const double below = f(std::max(0.5 * x, x - 0.5 * tol));
      const double above = f(x + 0.5 * tol);
      if (sign_of(below) * sign_of(above) <= 0 && std::fabs(fx) < 1e-9) {
        out.root = x;
        out.lo = lo;
        out.hi = hi;
        out.residual = std::fabs(fx);
        return out;
      }
    }
    if (fx == 0.0) {
      lo = hi = x;
      continue;
    }
    if (sign_of(fx) == sign_of(f_hi)) {
      hi = x;
      f_hi = fx;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    } else {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    }
  }
  throw NonConvergence(std::string(to_string(kind)) + ": root solve did not converge");
}

const CriticalValue& CriticalReport::get(CriticalKind kind) const {
  switch (kind) {
    case CriticalKind::mu1: return mu1;
    case CriticalKind::mu2: return mu2;
    case CriticalKind::mu2_star: return mu2_star;
    case CriticalKind::nu1: return nu1;
    case CriticalKind::nu2: return nu2;
    case CriticalKind::nu2_star: return nu2_star;
  }
  throw InvalidConfig("unknown critical kind");
}

CriticalValue critical_value(CriticalKind kind, const PacketConfig& cfg) {
  CriticalValue v;
  v.kind = kind;
  if (kind == CriticalKind::mu1 || kind == CriticalKind::nu1) {
    try {
      v.value = critical_closed(kind, cfg);
    } catch (const DegenerateSpinor&) {
      v.value = kInf;
      v.divergent = true;
    }
    return v;
  }
  try {
    v.root = solve_critical(kind, cfg);
    v.value = v.root.root;
  } catch (const NoSignChange&) {
    v.value = kInf;
    v.divergent = true;
  }
  return v;
}

CriticalReport critical_report(const PacketConfig& x_cfg, const PacketConfig& y_cfg) {
  CriticalReport r;
  r.mu1 = critical_value(CriticalKind::mu1, x_cfg);
  r.mu2 = critical_value(CriticalKind::mu2, x_cfg);
  r.mu2_star = critical_value(CriticalKind::mu2_star, x_cfg);
  r.nu1 = critical_value(CriticalKind::nu1, y_cfg);
  r.nu2 = critical_value(CriticalKind::nu2, y_cfg);
  r.nu2_star = critical_value(CriticalKind::nu2_star, y_cfg);
  return r;
}

PacketConfig table_config(TableId table, double a, int n) {
  if (n < 0) throw InvalidConfig("table column n must be positive (0 for infinity)");
  const double reduced = n == 0 ? 0.0 : 1.2 / n;
  const double alpha = table == TableId::I ? reduced : 1.2;
  const double beta = table == TableId::I ? 1.2 : reduced;
  return PacketConfig::make(8.0, alpha, beta, a, std::nullopt, 1.0);
}

std::vector<TableCell> critical_table(TableId table) {
  const std::array<CriticalKind, 3> kinds =
      table == TableId::I ? std::array{CriticalKind::mu1, CriticalKind::mu2, CriticalKind::mu2_star}
                          : std::array{CriticalKind::nu1, CriticalKind::nu2, CriticalKind::nu2_star};
  std::vector<TableCell> cells;
  for (CriticalKind kind : kinds) {
    for (double a : kTableSpinors) {
      for (int n : kTableColumns) {
        cells.push_back({kind, a, n, critical_value(kind, table_config(table, a, n))});
      }
    }
  }
  return cells;
}

ShortTimeCoefficients short_time_limit(Observable obs, const PacketConfig& cfg) {
  const double v = cfg.v_f;
  const double g = cfg.spinor_z();
  const double h = cfg.spinor_x();
  const double mu = cfg.inv_lambda_c;
  const double y_curv = v * v * (-g * cfg.alpha + h * mu);
  const double x_curv = v * v * g * cfg.beta;
  switch (obs) {
    case Observable::X: return {0.0, h * v, x_curv};
    case Observable::Y: return {0.0, 0.0, y_curv};
    case Observable::X2:
    case Observable::Y2: return {0.5 * cfg.d * cfg.d, 0.0, v * v};
    case Observable::VX: return {h * v, 2.0 * x_curv, 0.0};
    case Observable::VY: return {0.0, 2.0 * y_curv, 0.0};
  }
  return {};
}

double long_time_slope(Observable obs, const PacketConfig& cfg, const QuadSettings& settings) {
  cfg.validate();
  const Drift dr = drift_coefficients(cfg, settings);
  switch (obs) {
    case Observable::X:
    case Observable::VX: return cfg.v_f * dr.x;
    case Observable::Y:
    case Observable::VY: return cfg.v_f * dr.y;
    case Observable::X2: return dr.xx;
    case Observable::Y2: return dr.yy;
  }
  return kNaN;
}

double spreading_part(Observable obs, double t, const PacketConfig& cfg, const QuadSettings& settings) {
  check_time(t);
  const double tau = cfg.v_f * t;
  switch (obs) {
    case Observable::X:
    case Observable::Y: return t * long_time_slope(obs, cfg, settings);
    case Observable::X2:
    case Observable::Y2: return tau * tau * long_time_slope(obs, cfg, settings);
    case Observable::VX:
    case Observable::VY: return long_time_slope(obs, cfg, settings);
  }
  return kNaN;
}

QuadResult gapless_x(double t, const PacketConfig& cfg, const QuadSettings& settings) {
  require_gapless_reference(cfg);
  check_time(t);
  const double bd = cfg.beta * cfg.d;
  const double w = 2.0 * cfg.v_f * t / cfg.d;
  QuadResult r = integrate_halfline(
      [&](double q) {
        const double dq = q - bd;
        return std::exp(-dq * dq) * std::cos(w * q) * bessel_i_scaled(1, 2.0 * bd * q);
      },
      halfline_settings(settings), bd, w);
  const double b2 = bd * bd;
  r.value = -std::expm1(-b2) / (2.0 * cfg.beta) - cfg.d * r.value;
  r.est_error *= cfg.d;
  return r;
}

QuadResult gapless_x2(double t, const PacketConfig& cfg, const QuadSettings& settings) {
  require_gapless_reference(cfg);
  check_time(t);
  const double bd = cfg.beta * cfg.d;
  const double w = 2.0 * cfg.v_f * t / cfg.d;
  QuadResult r = integrate_halfline(
      [&](double q) {
        const double dq = q - bd;
        const double z = 2.0 * bd * q;
        return std::exp(-dq * dq) * one_minus_cos_over_q2(w, q) *
               (q * bessel_i_scaled(0, z) - bessel_i_scaled(1, z) / (2.0 * bd));
      },
      halfline_settings(settings), bd, w);
  const double b2 = bd * bd;
  const double tau = cfg.v_f * t;
  const double d2 = cfg.d * cfg.d;
  r.value = 0.5 * d2 + tau * tau / (2.0 * b2) * (-std::expm1(-b2)) + d2 * r.value;
  r.est_error *= d2;
  return r;
}

QuadResult gapless_y2(double t, const PacketConfig& cfg, const QuadSettings& settings) {
  require_gapless_reference(cfg);
  check_time(t);
  const double bd = cfg.beta * cfg.d;
  const double w = 2.0 * cfg.v_f * t / cfg.d;
  QuadResult r = integrate_halfline(
      [&](double q) {
        const double dq = q - bd;
        return std::exp(-dq * dq) * one_minus_cos_over_q2(w, q) * bessel_i_scaled(1, 2.0 * bd * q);
      },
      halfline_settings(settings), bd, w);
  const double b2 = bd * bd;
  const double tau = cfg.v_f * t;
  const double pre = cfg.d / (2.0 * cfg.beta);
  r.value = 0.5 * cfg.d * cfg.d + tau * tau * (1.0 + std::expm1(-b2) / (2.0 * b2)) + pre * r.value;
  r.est_error *= pre;
  return r;
}

double late_time(const PacketConfig& cfg) { return 1e3 * cfg.d / cfg.v_f; }

double zb_period(const PacketConfig& cfg) {
  const double mu = cfg.inv_lambda_c;
  const double e0 = std::sqrt(cfg.alpha * cfg.alpha + cfg.beta * cfg.beta + mu * mu);
  if (!(e0 > 0.0)) throw InvalidConfig("ZB period undefined at zero center energy");
  return std::numbers::pi / (cfg.v_f * e0);
}

std::vector<double> late_window(const PacketConfig& cfg, int samples, double periods) {
  if (samples < 1) throw InvalidConfig("late window needs at least one sample");
  const double start = late_time(cfg);
  const double period = zb_period(cfg);
  // Equal spacing across the window plus a stagger of period/samples, so the
  // samples also cover one ZB cycle evenly.
  std::vector<double> ts;
  ts.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    ts.push_back(start + k * (periods * period / samples + period / samples));
  }
  return ts;
}

}  // namespace zitter
