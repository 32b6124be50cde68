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

#include "zitter/quadrature.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "zitter/compensated.hpp"
#include "zitter/errors.hpp"

namespace zitter {

namespace {

constexpr std::array<double, 6> kGlNodes = {-0.9324695142031520278, -0.6612093864662645137, -0.2386191860831969086,
                                            0.2386191860831969086,  0.6612093864662645137,  0.9324695142031520278};
constexpr std::array<double, 6> kGlWeights = {0.1713244923791703450, 0.3607615730481386076, 0.4679139345726910474,
                                              0.4679139345726910474, 0.3607615730481386076, 0.1713244923791703450};

constexpr int kPanelsPerChunk = 16;
constexpr double kMaxPanelPhase = std::numbers::pi / 4.0;

int phase_panels(double phase_rate, double phase_span) {
  if (!(phase_rate > 0.0)) return 0;
  const double need = std::ceil(phase_rate * phase_span / kMaxPanelPhase);
  if (need > 1e9) throw NonConvergence("phase too large for the radial rule");
  return static_cast<int>(need);
}

bool within_tolerance(double err, double value, const QuadSettings& s) {
  return err <= std::max(s.abs_tol, s.rel_tol * std::fabs(value));
}

void validate_settings(const QuadSettings& s) {
  if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0)) throw InvalidConfig("quadrature tolerances must be positive");
  if (s.max_level < 1) throw InvalidConfig("quadrature max_level must be at least 1");
  if (!(s.truncation_radius > 0.0)) throw InvalidConfig("truncation radius must be positive");
  if (s.min_panels < 1 || s.min_angular < 4) throw InvalidConfig("quadrature base sizes too small");
}

// Geometry of the polar rule for one packet.
struct PolarGeometry {
  double d2;
  double rho;      // |k0|
  double phi0;     // direction of k0
  double r_lo;
  double r_hi;
  double cut2;     // (R/d)^2
  double prefactor;
};

PolarGeometry make_geometry(const PacketConfig& cfg, const QuadSettings& s) {
  PolarGeometry g{};
  g.d2 = cfg.d * cfg.d;
  g.rho = std::hypot(cfg.alpha, cfg.beta);
  g.phi0 = std::atan2(cfg.beta, cfg.alpha);
  const double cut = s.truncation_radius / cfg.d;
  g.cut2 = cut * cut;
  g.r_lo = std::max(0.0, g.rho - cut);
  g.r_hi = g.rho + cut;
  g.prefactor = g.d2 / std::numbers::pi;
  return g;
}

// Angular trapezoid for one radius: nodes phi0 + 2 pi j / n for j in [j_lo, j_hi].
struct Ring {
  int n = 0;
  int j_lo = 0;
  int j_hi = -1;
  int count() const { return j_hi - j_lo + 1; }
};

Ring make_ring(double r, const PolarGeometry& g, const QuadSettings& s, int scale) {
  Ring ring;
  const double kappa = 2.0 * g.d2 * r * g.rho;
  ring.n = (s.min_angular + 8 * static_cast<int>(std::ceil(std::sqrt(kappa)))) * scale;
  if (g.rho == 0.0) {
    ring.j_lo = 0;
    ring.j_hi = ring.n - 1;
    return ring;
  }
  const double c_star = (r * r + g.rho * g.rho - g.cut2) / (2.0 * r * g.rho);
  if (c_star <= -1.0) {
    ring.j_lo = 0;
    ring.j_hi = ring.n - 1;
    return ring;
  }
  if (c_star > 1.0) return ring;
  const double half = std::acos(c_star);
  const int j = static_cast<int>(std::floor(half * ring.n / (2.0 * std::numbers::pi)));
  if (2 * j + 1 >= ring.n) {
    ring.j_lo = 0;
    ring.j_hi = ring.n - 1;
  } else {
    ring.j_lo = -j;
    ring.j_hi = j;
  }
  return ring;
}

struct LevelPlan {
  int panels;
  int angular_scale;
};

struct ChunkResult {
  std::vector<CompensatedSum> sums;
  std::int64_t evaluations = 0;
};

std::int64_t count_level(const PolarGeometry& g, const QuadSettings& s, const LevelPlan& plan) {
  const double h = (g.r_hi - g.r_lo) / plan.panels;
  std::int64_t total = 0;
  for (int p = 0; p < plan.panels; ++p) {
    const double mid = g.r_lo + (p + 0.5) * h;
    for (double x : kGlNodes) total += make_ring(mid + 0.5 * h * x, g, s, plan.angular_scale).count();
  }
  return total;
}

void run_chunk(const PacketIntegrand& f, std::size_t components, const PacketConfig& cfg, const PolarGeometry& g,
               const QuadSettings& s, const LevelPlan& plan, int first_panel, int last_panel, ChunkResult& out) {
  out.sums.assign(components, CompensatedSum{});
  std::vector<double> buf(components);
  std::vector<double> ring_sum(components);
  const double h = (g.r_hi - g.r_lo) / plan.panels;
  for (int p = first_panel; p < last_panel; ++p) {
    const double mid = g.r_lo + (p + 0.5) * h;
    for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
      const double r = mid + 0.5 * h * kGlNodes[q];
      const Ring ring = make_ring(r, g, s, plan.angular_scale);
      if (ring.count() <= 0) continue;
      std::fill(ring_sum.begin(), ring_sum.end(), 0.0);
      const double step = 2.0 * std::numbers::pi / ring.n;
      for (int j = ring.j_lo; j <= ring.j_hi; ++j) {
        const double phi = g.phi0 + step * j;
        const Wavevector k{r * std::cos(phi), r * std::sin(phi)};
        const double w = gaussian_weight(k, cfg);
        f(k, buf);
        for (std::size_t c = 0; c < components; ++c) {
          if (!std::isfinite(buf[c])) {
            throw InvalidKernel("non-finite integrand at k = (" + std::to_string(k.kx) + ", " +
                                std::to_string(k.ky) + ")");
          }
          ring_sum[c] += w * buf[c];
        }
      }
      out.evaluations += ring.count();
      const double outer = g.prefactor * r * 0.5 * h * kGlWeights[q] * step;
      for (std::size_t c = 0; c < components; ++c) out.sums[c] += outer * ring_sum[c];
    }
  }
}

std::vector<double> run_level(const PacketIntegrand& f, std::size_t components, const PacketConfig& cfg,
                              const PolarGeometry& g, const QuadSettings& s, const LevelPlan& plan,
                              std::int64_t& evaluations) {
  const int chunks = (plan.panels + kPanelsPerChunk - 1) / kPanelsPerChunk;
  std::vector<ChunkResult> results(chunks);
  auto work = [&](int c) {
    const int first = c * kPanelsPerChunk;
    const int last = std::min(plan.panels, first + kPanelsPerChunk);
    run_chunk(f, components, cfg, g, s, plan, first, last, results[c]);
  };

  const int workers = std::min(std::max(1, s.threads), chunks);
  if (workers <= 1) {
    for (int c = 0; c < chunks; ++c) work(c);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto loop = [&] {
      for (;;) {
        const int c = next.fetch_add(1);
        if (c >= chunks) return;
        try {
          work(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(chunks);
          return;
        }
      }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(loop);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  // Fixed reduction order over chunks keeps results independent of the thread count.
  std::vector<CompensatedSum> total(components);
  for (const auto& chunk : results) {
    evaluations += chunk.evaluations;
    for (std::size_t c = 0; c < components; ++c) total[c] += chunk.sums[c].value();
  }
  std::vector<double> values(components);
  for (std::size_t c = 0; c < components; ++c) values[c] = total[c].value();
  return values;
}

}  // namespace

MultiQuadResult integrate_packet_weighted(const PacketIntegrand& f, std::size_t components, const PacketConfig& cfg,
                                          const QuadSettings& settings, double phase_rate) {
  validate_settings(settings);
  if (components == 0) throw InvalidConfig("integrand must have at least one component");
  const PolarGeometry g = make_geometry(cfg, settings);
  const double mu = cfg.inv_lambda_c;
  const double span = std::sqrt(g.r_hi * g.r_hi + mu * mu) - std::sqrt(g.r_lo * g.r_lo + mu * mu);
  const int base_panels = std::max(settings.min_panels, phase_panels(phase_rate, span));

  MultiQuadResult result;
  result.est_error.assign(components, std::numeric_limits<double>::infinity());
  std::vector<double> previous;
  for (int level = 0; level <= settings.max_level; ++level) {
    const LevelPlan plan{base_panels << level, 1 << level};
    if (plan.panels <= 0 || base_panels > (std::numeric_limits<int>::max() >> level)) break;
    const std::int64_t planned = count_level(g, settings, plan);
    if (result.evaluations + planned > settings.max_evaluations) break;

    std::vector<double> current = run_level(f, components, cfg, g, settings, plan, result.evaluations);
    result.levels = level + 1;
    result.value = current;
    if (!previous.empty()) {
      bool all_ok = true;
      double worst = 0.0;
      for (std::size_t c = 0; c < components; ++c) {
        result.est_error[c] = 2.0 * std::fabs(current[c] - previous[c]);
        worst = std::max(worst, result.est_error[c]);
        all_ok = all_ok && within_tolerance(result.est_error[c], current[c], settings);
      }
      result.error_history.push_back(worst);
      if (all_ok) {
        result.converged = true;
        return result;
      }
    }
    previous = std::move(current);
  }
  if (result.value.empty()) {
    throw NonConvergence("quadrature budget of " + std::to_string(settings.max_evaluations) +
                         " evaluations too small for a single level");
  }
  return result;
}

QuadResult integrate_packet_weighted(const ScalarIntegrand& f, const PacketConfig& cfg, const QuadSettings& settings,
                                     double phase_rate) {
  const auto multi = integrate_packet_weighted([&f](Wavevector k, std::span<double> out) { out[0] = f(k); }, 1,
                                               cfg, settings, phase_rate);
  QuadResult r;
  r.value = multi.value[0];
  r.est_error = multi.est_error[0];
  r.evaluations = multi.evaluations;
  r.converged = multi.converged;
  r.levels = multi.levels;
  r.error_history = multi.error_history;
  return r;
}

double oracle_riemann(const ScalarIntegrand& f, const PacketConfig& cfg, int grid_n, double radius) {
  if (grid_n < 64) throw InvalidConfig("oracle_riemann needs grid_n >= 64");
  const double half = radius / cfg.d;
  const double h = 2.0 * half / grid_n;
  CompensatedSum sum;
  for (int i = 0; i < grid_n; ++i) {
    const double kx = cfg.alpha - half + (i + 0.5) * h;
    for (int j = 0; j < grid_n; ++j) {
      const Wavevector k{kx, cfg.beta - half + (j + 0.5) * h};
      sum += gaussian_weight(k, cfg) * f(k);
    }
  }
  return cfg.d * cfg.d / std::numbers::pi * h * h * sum.value();
}

QuadResult integrate_halfline(const std::function<double(double)>& g, const QuadSettings& settings, double peak,
                              double phase_rate) {
  validate_settings(settings);
  const double q_max = std::max(0.0, peak) + settings.truncation_radius;
  const int base_panels = std::max(settings.min_panels, phase_panels(phase_rate, q_max));

  QuadResult result;
  result.est_error = std::numeric_limits<double>::infinity();
  double previous = 0.0;
  double largest = 0.0;
  for (int level = 0; level <= settings.max_level; ++level) {
    const int panels = base_panels << level;
    if (result.evaluations + 6LL * panels > settings.max_evaluations) break;
    const double h = q_max / panels;
    CompensatedSum sum;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * h;
      for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
        const double v = g(mid + 0.5 * h * kGlNodes[q]);
        if (!std::isfinite(v)) throw InvalidKernel("non-finite half-line integrand");
        largest = std::max(largest, std::fabs(v));
        sum += 0.5 * h * kGlWeights[q] * v;
      }
    }
    result.evaluations += 6LL * panels;
    result.levels = level + 1;
    const double current = sum.value();
    result.value = current;
    if (level > 0) {
      result.est_error = 2.0 * std::fabs(current - previous);
      result.error_history.push_back(result.est_error);
      if (within_tolerance(result.est_error, current, settings)) {
        result.converged = true;
        break;
      }
    }
    previous = current;
  }
  const double tail = g(q_max);
  result.evaluations += 1;
  if (std::fabs(tail) > 1e-16 * largest) result.converged = false;
  return result;
}

}  // namespace zitter
