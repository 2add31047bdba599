// Copyright 2026 The quasiwit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "quasiwit/dynamics.hpp"
#include "quasiwit/frames.hpp"
#include "quasiwit/phase_space.hpp"
#include "quasiwit/qstate.hpp"

namespace {

using namespace quasiwit;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

DampedOscillatorParams driven_params() { return {10.0 * kPi, 2.0 * kPi, 2.0 * kPi}; }

// sigma_ii in [0.5, 2] (rotated), |d| <= 4.
GaussianState sandwich_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> sig(0.5, 2.0);
  std::uniform_real_distribution<double> rad(0.0, 4.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  const double r = rad(rng);
  const double a = ang(rng);
  const Mat2 rot = rotation(ang(rng));
  Mat2 c = rot * Eigen::Vector2d(sig(rng), sig(rng)).asDiagonal() * rot.transpose();
  c(1, 0) = c(0, 1);
  return {r * Vec2(std::cos(a), std::sin(a)), c};
}

Outcome inequality_chain() {
  const QuantumFrame frame = sic_qubit_frame();
  std::mt19937_64 rng(1001);
  double worst = 1.0;
  for (int k = 0; k < 1000; ++k) {
    const auto b = inequality_report(random_density_matrix(2, rng), random_density_matrix(2, rng), frame);
    worst = std::min({worst, b.d_tr - b.d_p, b.d_f - b.d_tr});
  }
  return {worst >= -1e-9, fmt("min slack %.3e over 1000 pairs (need >= -1e-9)", worst)};
}

Outcome cv_sandwich() {
  std::mt19937_64 rng(1002);
  double worst = 1.0;
  int max_n = 0;
  for (int k = 0; k < 100; ++k) {
    const GaussianState a = sandwich_state(rng);
    const GaussianState b = sandwich_state(rng);
    const int n = std::min(80, std::max(suggested_fock_cutoff(a), suggested_fock_cutoff(b)));
    max_n = std::max(max_n, n);
    const double tr = trace_distance(to_fock_matrix(a, n), to_fock_matrix(b, n));
    const double p = kolmogorov_distance_cv(a, b, DensityKind::P, 1e-6);
    const double q = kolmogorov_distance_cv(a, b, DensityKind::Q, 1e-6);
    worst = std::min({worst, tr - q, p - tr});
  }
  return {worst >= -1e-4, fmt("min slack %.3e over 100 pairs, n_max <= %.0f (need >= -1e-4)", worst, max_n)};
}

Outcome reference_witness() {
  const auto p = driven_params();
  const auto series = witness_scan({Vec2(6.0, 0.0), 2.0 * Mat2::Identity()},
                                   {Vec2(-6.0, 0.0), 2.0 * Mat2::Identity()}, p, {0.0, 0.5, 1.0});
  const double n = n_min(series, 0.5, 1.0);
  // Same run with the displacement expressed in units of a + a^dagger.
  const double r = 6.0 / std::sqrt(2.0);
  const auto alt = witness_scan({Vec2(r, 0.0), 2.0 * Mat2::Identity()}, {Vec2(-r, 0.0), 2.0 * Mat2::Identity()}, p,
                                {0.0, 0.5, 1.0});
  return {std::abs(n - 0.876) <= 0.01,
          fmt("N_min = %.6f (target 0.876 +- 0.01); dkol_P(0.5) = %.6f, dkol_Q(1.0) = %.6f", n, series.dkol_p[1],
              series.dkol_q[2]) +
              fmt("; info: d = +-6/sqrt(2) gives %.6f", n_min(alt, 0.5, 1.0))};
}

Outcome contraction() {
  std::mt19937_64 rng(1004);
  double worst = -1.0;
  int count = 0;
  for (int i = 0; i < 200; ++i) {
    const GaussianState a = sandwich_state(rng);
    const GaussianState b = sandwich_state(rng);
    const double before = kolmogorov_distance_cv(a, b, DensityKind::P, 1e-6);
    for (int j = 0; j < 50; ++j) {
      const GaussianChannel ch = random_channel(rng);
      const double after = kolmogorov_distance_cv(apply_channel(a, ch), apply_channel(b, ch), DensityKind::P, 1e-6);
      worst = std::max(worst, after - before);
      ++count;
    }
  }
  return {worst <= 1e-5, fmt("max increase %.3e over %.0f pair-channel combinations (need <= 1e-5)", worst, count)};
}

Outcome ode_agreement() {
  const auto p = driven_params();
  const GaussianState s(Vec2(6.0, 0.0), 2.0 * Mat2::Identity());
  double worst = 0.0;
  for (int k = 0; k <= 40; ++k) {
    const double t = 0.05 * k;
    const GaussianState a = evolve(s, t, p);
    const GaussianState b = ode_oracle(s, t, p, 100000);
    worst = std::max({worst, (a.displacement() - b.displacement()).cwiseAbs().maxCoeff(),
                      (a.sigma_p() - b.sigma_p()).cwiseAbs().maxCoeff()});
  }
  return {worst < 1e-6, fmt("max |evolve - ode| = %.3e over t in [0, 2] (need < 1e-6)", worst)};
}

Outcome entropy_narrowing() {
  auto mean_gap = [](char scenario, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto sc = GaussianScenario::preset(scenario);
    double sum = 0.0;
    for (int k = 0; k < 200; ++k) {
      const GaussianState a = random_gaussian_state(sc, rng);
      const GaussianState b = random_gaussian_state(sc, rng);
      sum += kolmogorov_distance_cv(a, b, DensityKind::P, 1e-6) - kolmogorov_distance_cv(a, b, DensityKind::Q, 1e-6);
    }
    return sum / 200.0;
  };
  const double a = mean_gap('a', 1006);
  const double d = mean_gap('d', 1007);
  return {d < a && a >= -1e-6 && d >= -1e-6, fmt("mean gap (a) = %.6f, (d) = %.6f", a, d)};
}

Outcome coherent_oracle() {
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> rad(0.0, 3.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    auto draw = [&] {
      const double r = rad(rng);
      const double a = ang(rng);
      return Vec2(r * std::cos(a), r * std::sin(a));
    };
    const Vec2 x1 = draw();
    const Vec2 x2 = draw();
    const auto a = to_fock_matrix(regularized(GaussianState::coherent(x1)), 40);
    const auto b = to_fock_matrix(regularized(GaussianState::coherent(x2)), 40);
    const double exact = std::sqrt(1.0 - std::exp(-0.5 * (x1 - x2).squaredNorm()));
    worst = std::max(worst, std::abs(trace_distance(a, b) - exact));
  }
  return {worst < 1e-5, fmt("max deviation %.3e over 20 pairs (need < 1e-5)", worst)};
}

Outcome sweep_edges() {
  const GaussianState s1(Vec2(6.0, 0.0), 2.0 * Mat2::Identity());
  const GaussianState s2(Vec2(-6.0, 0.0), 2.0 * Mat2::Identity());
  const std::vector<double> pm{0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95};
  const std::vector<double> mo{0.05, 0.5, 1.0, 2.0, 4.0, 10.0};
  const auto m = n_min_sweep(pm, mo, s1, s2, 2.0 * kPi);
  const double corner = m(6, 0);
  const double edge = m.col(0).maxCoeff();
  const double interior = m(1, 5);
  std::string row;
  for (Index j = 0; j < m.cols(); ++j) row += fmt(" %.4f", m(6, j));
  return {corner < 0.05 && edge < 0.05 && interior > 0.8,
          fmt("N_min(0.95, 0.05) = %.2e, max over gamma_minus/Omega = 0.05 row = %.2e, N_min(0.2, 10) = %.4f", corner,
              edge, interior) +
              "; info: gamma_plus/gamma_minus = 0.95 row:" + row};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*check)();
    double limit_seconds;  // 0: no runtime limit
  };
  const std::vector<Criterion> criteria{
      {"1 inequality chain (qubit SIC frame)", inequality_chain, 5.0},
      {"2 CV sandwich dkol_Q <= d_tr <= dkol_P", cv_sandwich, 300.0},
      {"3 reference witness N_min on [0.5, 1.0]", reference_witness, 60.0},
      {"4 P-distance contraction under Gaussian channels", contraction, 0.0},
      {"5 closed-form evolution vs moment ODE", ode_agreement, 0.0},
      {"6 entropy narrowing of dkol_P - dkol_Q", entropy_narrowing, 0.0},
      {"7 coherent-state trace distance oracle", coherent_oracle, 0.0},
      {"8 sweep edge decay and interior maximum", sweep_edges, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.limit_seconds > 0.0) {
      timing += fmt(" (limit %.0f s)", c.limit_seconds);
      if (secs >= c.limit_seconds) {
        o.pass = false;
        o.detail += "; runtime limit exceeded";
      }
    }
    std::printf("[%s] %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
