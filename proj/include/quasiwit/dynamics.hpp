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

// Gaussian dynamics of the damped oscillator with modulated rates
// gamma_pm(t) = gamma_pm sin(Omega t) (interaction picture), Gaussian
// channels, and the P/Q Kolmogorov non-Markovianity witness.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quasiwit/error.hpp"
#include "quasiwit/parallel.hpp"
#include "quasiwit/phase_space.hpp"

namespace quasiwit {

enum class RateModulation {
  Sinusoidal,  // gamma_pm(t) = gamma_pm sin(Omega t)
  Constant,    // gamma_pm(t) = gamma_pm; CP-divisible, hence Markovian
};

struct DampedOscillatorParams {
  double gamma_minus = 0.0;
  double gamma_plus = 0.0;
  double omega_drive = 1.0;
  RateModulation modulation = RateModulation::Sinusoidal;

  double gamma0() const { return gamma_minus - gamma_plus; }

  void validate() const {
    if (!(gamma_plus >= 0.0) || !(gamma_minus >= 0.0)) throw ConfigError("rates must be nonnegative");
    if (gamma_minus < gamma_plus) throw ConfigError("gamma_minus must not be smaller than gamma_plus");
    if (!(omega_drive > 0.0)) throw ConfigError("drive frequency must be positive");
  }

  /// gamma_plus / gamma_minus = ratio_pm, gamma_minus / Omega = ratio_mo.
  static DampedOscillatorParams from_ratios(double ratio_pm, double ratio_mo, double omega) {
    return {ratio_mo * omega, ratio_pm * ratio_mo * omega, omega, RateModulation::Sinusoidal};
  }

  double modulation_at(double t) const {
    return modulation == RateModulation::Sinusoidal ? std::sin(omega_drive * t) : 1.0;
  }

  double period() const { return 2.0 * std::numbers::pi / omega_drive; }
};

/// D(t) = exp[-(gamma0 / 2 Omega)(1 - cos Omega t)] (exp[-gamma0 t / 2] for constant rates).
inline double decay_factor(double t, const DampedOscillatorParams& p) {
  if (t < 0.0) throw ConfigError("decay_factor: t must be nonnegative");
  if (p.modulation == RateModulation::Constant) return std::exp(-0.5 * p.gamma0() * t);
  return std::exp(-p.gamma0() / (2.0 * p.omega_drive) * (1.0 - std::cos(p.omega_drive * t)));
}

/// Linear map X and noise Y acting on the Wigner covariance and displacement:
/// sigma -> X sigma X^T + Y, d -> X d.
class GaussianChannel {
 public:
  GaussianChannel(Mat2 x, Mat2 y) : x_(std::move(x)), y_(std::move(y)) {
    if (std::abs(y_(0, 1) - y_(1, 0)) > 1e-12) throw InvalidStateError("GaussianChannel: Y is not symmetric");
    Mat2 omega;
    omega << 0.0, 1.0, -1.0, 0.0;
    const Eigen::Matrix2cd h =
        y_.cast<Complex>() + Complex(0.0, 1.0) * (omega - x_ * omega * x_.transpose()).cast<Complex>();
    const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lowest < -1e-10) {
      throw InvalidStateError("GaussianChannel: not completely positive (eigenvalue " + std::to_string(lowest) + ")");
    }
  }

  static GaussianChannel identity() { return {Mat2::Identity(), Mat2::Zero()}; }

  /// Beam splitter with transmissivity eta coupling to a thermal bath of n photons.
  static GaussianChannel attenuator(double eta, double n_thermal = 0.0) {
    return {std::sqrt(eta) * Mat2::Identity(), (1.0 - eta) * (2.0 * n_thermal + 1.0) * Mat2::Identity()};
  }

  const Mat2& x() const { return x_; }
  const Mat2& y() const { return y_; }

 private:
  Mat2 x_;
  Mat2 y_;
};

/// Image of a Gaussian state. Channels whose output has a non-positive
/// P-covariance (squeezing) are rejected since that output has no regular
/// P-function.
inline GaussianState apply_channel(const GaussianState& s, const GaussianChannel& ch) {
  Mat2 sigma = ch.x() * s.wigner_covariance() * ch.x().transpose() + ch.y();
  sigma(1, 0) = sigma(0, 1);
  return {ch.x() * s.displacement(), sigma - Mat2::Identity()};
}

/// Random CP channel: sqrt(eta) times a rotation plus (1 - eta + n) 1 noise.
template <class Rng>
GaussianChannel random_channel(Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> transmissivity(0.2, 1.0);
  std::uniform_real_distribution<double> noise(0.0, 2.0);
  const double eta = transmissivity(rng);
  return {std::sqrt(eta) * rotation(angle(rng)), (1.0 - eta + noise(rng)) * Mat2::Identity()};
}

namespace detail {
inline void require_damping(const DampedOscillatorParams& p) {
  p.validate();
  if (!(p.gamma0() > 0.0)) {
    throw ConfigError("gamma_minus - gamma_plus must be positive for the closed-form evolution");
  }
}
}  // namespace detail

/// The dynamical map at time t as a Gaussian channel: X = D 1,
/// Y = (1 - D^2)(1 + 2 gamma_plus / gamma0) 1.
inline GaussianChannel evolution_channel(double t, const DampedOscillatorParams& p) {
  detail::require_damping(p);
  const double d = decay_factor(t, p);
  const double y = (1.0 - d * d) * (1.0 + 2.0 * p.gamma_plus / p.gamma0());
  return {d * Mat2::Identity(), y * Mat2::Identity()};
}

/// d(t) = d(0) D, sigma_P(t) = sigma_P(0) D^2 + (2 gamma_plus / gamma0)(1 - D^2) 1.
inline GaussianState evolve(const GaussianState& s, double t, const DampedOscillatorParams& p) {
  detail::require_damping(p);
  const double d = decay_factor(t, p);
  const double d2 = d * d;
  Mat2 sigma = s.sigma_p() * d2 + (2.0 * p.gamma_plus / p.gamma0()) * (1.0 - d2) * Mat2::Identity();
  sigma(1, 0) = sigma(0, 1);
  return {s.displacement() * d, sigma};
}

/// Fourth-order Runge-Kutta integration of the moment equations
///   d<a>/dt      = -(g-(t) - g+(t))/2 <a>
///   d<a^2>/dt    = -(g-(t) - g+(t)) <a^2>
///   d<a^+ a>/dt  = -g-(t) <a^+ a> + g+(t)(<a^+ a> + 1)
/// mapped back to (d, sigma_P). Independent of the closed form in evolve().
inline GaussianState ode_oracle(const GaussianState& s, double t, const DampedOscillatorParams& p, long steps) {
  p.validate();
  if (steps < 1000) throw ConfigError("ode_oracle: at least 1000 steps required");
  if (t < 0.0) throw ConfigError("ode_oracle: t must be nonnegative");
  const Mat2& sp = s.sigma_p();
  const double rt2 = std::sqrt(2.0);

  struct Moments {
    Complex a, a2;
    double n;
  };
  const Complex a0(s.displacement().x() / rt2, s.displacement().y() / rt2);
  const Complex var0(0.25 * (sp(0, 0) - sp(1, 1)), 0.5 * sp(0, 1));
  Moments y{a0, var0 + a0 * a0, 0.25 * sp.trace() + std::norm(a0)};

  auto rhs = [&p](double tau, const Moments& m) {
    const double g = p.modulation_at(tau);
    const double gm = p.gamma_minus * g;
    const double gp = p.gamma_plus * g;
    return Moments{-0.5 * (gm - gp) * m.a, -(gm - gp) * m.a2, -gm * m.n + gp * (m.n + 1.0)};
  };
  auto axpy = [](const Moments& m, double h, const Moments& k) {
    return Moments{m.a + h * k.a, m.a2 + h * k.a2, m.n + h * k.n};
  };

  const double h = t / static_cast<double>(steps);
  for (long i = 0; i < steps; ++i) {
    const double tau = i * h;
    const Moments k1 = rhs(tau, y);
    const Moments k2 = rhs(tau + 0.5 * h, axpy(y, 0.5 * h, k1));
    const Moments k3 = rhs(tau + 0.5 * h, axpy(y, 0.5 * h, k2));
    const Moments k4 = rhs(tau + h, axpy(y, h, k3));
    y = Moments{y.a + h / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a),
                y.a2 + h / 6.0 * (k1.a2 + 2.0 * k2.a2 + 2.0 * k3.a2 + k4.a2),
                y.n + h / 6.0 * (k1.n + 2.0 * k2.n + 2.0 * k3.n + k4.n)};
  }

  const Complex var = y.a2 - y.a * y.a;
  const double excess = y.n - std::norm(y.a);
  Mat2 sigma;
  sigma << 2.0 * excess + 2.0 * var.real(), 2.0 * var.imag(), 2.0 * var.imag(), 2.0 * excess - 2.0 * var.real();
  return {Vec2(rt2 * y.a.real(), rt2 * y.a.imag()), sigma};
}

struct WitnessSeries {
  std::vector<double> times;
  std::vector<double> dkol_p;
  std::vector<double> dkol_q;

  void validate() const {
    if (dkol_p.size() != times.size() || dkol_q.size() != times.size()) {
      throw DimensionError("WitnessSeries: columns differ in length");
    }
  }
};

namespace detail {
inline void validate_time_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("time grid is empty");
  if (std::abs(grid.front()) > 1e-12) throw ConfigError("time grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("time grid must be strictly ascending");
  }
}
}  // namespace detail

/// Equally spaced grid with `count` points on [0, stop].
inline std::vector<double> uniform_time_grid(double stop, std::size_t count) {
  if (count < 2 || !(stop > 0.0)) throw ConfigError("uniform_time_grid: need count >= 2 and stop > 0");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = stop * static_cast<double>(i) / static_cast<double>(count - 1);
  return grid;
}

/// Kolmogorov distances of P and Q functions of the evolved pair at each grid time.
inline WitnessSeries witness_scan(const GaussianState& s1, const GaussianState& s2, const DampedOscillatorParams& p,
                                  const std::vector<double>& t_grid, double tol = 1e-6, unsigned threads = 0) {
  detail::validate_time_grid(t_grid);
  detail::require_damping(p);
  WitnessSeries series{t_grid, std::vector<double>(t_grid.size()), std::vector<double>(t_grid.size())};
  parallel_for(
      t_grid.size(),
      [&](std::size_t i) {
        const GaussianState e1 = evolve(s1, t_grid[i], p);
        const GaussianState e2 = evolve(s2, t_grid[i], p);
        series.dkol_p[i] = kolmogorov_distance_cv(e1, e2, DensityKind::P, tol);
        series.dkol_q[i] = kolmogorov_distance_cv(e1, e2, DensityKind::Q, tol);
      },
      threads);
  return series;
}

namespace detail {
inline std::size_t grid_index(const std::vector<double>& times, double t) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  }
  throw ConfigError("time " + std::to_string(t) + " is not on the grid");
}
}  // namespace detail

/// N_min = dkol_Q(t) - dkol_P(s); positive values certify non-Markovianity on [s, t].
inline double n_min(const WitnessSeries& series, double s, double t) {
  series.validate();
  if (s > t) throw ConfigError("n_min: s must not exceed t");
  return series.dkol_q[detail::grid_index(series.times, t)] - series.dkol_p[detail::grid_index(series.times, s)];
}

struct WitnessInterval {
  std::size_t s_index;
  std::size_t t_index;
  double n_min;
};

/// Pairs (local minimum of dkol_P, later local maximum of dkol_Q) detected
/// with a 3-point stencil. Grid end points count as extrema when they beat
/// their single neighbour; on plateaus the earliest point is taken.
inline std::vector<WitnessInterval> witness_intervals(const WitnessSeries& series) {
  series.validate();
  const auto& pv = series.dkol_p;
  const auto& qv = series.dkol_q;
  const std::size_t n = pv.size();
  std::vector<std::size_t> minima;
  std::vector<std::size_t> maxima;
  for (std::size_t i = 0; i < n; ++i) {
    const bool p_min = (i == 0 || pv[i] < pv[i - 1]) && (i + 1 == n || pv[i] <= pv[i + 1]);
    const bool q_max = (i == 0 || qv[i] > qv[i - 1]) && (i + 1 == n || qv[i] >= qv[i + 1]);
    if (p_min) minima.push_back(i);
    if (q_max) maxima.push_back(i);
  }
  std::vector<WitnessInterval> out;
  for (std::size_t s : minima) {
    for (std::size_t t : maxima) {
      if (t > s) out.push_back({s, t, qv[t] - pv[s]});
    }
  }
  return out;
}

/// Largest witnessed N_min over detected intervals; 0 when nothing is witnessed.
inline double best_n_min(const WitnessSeries& series) {
  double best = 0.0;
  for (const auto& w : witness_intervals(series)) best = std::max(best, w.n_min);
  return best;
}

struct SweepOptions {
  std::size_t points_per_period = 101;
  double tol = 1e-6;
  unsigned threads = 0;
};

/// best_n_min over one drive period for every (gamma_plus/gamma_minus,
/// gamma_minus/Omega) cell; rows follow ratio_pm, columns ratio_mo.
inline Eigen::MatrixXd n_min_sweep(const std::vector<double>& ratio_pm, const std::vector<double>& ratio_mo,
                                   const GaussianState& s1, const GaussianState& s2, double omega,
                                   const SweepOptions& options = {}) {
  for (double r : ratio_pm) {
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("n_min_sweep: gamma_plus/gamma_minus must lie in (0, 1)");
  }
  for (double r : ratio_mo) {
    if (!(r > 0.0)) throw ConfigError("n_min_sweep: gamma_minus/Omega must be positive");
  }
  if (!(omega > 0.0)) throw ConfigError("n_min_sweep: Omega must be positive");
  const auto rows = ratio_pm.size();
  const auto cols = ratio_mo.size();
  Eigen::MatrixXd out(static_cast<Index>(rows), static_cast<Index>(cols));
  const std::vector<double> grid = uniform_time_grid(2.0 * std::numbers::pi / omega, options.points_per_period);
  parallel_for(
      rows * cols,
      [&](std::size_t k) {
        const std::size_t i = k / cols;
        const std::size_t j = k % cols;
        const auto p = DampedOscillatorParams::from_ratios(ratio_pm[i], ratio_mo[j], omega);
        out(static_cast<Index>(i), static_cast<Index>(j)) = best_n_min(witness_scan(s1, s2, p, grid, options.tol, 1));
      },
      options.threads);
  return out;
}

/// Sum of the positive increments of dkol_P along the grid, a discrete form
/// of the integral of d/dt dkol_P over the times where it is positive.
inline double np_measure(const GaussianState& s1, const GaussianState& s2, const DampedOscillatorParams& p,
                         const std::vector<double>& t_grid, double tol = 1e-6, unsigned threads = 0) {
  detail::validate_time_grid(t_grid);
  detail::require_damping(p);
  std::vector<double> dkol(t_grid.size());
  parallel_for(
      t_grid.size(),
      [&](std::size_t i) {
        dkol[i] = kolmogorov_distance_cv(evolve(s1, t_grid[i], p), evolve(s2, t_grid[i], p), DensityKind::P, tol);
      },
      threads);
  double total = 0.0;
  for (std::size_t i = 1; i < dkol.size(); ++i) total += std::max(0.0, dkol[i] - dkol[i - 1]);
  return total;
}

}  // namespace quasiwit
