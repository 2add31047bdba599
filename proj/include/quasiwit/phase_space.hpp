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

// Single-mode Gaussian states in phase space x = (q, p), q = sqrt(2) Re(alpha).
// The Wigner covariance of a coherent state is the identity; the P- and
// Q-function covariances are sigma_P = sigma - 1 and sigma_Q = sigma + 1.
// Every s-ordered density has the form
//   W(x) = exp[-(x - d)^T S^{-1} (x - d)] / (pi sqrt(det S)).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "quasiwit/error.hpp"
#include "quasiwit/qstate.hpp"
#include "quasiwit/quadrature.hpp"

namespace quasiwit {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Regularization added to a singular P-covariance (exact coherent states).
inline constexpr double kPRegularization = 1e-6;

class GaussianState {
 public:
  GaussianState(Vec2 d, Mat2 sigma_p) : d_(std::move(d)), sigma_p_(std::move(sigma_p)) {
    if (!d_.allFinite() || !sigma_p_.allFinite()) throw InvalidStateError("GaussianState: non-finite parameters");
    if (std::abs(sigma_p_(0, 1) - sigma_p_(1, 0)) > 1e-12) {
      throw InvalidStateError("GaussianState: sigma_p is not symmetric");
    }
    const double lowest = Eigen::SelfAdjointEigenSolver<Mat2>(sigma_p_, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lowest < -1e-10) {
      throw InvalidStateError("GaussianState: sigma_p has negative eigenvalue " + std::to_string(lowest));
    }
  }

  /// Coherent state centred at x, optionally with an isotropic P-width epsilon.
  static GaussianState coherent(const Vec2& x, double epsilon = 0.0) {
    return {x, epsilon * Mat2::Identity()};
  }

  /// Displaced thermal state with mean excitation nbar (sigma_P = 2 nbar 1).
  static GaussianState thermal(double nbar, const Vec2& d = Vec2::Zero()) {
    return {d, 2.0 * nbar * Mat2::Identity()};
  }

  const Vec2& displacement() const { return d_; }
  const Mat2& sigma_p() const { return sigma_p_; }
  Mat2 wigner_covariance() const { return sigma_p_ + Mat2::Identity(); }
  Mat2 sigma_q() const { return sigma_p_ + 2.0 * Mat2::Identity(); }

  bool operator==(const GaussianState&) const = default;

 private:
  Vec2 d_;
  Mat2 sigma_p_;
};

inline Mat2 q_covariance(const GaussianState& s) { return s.sigma_q(); }

inline GaussianState regularized(const GaussianState& s, double epsilon = kPRegularization) {
  return {s.displacement(), s.sigma_p() + epsilon * Mat2::Identity()};
}

enum class DensityKind { P, Q };

inline const char* to_string(DensityKind kind) { return kind == DensityKind::P ? "P" : "Q"; }

inline Mat2 covariance(const GaussianState& s, DensityKind kind) {
  return kind == DensityKind::P ? s.sigma_p() : s.sigma_q();
}

namespace detail {

inline constexpr double kSingularEigenvalue = 1e-12;

/// Precomputed Gaussian density exp[-(x-d)^T S^{-1} (x-d)] / (pi sqrt(det S)).
class GaussianDensity {
 public:
  GaussianDensity(const Vec2& mean, const Mat2& cov) : mean_(mean) {
    const Eigen::Vector2d eig = Eigen::SelfAdjointEigenSolver<Mat2>(cov, Eigen::EigenvaluesOnly).eigenvalues();
    if (eig(0) <= kSingularEigenvalue) {
      throw InvalidStateError("singular covariance: the P-function is a delta distribution; regularize sigma_p");
    }
    const Mat2 inv = cov.inverse();
    a_ = inv(0, 0);
    b_ = inv(0, 1) + inv(1, 0);
    c_ = inv(1, 1);
    norm_ = 1.0 / (std::numbers::pi * std::sqrt(cov.determinant()));
    lambda_max_ = eig(1);
  }

  double operator()(double x, double y) const {
    const double u = x - mean_.x();
    const double v = y - mean_.y();
    return norm_ * std::exp(-(a_ * u * u + b_ * u * v + c_ * v * v));
  }

  double largest_eigenvalue() const { return lambda_max_; }

 private:
  Vec2 mean_;
  double a_, b_, c_, norm_, lambda_max_;
};

}  // namespace detail

/// P- or Q-function of a Gaussian state at the phase-space point x.
inline double eval_density(const GaussianState& s, DensityKind kind, const Vec2& x) {
  return detail::GaussianDensity(s.displacement(), covariance(s, kind))(x.x(), x.y());
}

/// Half the L1 distance between the P- (or Q-) functions of two Gaussian
/// states, integrated adaptively to absolute accuracy `tol`.
inline double kolmogorov_distance_cv(const GaussianState& s1, const GaussianState& s2, DensityKind kind,
                                     double tol = 1e-6) {
  if (!(tol > 0.0)) throw NumericalError("kolmogorov_distance_cv: tol must be positive");
  const Mat2 c1 = covariance(s1, kind);
  const Mat2 c2 = covariance(s2, kind);
  const detail::GaussianDensity g1(s1.displacement(), c1);
  const detail::GaussianDensity g2(s2.displacement(), c2);

  // Box: both means +- 8 sqrt(largest covariance eigenvalue). Breakpoints at
  // multiples of each marginal width keep narrow peaks resolved from the start.
  const std::array<const GaussianState*, 2> states{&s1, &s2};
  const std::array<const Mat2*, 2> covs{&c1, &c2};
  const std::array<double, 2> half{8.0 * std::sqrt(g1.largest_eigenvalue()), 8.0 * std::sqrt(g2.largest_eigenvalue())};
  std::array<std::vector<double>, 2> breaks;
  for (int axis = 0; axis < 2; ++axis) {
    double lo = std::min(s1.displacement()(axis) - half[0], s2.displacement()(axis) - half[1]);
    double hi = std::max(s1.displacement()(axis) + half[0], s2.displacement()(axis) + half[1]);
    auto& b = breaks[static_cast<std::size_t>(axis)];
    b = {lo, hi};
    for (std::size_t k = 0; k < 2; ++k) {
      const double centre = states[k]->displacement()(axis);
      const double width = std::sqrt(0.5 * (*covs[k])(axis, axis));
      for (double m : {-6.0, -3.0, -1.5, -0.5, 0.5, 1.5, 3.0, 6.0}) {
        const double x = centre + m * width;
        if (x > lo && x < hi) b.push_back(x);
      }
    }
    std::sort(b.begin(), b.end());
    const double min_gap = 1e-9 * (hi - lo);
    b.erase(std::unique(b.begin(), b.end(), [min_gap](double a, double c) { return c - a < min_gap; }), b.end());
    if (b.back() < hi) b.back() = hi;
  }

  auto integrand = [&g1, &g2](double x, double y) { return 0.5 * std::abs(g1(x, y) - g2(x, y)); };
  quadrature::CubatureOptions options;
  options.tol = tol;
  return quadrature::adaptive_cubature(integrand, breaks[0], breaks[1], options).value;
}

/// Rectangular integration domain with nx x ny cells.
struct PhaseSpaceGrid {
  double x_min, x_max, y_min, y_max;
  int nx = 64, ny = 64;

  void validate() const {
    if (!(x_min < x_max) || !(y_min < y_max)) throw ConfigError("PhaseSpaceGrid: empty domain");
    if (nx < 16 || ny < 16) throw ConfigError("PhaseSpaceGrid: nx and ny must be at least 16");
  }

  /// Grid centred on s extending `width` standard deviations of its widest density.
  static PhaseSpaceGrid around(const GaussianState& s, DensityKind kind, double width = 8.0, int cells = 64) {
    const Mat2 c = covariance(s, kind);
    const double sx = std::sqrt(0.5 * c(0, 0));
    const double sy = std::sqrt(0.5 * c(1, 1));
    const Vec2& d = s.displacement();
    return {d.x() - width * sx, d.x() + width * sx, d.y() - width * sy, d.y() + width * sy, cells, cells};
  }
};

/// Composite 8-point Gauss-Legendre integral of f over the grid cells.
template <class F>
double integrate(const PhaseSpaceGrid& grid, F&& f) {
  grid.validate();
  const quadrature::Rule rule = quadrature::gauss_legendre(8);
  const double dx = (grid.x_max - grid.x_min) / grid.nx;
  const double dy = (grid.y_max - grid.y_min) / grid.ny;
  double sum = 0.0;
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      const quadrature::Rect cell{grid.x_min + i * dx, grid.x_min + (i + 1) * dx, grid.y_min + j * dy,
                                  grid.y_min + (j + 1) * dy};
      sum += quadrature::tensor_integral(f, cell, rule);
    }
  }
  return sum;
}

inline double density_integral(const GaussianState& s, DensityKind kind, const PhaseSpaceGrid& grid) {
  const detail::GaussianDensity g(s.displacement(), covariance(s, kind));
  return integrate(grid, [&g](double x, double y) { return g(x, y); });
}

/// Modulus of the eigenvalues +-v of i Omega sigma, sigma the Wigner covariance.
inline double symplectic_eigenvalue(const GaussianState& s) {
  Mat2 omega;
  omega << 0.0, 1.0, -1.0, 0.0;
  const Eigen::Matrix2cd m = Complex(0.0, 1.0) * (omega * s.wigner_covariance()).cast<Complex>();
  const Eigen::Vector2cd ev = Eigen::ComplexEigenSolver<Eigen::Matrix2cd>(m, false).eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(1)));
}

/// Von Neumann entropy in bits.
inline double von_neumann_entropy(const GaussianState& s) {
  double v = symplectic_eigenvalue(s);
  if (v < 1.0 - 1e-8) throw InvalidStateError("von_neumann_entropy: symplectic eigenvalue below one");
  if (v <= 1.0 + 1e-10) return 0.0;
  const double plus = 0.5 * (v + 1.0);
  const double minus = 0.5 * (v - 1.0);
  return plus * std::log2(plus) - minus * std::log2(minus);
}

struct Interval {
  double lo, hi;
};

/// Uniform sampling ranges for random Gaussian states:
/// d = r (cos phi_d, sin phi_d), sigma_P = R(phi) diag(s0, s1) R(phi)^T.
struct GaussianScenario {
  Interval d;
  Interval phi_d;
  Interval sigma;
  Interval phi;

  void validate() const {
    for (const Interval& i : {d, phi_d, sigma, phi}) {
      if (!(i.lo <= i.hi)) throw ConfigError("GaussianScenario: interval with lo > hi");
    }
    if (d.lo < 0.0) throw ConfigError("GaussianScenario: displacement radius must be nonnegative");
    if (!(sigma.lo > 0.0)) throw ConfigError("GaussianScenario: covariance lower bound must be positive");
  }

  /// Sampling regimes a (low entropy) through d (high entropy).
  static GaussianScenario preset(char name) {
    constexpr double pi = std::numbers::pi;
    switch (name) {
      case 'a': return {{0.0, 2.0}, {-pi, pi}, {0.25, 1.0}, {0.0, 2.0 * pi}};
      case 'b': return {{0.0, 5.0}, {-0.5 * pi, 0.5 * pi}, {1.0, 2.0}, {0.0, 2.0 * pi}};
      case 'c': return {{0.0, 10.0}, {-0.05 * pi, 0.05 * pi}, {2.0, 5.0}, {0.0, 2.0 * pi}};
      case 'd': return {{0.0, 30.0}, {-0.005 * pi, 0.005 * pi}, {10.0, 20.0}, {0.0, 2.0 * pi}};
      default: throw ConfigError(std::string("unknown scenario '") + name + "'");
    }
  }
};

inline Mat2 rotation(double phi) {
  Mat2 r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

template <class Rng>
GaussianState random_gaussian_state(const GaussianScenario& sc, Rng& rng) {
  sc.validate();
  auto draw = [&rng](const Interval& i) { return std::uniform_real_distribution<double>(i.lo, i.hi)(rng); };
  const double r = draw(sc.d);
  const double phi_d = draw(sc.phi_d);
  const double s0 = draw(sc.sigma);
  const double s1 = draw(sc.sigma);
  const double phi = draw(sc.phi);
  const Mat2 rot = rotation(phi);
  Mat2 sigma = rot * Eigen::Vector2d(s0, s1).asDiagonal() * rot.transpose();
  sigma(1, 0) = sigma(0, 1);
  return {r * Vec2(std::cos(phi_d), std::sin(phi_d)), sigma};
}

inline GaussianState random_gaussian_state(const GaussianScenario& sc, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_gaussian_state(sc, rng);
}

/// Fock amplitudes <m|x> = exp(-|x|^2/4) (q + i p)^m / sqrt(2^m m!), m = 0..n_max.
inline CVector coherent_amplitudes(const Vec2& x, int n_max) {
  CVector c(n_max + 1);
  const Complex z(x.x(), x.y());
  c(0) = std::exp(-0.25 * x.squaredNorm());
  for (int m = 0; m < n_max; ++m) c(m + 1) = c(m) * z / std::sqrt(2.0 * (m + 1));
  return c;
}

/// Cutoff heuristic: mean photon number plus eight standard deviations.
inline int suggested_fock_cutoff(const GaussianState& s) {
  const double n_th = 0.25 * s.sigma_p().trace();
  const double coh = 0.5 * s.displacement().squaredNorm();
  const double var = n_th * (n_th + 1.0) + coh * (2.0 * n_th + 1.0) + 0.125 * s.sigma_p().squaredNorm();
  return static_cast<int>(std::ceil(n_th + coh + 8.0 * std::sqrt(var) + 10.0));
}

struct FockOptions {
  double min_trace = 1.0 - 1e-6;
  double convergence = 1e-11;
  int max_nodes = 512;
};

/// Truncated Fock matrix rho_mn = int P(x) <m|x><x|n> d^2x, renormalized to
/// unit trace. The integral is done by Gauss-Hermite quadrature in the
/// whitened coordinates x = d + L z, sigma_P = L L^T, where P d^2x becomes
/// exp(-|z|^2) d^2z / pi.
inline DensityMatrix to_fock_matrix(const GaussianState& s, int n_max, const FockOptions& options = {}) {
  if (n_max < 1) throw DimensionError("to_fock_matrix: n_max must be positive");
  const Eigen::Vector2d eig = Eigen::SelfAdjointEigenSolver<Mat2>(s.sigma_p(), Eigen::EigenvaluesOnly).eigenvalues();
  if (eig(0) <= detail::kSingularEigenvalue) {
    throw InvalidStateError("to_fock_matrix: singular P-covariance; regularize sigma_p");
  }
  const Mat2 chol = s.sigma_p().llt().matrixL();
  const Index dim = n_max + 1;

  auto integrate_with = [&](int nodes) {
    const quadrature::Rule gh = quadrature::gauss_hermite(nodes);
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      for (std::size_t j = 0; j < gh.nodes.size(); ++j) {
        const double w = gh.weights[i] * gh.weights[j] / std::numbers::pi;
        if (w < 1e-300) continue;
        const Vec2 x = s.displacement() + chol * Vec2(gh.nodes[i], gh.nodes[j]);
        rho.selfadjointView<Eigen::Lower>().rankUpdate(coherent_amplitudes(x, n_max), w);
      }
    }
    rho.triangularView<Eigen::StrictlyUpper>() = rho.adjoint();
    return rho;
  };

  int nodes = 24;
  CMatrix rho = integrate_with(nodes);
  for (;;) {
    const int next = nodes + nodes / 2;
    if (next > options.max_nodes) {
      throw NumericalError("to_fock_matrix: Gauss-Hermite quadrature did not converge");
    }
    CMatrix refined = integrate_with(next);
    const double change = (refined - rho).cwiseAbs().maxCoeff();
    rho = std::move(refined);
    nodes = next;
    if (change < options.convergence) break;
  }

  const double trace = rho.trace().real();
  if (trace < options.min_trace) {
    throw NumericalError("to_fock_matrix: n_max = " + std::to_string(n_max) + " captures trace " +
                         std::to_string(trace) + " only");
  }
  rho /= trace;
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

inline nlohmann::json state_to_json(const GaussianState& s) {
  const Mat2& c = s.sigma_p();
  return {{"d", {s.displacement().x(), s.displacement().y()}},
          {"sigma_p", {{c(0, 0), c(0, 1)}, {c(1, 0), c(1, 1)}}}};
}

inline GaussianState state_from_json(const nlohmann::json& j) {
  try {
    const auto d = j.at("d").get<std::vector<double>>();
    const auto c = j.at("sigma_p").get<std::vector<std::vector<double>>>();
    if (d.size() != 2 || c.size() != 2 || c[0].size() != 2 || c[1].size() != 2) {
      throw ConfigError("state_from_json: expected d of length 2 and a 2x2 sigma_p");
    }
    Mat2 sigma;
    sigma << c[0][0], c[0][1], c[1][0], c[1][1];
    return {Vec2(d[0], d[1]), sigma};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("state_from_json: ") + e.what());
  } catch (const InvalidStateError& e) {
    throw ConfigError(std::string("state_from_json: ") + e.what());
  }
}

}  // namespace quasiwit
