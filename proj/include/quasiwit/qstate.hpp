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

// Finite-dimensional density matrices, trace distance and the discrete
// Kolmogorov distance between (quasi-)probability vectors.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "quasiwit/error.hpp"

namespace quasiwit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

namespace tolerance {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kUnitTrace = 1e-12;
inline constexpr double kEigenFloor = -1e-10;
inline constexpr double kImaginaryResidue = 1e-12;
inline constexpr double kUnitSum = 1e-10;
inline constexpr double kProbabilityFloor = -1e-12;
}  // namespace tolerance

inline bool is_hermitian(const CMatrix& m, double tol = tolerance::kHermitian) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Real eigenvalues of a Hermitian matrix in ascending order.
inline Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermitian_eigenvalues: matrix is not square");
  if (m.diagonal().imag().cwiseAbs().maxCoeff() > tolerance::kImaginaryResidue) {
    throw InvalidStateError("hermitian_eigenvalues: diagonal has a non-negligible imaginary part");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eigenvalues: eigensolver failed");
  return solver.eigenvalues();
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries) : m_(std::move(entries)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) {
      throw DimensionError("DensityMatrix: entries must be a non-empty square matrix");
    }
    if (!is_hermitian(m_)) throw InvalidStateError("DensityMatrix: matrix is not Hermitian");
    const Complex tr = m_.trace();
    if (std::abs(tr.real() - 1.0) > tolerance::kUnitTrace ||
        std::abs(tr.imag()) > tolerance::kUnitTrace) {
      throw InvalidStateError("DensityMatrix: trace differs from one by " +
                              std::to_string(std::abs(tr - 1.0)));
    }
    const double lowest = hermitian_eigenvalues(m_)(0);
    if (lowest < tolerance::kEigenFloor) {
      throw InvalidStateError("DensityMatrix: negative eigenvalue " + std::to_string(lowest));
    }
  }

  /// |psi><psi| for a (not necessarily normalized) nonzero vector.
  static DensityMatrix pure(const CVector& psi) {
    const double norm = psi.norm();
    if (norm == 0.0) throw InvalidStateError("DensityMatrix::pure: zero vector");
    const CVector unit = psi / norm;
    return DensityMatrix(unit * unit.adjoint());
  }

  static DensityMatrix maximally_mixed(Index dim) {
    if (dim < 1) throw DimensionError("DensityMatrix::maximally_mixed: dim must be positive");
    return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  /// Qubit state (1 + r.sigma)/2 for a Bloch vector with |r| <= 1.
  static DensityMatrix from_bloch(const Eigen::Vector3d& r) {
    CMatrix m(2, 2);
    m << Complex(1.0 + r.z(), 0.0), Complex(r.x(), -r.y()),
        Complex(r.x(), r.y()), Complex(1.0 - r.z(), 0.0);
    return DensityMatrix(0.5 * m);
  }

  Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  Eigen::VectorXd eigenvalues() const { return hermitian_eigenvalues(m_); }

  /// Bloch vector of a qubit state.
  Eigen::Vector3d bloch_vector() const {
    if (dim() != 2) throw DimensionError("bloch_vector: state is not a qubit");
    return {2.0 * m_(1, 0).real(), 2.0 * m_(1, 0).imag(), (m_(0, 0) - m_(1, 1)).real()};
  }

 private:
  CMatrix m_;
};

/// Real entries summing to one; entries may be negative.
class QuasiProbabilityVector {
 public:
  explicit QuasiProbabilityVector(std::vector<double> entries) : v_(std::move(entries)) {
    const double sum = std::accumulate(v_.begin(), v_.end(), 0.0);
    if (v_.empty() || std::abs(sum - 1.0) > tolerance::kUnitSum) {
      throw InvalidStateError("QuasiProbabilityVector: entries sum to " + std::to_string(sum));
    }
  }

  std::span<const double> entries() const { return v_; }
  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  Eigen::Map<const Eigen::VectorXd> as_eigen() const {
    return {v_.data(), static_cast<Index>(v_.size())};
  }

 private:
  std::vector<double> v_;
};

/// A quasi-probability vector whose entries are also nonnegative.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> entries) : q_(entries) {
    for (double x : q_.entries()) {
      if (x < tolerance::kProbabilityFloor) {
        throw InvalidStateError("ProbabilityVector: negative entry " + std::to_string(x));
      }
    }
  }

  std::span<const double> entries() const { return q_.entries(); }
  std::size_t size() const { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }
  Eigen::Map<const Eigen::VectorXd> as_eigen() const { return q_.as_eigen(); }

 private:
  QuasiProbabilityVector q_;
};

/// Half the L1 distance between two equally long real vectors.
inline double kolmogorov_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw DimensionError("kolmogorov_distance: lengths " + std::to_string(p.size()) + " and " +
                         std::to_string(q.size()) + " differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

inline double kolmogorov_distance(const ProbabilityVector& p, const ProbabilityVector& q) {
  return kolmogorov_distance(p.entries(), q.entries());
}

inline double kolmogorov_distance(const QuasiProbabilityVector& f, const QuasiProbabilityVector& g) {
  return kolmogorov_distance(f.entries(), g.entries());
}

/// Half the trace norm of a - b. Both operands must be Hermitian.
inline double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("trace_distance: dimensions " + std::to_string(a.rows()) + " and " +
                         std::to_string(b.rows()) + " differ");
  }
  if (!is_hermitian(a) || !is_hermitian(b)) throw InvalidStateError("trace_distance: non-Hermitian input");
  const Eigen::VectorXd lambda = hermitian_eigenvalues(a - b);
  return 0.5 * lambda.cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

/// Random state drawn from `rng`: uniform over the Bloch ball for qubits,
/// normalized G G^dagger with complex Ginibre G otherwise.
template <class Rng>
DensityMatrix random_density_matrix(Index dim, Rng& rng) {
  if (dim < 2) throw DimensionError("random_density_matrix: dim must be at least 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  if (dim == 2) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Eigen::Vector3d dir;
    do {
      dir = {normal(rng), normal(rng), normal(rng)};
    } while (dir.norm() < 1e-300);
    const double r = std::cbrt(uniform(rng));
    return DensityMatrix::from_bloch(r * dir.normalized());
  }
  CMatrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

inline DensityMatrix random_density_matrix(Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_density_matrix(dim, rng);
}

}  // namespace quasiwit
