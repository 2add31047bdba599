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

// Quantum frames of pure states: frame decomposition coefficients, the
// induced IC-POVM and the Kolmogorov bounds on the trace distance.

#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "quasiwit/error.hpp"
#include "quasiwit/qstate.hpp"

namespace quasiwit {

/// M_ij = S_ij / c_i, mapping frame vectors to POVM probabilities.
class TransitionMatrix {
 public:
  TransitionMatrix(const Eigen::MatrixXd& gram, const std::vector<double>& weights)
      : m_(gram) {
    for (Index i = 0; i < m_.rows(); ++i) m_.row(i) /= weights[static_cast<std::size_t>(i)];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m_);
    const auto& s = svd.singularValues();
    condition_ = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1)
                                       : std::numeric_limits<double>::infinity();
  }

  const Eigen::MatrixXd& matrix() const { return m_; }
  double condition_number() const { return condition_; }

 private:
  Eigen::MatrixXd m_;
  double condition_;
};

/// Ordered set of rank-one projectors |psi_i><psi_i| with POVM weights c_i
/// such that sum_i |psi_i><psi_i| / c_i is the identity.
class QuantumFrame {
 public:
  static constexpr double kMaxCondition = 1e12;

  QuantumFrame(Index dim, std::vector<CVector> vectors, std::vector<double> weights)
      : dim_(dim), vectors_(std::move(vectors)), weights_(std::move(weights)) {
    if (dim_ < 1) throw DimensionError("QuantumFrame: dim must be positive");
    const auto m = vectors_.size();
    if (m < static_cast<std::size_t>(dim_ * dim_)) {
      throw DimensionError("QuantumFrame: need at least dim^2 vectors");
    }
    if (weights_.size() != m) throw DimensionError("QuantumFrame: one weight per vector required");
    CMatrix completeness = CMatrix::Zero(dim_, dim_);
    for (std::size_t i = 0; i < m; ++i) {
      const CVector& v = vectors_[i];
      if (v.size() != dim_) throw DimensionError("QuantumFrame: vector " + std::to_string(i) + " has wrong size");
      if (std::abs(v.norm() - 1.0) > 1e-12) {
        throw InvalidStateError("QuantumFrame: vector " + std::to_string(i) + " is not normalized");
      }
      if (!(weights_[i] > 0.0)) throw InvalidStateError("QuantumFrame: weights must be positive");
      completeness += (v * v.adjoint()) / weights_[i];
    }
    if ((completeness - CMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > 1e-10) {
      throw InvalidStateError("QuantumFrame: sum of effects is not the identity");
    }

    const auto mi = static_cast<Index>(m);
    gram_.resize(mi, mi);
    for (Index i = 0; i < mi; ++i) {
      for (Index j = 0; j <= i; ++j) {
        const double s = std::norm(vectors_[i].dot(vectors_[j]));
        gram_(i, j) = s;
        gram_(j, i) = s;
      }
    }
    // The Gram matrix of the projectors under the Hilbert-Schmidt product is S
    // itself, so its rank is the dimension of their span.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram_);
    svd.setThreshold(1e-10);
    if (svd.rank() != dim_ * dim_) throw InvalidStateError("QuantumFrame: projectors do not span operator space");
  }

  Index dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool is_minimal() const { return size() == static_cast<std::size_t>(dim_ * dim_); }
  const std::vector<CVector>& vectors() const { return vectors_; }
  const std::vector<double>& weights() const { return weights_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  CMatrix projector(std::size_t i) const { return vectors_[i] * vectors_[i].adjoint(); }
  CMatrix effect(std::size_t i) const { return projector(i) / weights_[i]; }

  TransitionMatrix transition_matrix() const { return {gram_, weights_}; }

 private:
  Index dim_;
  std::vector<CVector> vectors_;
  std::vector<double> weights_;
  Eigen::MatrixXd gram_;
};

/// Qubit state vector pointing along a unit Bloch direction.
inline CVector bloch_ket(const Eigen::Vector3d& n) {
  const double theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
  const double phi = std::atan2(n.y(), n.x());
  CVector v(2);
  v << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi);
  return v;
}

/// Bloch directions of the qubit SIC frame (regular tetrahedron).
inline std::array<Eigen::Vector3d, 4> sic_qubit_directions() {
  const double k = 1.0 / std::sqrt(3.0);
  return {Eigen::Vector3d(k, k, k), Eigen::Vector3d(k, -k, -k), Eigen::Vector3d(-k, k, -k),
          Eigen::Vector3d(-k, -k, k)};
}

/// The symmetric minimal qubit frame; every weight equals 2.
inline QuantumFrame sic_qubit_frame() {
  std::vector<CVector> vectors;
  for (const auto& n : sic_qubit_directions()) vectors.push_back(bloch_ket(n));
  return {2, std::move(vectors), std::vector<double>(4, 2.0)};
}

/// Outcome probabilities p_i = <psi_i|rho|psi_i> / c_i of the frame's POVM.
inline ProbabilityVector povm_probabilities(const DensityMatrix& rho, const QuantumFrame& frame) {
  if (rho.dim() != frame.dim()) throw DimensionError("povm_probabilities: state and frame dimensions differ");
  std::vector<double> p(frame.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const CVector& v = frame.vectors()[i];
    p[i] = v.dot(rho.matrix() * v).real() / frame.weights()[i];
  }
  return ProbabilityVector(std::move(p));
}

/// Frame vector f with rho = sum_i f_i |psi_i><psi_i|, obtained by solving
/// M f = p. Only minimal frames are supported.
inline QuasiProbabilityVector frame_decompose(const DensityMatrix& rho, const QuantumFrame& frame) {
  if (!frame.is_minimal()) throw DimensionError("frame_decompose: frame is not minimal");
  const TransitionMatrix m = frame.transition_matrix();
  if (!(m.condition_number() <= QuantumFrame::kMaxCondition)) {
    throw NumericalError("frame_decompose: transition matrix condition number " +
                         std::to_string(m.condition_number()) + " exceeds 1e12");
  }
  const ProbabilityVector p = povm_probabilities(rho, frame);
  const Eigen::VectorXd f = m.matrix().partialPivLu().solve(p.as_eigen());
  std::vector<double> out(f.data(), f.data() + f.size());
  // Rescale away the last-bit drift of the solve so the unit-sum invariant holds exactly.
  const double sum = f.sum();
  for (double& x : out) x /= sum;
  return QuasiProbabilityVector(std::move(out));
}

/// sum_i f_i |psi_i><psi_i|. Hermitian with unit trace, but positivity is
/// not guaranteed for arbitrary quasi-probability vectors.
inline CMatrix reconstruct(const QuasiProbabilityVector& f, const QuantumFrame& frame) {
  if (f.size() != frame.size()) throw DimensionError("reconstruct: length of f differs from frame size");
  CMatrix rho = CMatrix::Zero(frame.dim(), frame.dim());
  for (std::size_t i = 0; i < f.size(); ++i) rho += f[i] * frame.projector(i);
  return rho;
}

struct DistanceBounds {
  double d_p;   // Kolmogorov distance of POVM probabilities (lower bound)
  double d_tr;  // trace distance
  double d_f;   // Kolmogorov distance of frame vectors (upper bound)
};

inline DistanceBounds inequality_report(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                        const QuantumFrame& frame) {
  if (rho1.dim() != rho2.dim()) throw DimensionError("inequality_report: state dimensions differ");
  return {kolmogorov_distance(povm_probabilities(rho1, frame), povm_probabilities(rho2, frame)),
          trace_distance(rho1, rho2),
          kolmogorov_distance(frame_decompose(rho1, frame), frame_decompose(rho2, frame))};
}

// JSON: {"dim": n, "vectors": [[re, im, re, im, ...], ...], "weights": [...]}

inline nlohmann::json frame_to_json(const QuantumFrame& frame) {
  nlohmann::json vectors = nlohmann::json::array();
  for (const CVector& v : frame.vectors()) {
    nlohmann::json entries = nlohmann::json::array();
    for (Index k = 0; k < v.size(); ++k) {
      entries.push_back(v(k).real());
      entries.push_back(v(k).imag());
    }
    vectors.push_back(std::move(entries));
  }
  return {{"dim", frame.dim()}, {"vectors", std::move(vectors)}, {"weights", frame.weights()}};
}

inline QuantumFrame frame_from_json(const nlohmann::json& j) {
  try {
    const auto dim = j.at("dim").get<Index>();
    std::vector<CVector> vectors;
    for (const auto& entries : j.at("vectors")) {
      const auto flat = entries.get<std::vector<double>>();
      if (flat.size() != static_cast<std::size_t>(2 * dim)) {
        throw DimensionError("frame_from_json: vector must hold 2*dim interleaved numbers");
      }
      CVector v(dim);
      for (Index k = 0; k < dim; ++k) v(k) = Complex(flat[2 * k], flat[2 * k + 1]);
      vectors.push_back(std::move(v));
    }
    return {dim, std::move(vectors), j.at("weights").get<std::vector<double>>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("frame_from_json: ") + e.what());
  }
}

}  // namespace quasiwit
