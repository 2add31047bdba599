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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "quasiwit/qstate.hpp"

namespace quasiwit {
namespace {

CMatrix random_unitary(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ();
}

TEST(DensityMatrix, RejectsInvalidInput) {
  CMatrix bad_trace = CMatrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix{bad_trace}, InvalidStateError);
  CMatrix not_hermitian(2, 2);
  not_hermitian << 0.5, 0.3, 0.0, 0.5;
  EXPECT_THROW(DensityMatrix{not_hermitian}, InvalidStateError);
  CMatrix negative(2, 2);
  negative << 1.5, 0.0, 0.0, -0.5;
  EXPECT_THROW(DensityMatrix{negative}, InvalidStateError);
  EXPECT_THROW(DensityMatrix{CMatrix(2, 3)}, DimensionError);
}

TEST(DensityMatrix, BlochRoundTrip) {
  const Eigen::Vector3d r(0.3, -0.4, 0.5);
  EXPECT_LT((DensityMatrix::from_bloch(r).bloch_vector() - r).norm(), 1e-15);
}

TEST(TraceDistance, OrthogonalPureStates) {
  CVector zero(2), one(2);
  zero << 1.0, 0.0;
  one << 0.0, 1.0;
  EXPECT_NEAR(trace_distance(DensityMatrix::pure(zero), DensityMatrix::pure(one)), 1.0, 1e-15);
}

TEST(TraceDistance, PureVersusMaximallyMixed) {
  CVector zero(2);
  zero << 1.0, 0.0;
  EXPECT_NEAR(trace_distance(DensityMatrix::pure(zero), DensityMatrix::maximally_mixed(2)), 0.5, 1e-15);
}

TEST(TraceDistance, HalfBlochDistanceForQubits) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_density_matrix(2, rng);
    const auto b = random_density_matrix(2, rng);
    EXPECT_NEAR(trace_distance(a, b), 0.5 * (a.bloch_vector() - b.bloch_vector()).norm(), 1e-12);
  }
}

TEST(TraceDistance, MetricAxioms) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_density_matrix(3, rng);
    const auto b = random_density_matrix(3, rng);
    const auto c = random_density_matrix(3, rng);
    EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-12);
    EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-12);
    EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-12);
    EXPECT_LE(trace_distance(a, b), 1.0 + 1e-12);
  }
}

TEST(TraceDistance, UnitaryInvariance) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_density_matrix(4, rng);
    const auto b = random_density_matrix(4, rng);
    const CMatrix u = random_unitary(4, rng);
    const CMatrix ua = u * a.matrix() * u.adjoint();
    const CMatrix ub = u * b.matrix() * u.adjoint();
    EXPECT_NEAR(trace_distance(ua, ub), trace_distance(a, b), 1e-12);
  }
}

TEST(TraceDistance, ContractsUnderDepolarizing) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_density_matrix(3, rng);
    const auto b = random_density_matrix(3, rng);
    const double lambda = 0.3;
    const CMatrix mix = CMatrix::Identity(3, 3) / 3.0;
    const CMatrix da = (1.0 - lambda) * a.matrix() + lambda * mix;
    const CMatrix db = (1.0 - lambda) * b.matrix() + lambda * mix;
    EXPECT_NEAR(trace_distance(da, db), (1.0 - lambda) * trace_distance(a, b), 1e-12);
  }
}

TEST(TraceDistance, DimensionMismatch) {
  EXPECT_THROW(trace_distance(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(3)),
               DimensionError);
}

TEST(Kolmogorov, Examples) {
  EXPECT_NEAR(kolmogorov_distance(ProbabilityVector({1.0, 0.0}), ProbabilityVector({0.0, 1.0})), 1.0, 1e-15);
  EXPECT_NEAR(kolmogorov_distance(ProbabilityVector({0.5, 0.5}), ProbabilityVector({0.5, 0.5})), 0.0, 1e-15);
  // Quasi-probabilities may exceed one.
  EXPECT_NEAR(kolmogorov_distance(QuasiProbabilityVector({1.5, -0.5}), QuasiProbabilityVector({0.0, 1.0})), 1.5,
              1e-15);
  EXPECT_THROW(kolmogorov_distance(ProbabilityVector({1.0}), ProbabilityVector({0.5, 0.5})), DimensionError);
}

TEST(ProbabilityVectors, Validation) {
  EXPECT_THROW(QuasiProbabilityVector({0.5, 0.6}), InvalidStateError);
  EXPECT_THROW(ProbabilityVector({1.5, -0.5}), InvalidStateError);
  EXPECT_NO_THROW(QuasiProbabilityVector({1.5, -0.5}));
}

TEST(RandomStates, ValidAndDeterministic) {
  for (Index dim : {2, 3, 5}) {
    const auto a = random_density_matrix(dim, std::uint64_t{99});
    const auto b = random_density_matrix(dim, std::uint64_t{99});
    EXPECT_EQ(a.matrix(), b.matrix());
    EXPECT_GE(a.eigenvalues().minCoeff(), -1e-12);
    EXPECT_NEAR(a.matrix().trace().real(), 1.0, 1e-12);
  }
  EXPECT_THROW(random_density_matrix(1, std::uint64_t{1}), DimensionError);
}

TEST(RandomStates, QubitsFillTheBlochBallUniformly) {
  // E|r| = 3/4 for the uniform ball.
  std::mt19937_64 rng(15);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += random_density_matrix(2, rng).bloch_vector().norm();
  EXPECT_NEAR(sum / n, 0.75, 0.01);
}

}  // namespace
}  // namespace quasiwit
