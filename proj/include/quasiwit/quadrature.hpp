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

// Gauss rules and a globally adaptive tensor-product cubature on rectangles.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quasiwit/error.hpp"

namespace quasiwit::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
inline Rule gauss_legendre(int n) {
  if (n < 1) throw NumericalError("gauss_legendre: n must be positive");
  Rule rule{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

/// n-point Gauss-Hermite rule for the weight exp(-x^2). Nodes come from the
/// Golub-Welsch eigenproblem and are polished by Newton steps; weights use the
/// Christoffel sum 1 / sum_k p_k(x)^2 over orthonormal Hermite polynomials,
/// which keeps the relative accuracy of the tiny outer weights.
inline Rule gauss_hermite(int n) {
  if (n < 1) throw NumericalError("gauss_hermite: n must be positive");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("gauss_hermite: eigensolver failed");

  // Orthonormal recursion p_{k+1} = sqrt(2/(k+1)) x p_k - sqrt(k/(k+1)) p_{k-1},
  // rescaled on the fly. Returns p_n / p_{n-1}, sum_{k<n} p_k^2 and the log
  // of the scale applied to the squares.
  struct Eval {
    double p_n, p_nm1, sum, log_scale;
  };
  auto evaluate = [n](double x) {
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25);
    double sum = 0.0;
    double log_scale = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += cur * cur;
      const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
      prev = cur;
      cur = next;
      if (std::abs(cur) > 1e100) {
        prev *= 1e-100;
        cur *= 1e-100;
        sum *= 1e-200;
        log_scale += 200.0 * std::log(10.0);
      }
    }
    return Eval{cur, prev, sum, log_scale};
  };

  Rule rule;
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int iter = 0; iter < 3; ++iter) {
      // p_n'(x) = sqrt(2n) p_{n-1}(x)
      const Eval e = evaluate(x);
      if (e.p_nm1 == 0.0) break;
      const double dx = e.p_n / (std::sqrt(2.0 * n) * e.p_nm1);
      x -= dx;
      if (std::abs(dx) < 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    const Eval e = evaluate(x);
    rule.nodes.push_back(x);
    rule.weights.push_back(std::exp(-e.log_scale) / e.sum);
  }
  return rule;
}

struct Rect {
  double x0, x1, y0, y1;
};

/// Tensor-product Gauss-Legendre estimate of the integral of f over a rectangle.
template <class F>
double tensor_integral(F& f, const Rect& r, const Rule& rule) {
  const double hx = 0.5 * (r.x1 - r.x0);
  const double hy = 0.5 * (r.y1 - r.y0);
  const double cx = 0.5 * (r.x1 + r.x0);
  const double cy = 0.5 * (r.y1 + r.y0);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = cx + hx * rule.nodes[i];
    double row = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      row += rule.weights[j] * f(x, cy + hy * rule.nodes[j]);
    }
    sum += rule.weights[i] * row;
  }
  return sum * hx * hy;
}

struct CubatureOptions {
  double tol = 1e-6;
  std::size_t max_panels = 400000;
  int order = 7;
};

struct CubatureResult {
  double value;
  double error;
  std::size_t panels;
};

/// Integrates f over the rectangle spanned by the sorted breakpoints `xs` and
/// `ys`. Each leaf panel carries the estimate of its four quadrants; the error
/// of a leaf is the difference between its own estimate and the quadrant sum.
/// The leaf with the largest error is split until the summed error is below
/// `tol`.
template <class F>
CubatureResult adaptive_cubature(F&& f, std::span<const double> xs, std::span<const double> ys,
                                 const CubatureOptions& options = {}) {
  if (xs.size() < 2 || ys.size() < 2) throw NumericalError("adaptive_cubature: need at least two breakpoints per axis");
  if (!std::is_sorted(xs.begin(), xs.end()) || !std::is_sorted(ys.begin(), ys.end())) {
    throw NumericalError("adaptive_cubature: breakpoints must be sorted");
  }
  const Rule rule = gauss_legendre(options.order);

  struct Panel {
    Rect rect;
    std::array<double, 4> quadrant;
    double error;
  };
  auto quadrants = [](const Rect& r) {
    const double xm = 0.5 * (r.x0 + r.x1);
    const double ym = 0.5 * (r.y0 + r.y1);
    return std::array<Rect, 4>{Rect{r.x0, xm, r.y0, ym}, Rect{xm, r.x1, r.y0, ym},
                               Rect{r.x0, xm, ym, r.y1}, Rect{xm, r.x1, ym, r.y1}};
  };
  auto make_panel = [&](const Rect& r, double coarse) {
    Panel p{r, {}, 0.0};
    const auto q = quadrants(r);
    double fine = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      p.quadrant[k] = tensor_integral(f, q[k], rule);
      fine += p.quadrant[k];
    }
    p.error = std::abs(fine - coarse);
    return p;
  };
  auto by_error = [](const Panel& a, const Panel& b) { return a.error < b.error; };

  std::vector<Panel> heap;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const Rect r{xs[i], xs[i + 1], ys[j], ys[j + 1]};
      if (r.x1 <= r.x0 || r.y1 <= r.y0) continue;
      heap.push_back(make_panel(r, tensor_integral(f, r, rule)));
    }
  }
  std::make_heap(heap.begin(), heap.end(), by_error);
  auto total_error = [&heap] {
    double e = 0.0;
    for (const auto& p : heap) e += p.error;
    return e;
  };

  double error = total_error();
  std::size_t iterations = 0;
  while (error > options.tol) {
    if (heap.size() + 3 > options.max_panels) {
      throw NumericalError("adaptive_cubature: no convergence within " + std::to_string(options.max_panels) +
                           " panels (error estimate " + std::to_string(error) + ")");
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    error -= worst.error;
    const auto q = quadrants(worst.rect);
    for (std::size_t k = 0; k < 4; ++k) {
      Panel child = make_panel(q[k], worst.quadrant[k]);
      error += child.error;
      heap.push_back(child);
      std::push_heap(heap.begin(), heap.end(), by_error);
    }
    if (++iterations % 512 == 0) error = total_error();
  }

  // Sum in a layout-determined order so the result does not depend on heap history.
  std::sort(heap.begin(), heap.end(), [](const Panel& a, const Panel& b) {
    return a.rect.x0 != b.rect.x0 ? a.rect.x0 < b.rect.x0 : a.rect.y0 < b.rect.y0;
  });
  double value = 0.0;
  for (const auto& p : heap) value += (p.quadrant[0] + p.quadrant[1]) + (p.quadrant[2] + p.quadrant[3]);
  return {value, total_error(), heap.size()};
}

}  // namespace quasiwit::quadrature
