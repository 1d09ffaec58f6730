// Copyright 2026 The epprop Authors
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

#include "epprop/graph.hpp"

#include <cmath>
#include <string>

#include "epprop/error.hpp"

namespace epprop {

namespace {

constexpr double kSymmetryTol = 1e-9;

void require_square(const DenseMatrix& m, const char* what) {
  require_dense(m, what);
  if (m.rows() != m.cols()) {
    raise(Errc::DimensionMismatch, std::string(what) + " must be square");
  }
}

}  // namespace

void GraphConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    raise(Errc::InvalidConfig, "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (sigma2_override && !(*sigma2_override > 0.0 && std::isfinite(*sigma2_override))) {
    raise(Errc::InvalidConfig, "sigma2 override must be positive");
  }
  if (!(variance_floor > 0.0)) raise(Errc::InvalidConfig, "variance floor must be positive");
  if (!(fallback_sigma2 > 0.0)) raise(Errc::InvalidConfig, "fallback sigma2 must be positive");
}

DenseMatrix pairwise_sq_distances(const DenseMatrix& z) {
  require_dense(z, "embeddings");
  const Eigen::Index n = z.rows();
  DenseMatrix d2 = DenseMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (z.row(i) - z.row(j)).squaredNorm();
      d2(i, j) = d;
      d2(j, i) = d;
    }
  }
  return d2;
}

Adjacency adjacency(const DenseMatrix& d2, const GraphConfig& cfg) {
  cfg.validate();
  require_square(d2, "distance matrix");
  const Eigen::Index n = d2.rows();
  const double tol = kSymmetryTol * std::max(1.0, max_abs(d2));
  if (!is_symmetric(d2, kSymmetryTol)) {
    raise(Errc::InvalidDistanceMatrix, "distance matrix is not symmetric");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(d2(i, i)) > tol) {
      raise(Errc::InvalidDistanceMatrix, "nonzero diagonal at row " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (d2(i, j) < -tol) {
        raise(Errc::InvalidDistanceMatrix, "negative squared distance at (" + std::to_string(i) +
                                               ", " + std::to_string(j) + ")");
      }
    }
  }

  double sigma2 = cfg.fallback_sigma2;
  if (cfg.sigma2_override) {
    sigma2 = *cfg.sigma2_override;
  } else if (n >= 2) {
    // Population variance over the n(n-1) ordered off-diagonal entries.
    const double count = static_cast<double>(n) * static_cast<double>(n - 1);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) sum += d2(i, j);
    const double mean = sum / count;
    double ss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) ss += (d2(i, j) - mean) * (d2(i, j) - mean);
    const double variance = ss / count;
    if (variance >= cfg.variance_floor) sigma2 = variance;
  }

  DenseMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = i == j ? 0.0 : std::exp(-std::max(0.0, d2(i, j)) / sigma2);
    }
  }
  return {std::move(a), sigma2};
}

DenseMatrix normalized_laplacian(const DenseMatrix& a) {
  require_square(a, "adjacency");
  const Eigen::Index n = a.rows();
  if (n == 1) return DenseMatrix::Zero(1, 1);
  if (!is_symmetric(a, kSymmetryTol)) raise(Errc::NotSymmetric, "adjacency is not symmetric");
  if ((a.array() < 0.0).any()) raise(Errc::InvariantViolation, "adjacency has negative entries");

  const DenseVector degree = a.rowwise().sum();
  DenseVector inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(degree(i) > 0.0)) {
      raise(Errc::IsolatedNode, "node " + std::to_string(i) + " has zero degree");
    }
    inv_sqrt(i) = 1.0 / std::sqrt(degree(i));
  }
  DenseMatrix l = inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
  return l;
}

Propagator propagator(const DenseMatrix& laplacian, double alpha, double sigma2) {
  require_square(laplacian, "laplacian");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    raise(Errc::InvalidConfig, "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  const Eigen::Index n = laplacian.rows();
  const DenseMatrix identity = DenseMatrix::Identity(n, n);
  const DenseMatrix system = identity - alpha * laplacian;
  DenseMatrix p = solve_spd(system, identity);
  // The solve leaves round-off asymmetry of order 1e-16; fold it away.
  DenseMatrix sym = 0.5 * (p + p.transpose());
  return {std::move(sym), alpha, sigma2};
}

Propagator build_propagator(const DenseMatrix& z, const GraphConfig& cfg) {
  cfg.validate();
  const Adjacency adj = adjacency(pairwise_sq_distances(z), cfg);
  return propagator(normalized_laplacian(adj.matrix), cfg.alpha, adj.sigma2);
}

}  // namespace epprop
