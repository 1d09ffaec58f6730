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

#pragma once

#include <optional>

#include "epprop/numerics.hpp"

namespace epprop {

struct GraphConfig {
  /// Propagation strength, strictly inside (0, 1).
  double alpha = 0.5;
  /// RBF bandwidth. When unset, the population variance of the off-diagonal
  /// squared distances is used.
  std::optional<double> sigma2_override;
  /// Variances below this floor fall back to `fallback_sigma2`.
  double variance_floor = 1e-12;
  double fallback_sigma2 = 1.0;

  /// Throws InvalidConfig.
  void validate() const;
};

/// P = (I - alpha L)^-1 for one node batch.
struct Propagator {
  DenseMatrix matrix;
  double alpha = 0.0;
  /// Bandwidth of the adjacency the Laplacian came from; 0 when unknown.
  double sigma2 = 0.0;
};

struct Adjacency {
  DenseMatrix matrix;
  double sigma2 = 0.0;
};

/// d2(i,j) = ||z_i - z_j||^2. Exactly symmetric with a zero diagonal.
DenseMatrix pairwise_sq_distances(const DenseMatrix& z);

/// A(i,j) = exp(-d2(i,j) / sigma2), A(i,i) = 0.
Adjacency adjacency(const DenseMatrix& d2, const GraphConfig& cfg);

/// L = D^-1/2 A D^-1/2 with D(i,i) = sum_j A(i,j). A single node maps to [[0]].
DenseMatrix normalized_laplacian(const DenseMatrix& a);

Propagator propagator(const DenseMatrix& laplacian, double alpha, double sigma2 = 0.0);

/// Distances, adjacency, Laplacian and propagator for one batch of rows.
Propagator build_propagator(const DenseMatrix& z, const GraphConfig& cfg);

}  // namespace epprop
