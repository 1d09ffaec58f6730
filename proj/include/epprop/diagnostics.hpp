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

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "epprop/episodes.hpp"

namespace epprop {

/// p(class of node i) along the segment from node j (weight 0) to node i
/// (weight 1).
struct InterpolationCurve {
  std::size_t i = 0;
  std::size_t j = 0;
  int class_i = 0;
  int class_j = 0;
  std::vector<double> weights;
  std::vector<double> probs;
  /// Largest |p(k+1) - p(k)| between neighbouring grid points.
  double max_jump = 0.0;
};

/// `i` and `j` are node positions in the episode (supports, queries,
/// unlabeled). Each grid point w appends w z_i + (1 - w) z_j to the batch as
/// an extra unlabeled node and runs the full pipeline. Throws SameClassPair.
InterpolationCurve interpolation_curve(const EmbeddingSet& data, const Episode& ep, std::size_t i,
                                       std::size_t j, std::size_t grid_size,
                                       const EvalConfig& cfg);

/// `count` random pairs of episode nodes with different classes, drawn from
/// supports and queries.
std::vector<std::pair<std::size_t, std::size_t>> sample_interpolation_pairs(const Episode& ep,
                                                                            std::size_t count,
                                                                            std::uint64_t seed);

/// Moon 0 at (cos t, sin t), moon 1 at (1 - cos t, 0.5 - sin t), t uniform on
/// [0, pi], plus isotropic Gaussian noise. Labels are "0" and "1".
EmbeddingSet two_moons(std::size_t n_per_moon, double noise_sd, std::uint64_t seed);

struct ClusterSpec {
  std::size_t n_classes = 20;
  std::size_t per_class = 100;
  std::size_t dim = 32;
  /// Distance between any two class centers.
  double center_distance = 1.0;
  /// Root-mean-square distance of a point from its center; each coordinate
  /// gets standard deviation spread / sqrt(dim).
  double spread = 0.1;
  std::uint64_t seed = 0;
};

/// Isotropic Gaussian blobs on the vertices of a regular simplex
/// (center_c = e_c * d / sqrt(2)). Requires dim >= n_classes. Labels are
/// zero-padded so their sorted order matches the center order.
EmbeddingSet gaussian_clusters(const ClusterSpec& spec);

struct CompactnessMetrics {
  double intra_before = 0.0;
  double inter_before = 0.0;
  double intra_after = 0.0;
  double inter_after = 0.0;
  double intra_ratio = 1.0;
  double inter_ratio = 1.0;
};

/// Mean intra-class and inter-class pairwise Euclidean distances before and
/// after propagation. Throws DimensionMismatch.
CompactnessMetrics compactness_metrics(const DenseMatrix& z, std::span<const int> labels,
                                       const DenseMatrix& ztilde);

/// One propagated copy of each sampled row per batch.
struct BatchProjections {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> batches;
  DenseMatrix embeddings;
};

/// Repeats embedding propagation over `batches` random subsets of
/// `batch_size` rows, showing how one point moves with its batch context.
BatchProjections batch_projections(const EmbeddingSet& data, std::size_t batches,
                                   std::size_t batch_size, const GraphConfig& cfg,
                                   PropagationMode mode, std::uint64_t seed);

}  // namespace epprop
