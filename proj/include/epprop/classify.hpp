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
#include <span>
#include <vector>

#include "epprop/graph.hpp"

namespace epprop {

/// Node label that carries no label mass (queries, unlabeled pool).
inline constexpr int kUnlabeled = -1;

/// One row per node, one column per episode class. Labeled rows are one-hot,
/// every other row is zero.
class LabelMatrix {
 public:
  /// `node_labels[i]` is a class index in [0, n_classes) or kUnlabeled.
  /// Throws LabelOutOfRange.
  LabelMatrix(std::span<const int> node_labels, std::size_t n_classes);

  const DenseMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<int>& node_labels() const noexcept { return labels_; }
  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t classes() const noexcept { return static_cast<std::size_t>(matrix_.cols()); }

  /// Throws EmptyClass unless every class owns at least one labeled row.
  void require_all_classes() const;

 private:
  std::vector<int> labels_;
  DenseMatrix matrix_;
};

/// Node x class score matrix, node order as in the LabelMatrix it came from.
struct ClassScores {
  DenseMatrix values;
};

/// Rebuilds the graph on `ztilde` and returns P_ztilde * Y. Support rows are
/// scored with their full propagator row.
ClassScores label_propagation_scores(const DenseMatrix& ztilde, const LabelMatrix& labels,
                                     const GraphConfig& cfg);

/// Row-wise softmax with unit temperature.
DenseMatrix softmax_probs(const ClassScores& scores);

/// Mean of -ln p(true class) over rows.
double lp_cross_entropy(const DenseMatrix& probs, std::span<const int> true_labels);

/// score(q, c) = -||z_q - mu_c||^2 with mu_c the mean support embedding of
/// class c. Scores are nonpositive, unlike label propagation scores.
ClassScores prototypical_scores(const DenseMatrix& support_z, std::span<const int> support_labels,
                                std::size_t n_classes, const DenseMatrix& query_z);

/// Row-wise argmax; ties go to the lowest class index.
std::vector<int> predict(const ClassScores& scores);
std::vector<int> predict(const DenseMatrix& scores);

}  // namespace epprop
