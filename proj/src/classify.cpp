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

#include "epprop/classify.hpp"

#include <cmath>
#include <string>

#include "epprop/error.hpp"

namespace epprop {

LabelMatrix::LabelMatrix(std::span<const int> node_labels, std::size_t n_classes)
    : labels_(node_labels.begin(), node_labels.end()) {
  if (n_classes == 0) raise(Errc::InvalidConfig, "label matrix needs at least one class");
  if (labels_.empty()) raise(Errc::DimensionMismatch, "label matrix needs at least one node");
  const auto cols = static_cast<Eigen::Index>(n_classes);
  matrix_ = DenseMatrix::Zero(static_cast<Eigen::Index>(labels_.size()), cols);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const int c = labels_[i];
    if (c == kUnlabeled) continue;
    if (c < 0 || c >= cols) {
      raise(Errc::LabelOutOfRange, "node " + std::to_string(i) + " has label " +
                                       std::to_string(c) + " outside [0, " +
                                       std::to_string(n_classes) + ")");
    }
    matrix_(static_cast<Eigen::Index>(i), c) = 1.0;
  }
}

void LabelMatrix::require_all_classes() const {
  const DenseVector mass = matrix_.colwise().sum();
  for (Eigen::Index c = 0; c < mass.size(); ++c) {
    if (mass(c) == 0.0) {
      raise(Errc::EmptyClass, "class " + std::to_string(c) + " has no labeled node");
    }
  }
}

ClassScores label_propagation_scores(const DenseMatrix& ztilde, const LabelMatrix& labels,
                                     const GraphConfig& cfg) {
  require_dense(ztilde, "propagated embeddings");
  if (static_cast<std::size_t>(ztilde.rows()) != labels.rows()) {
    raise(Errc::DimensionMismatch, "embeddings have " + std::to_string(ztilde.rows()) +
                                       " rows, labels have " + std::to_string(labels.rows()));
  }
  labels.require_all_classes();
  const Propagator p = build_propagator(ztilde, cfg);
  return {p.matrix * labels.matrix()};
}

DenseMatrix softmax_probs(const ClassScores& scores) {
  require_dense(scores.values, "scores");
  DenseMatrix probs(scores.values.rows(), scores.values.cols());
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    const double top = scores.values.row(i).maxCoeff();
    const auto shifted = (scores.values.row(i).array() - top).exp();
    probs.row(i) = shifted / shifted.sum();
  }
  return probs;
}

double lp_cross_entropy(const DenseMatrix& probs, std::span<const int> true_labels) {
  if (static_cast<std::size_t>(probs.rows()) != true_labels.size()) {
    raise(Errc::DimensionMismatch, "probability rows and label count differ");
  }
  if (true_labels.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    const int c = true_labels[i];
    if (c < 0 || c >= probs.cols()) {
      raise(Errc::LabelOutOfRange, "label " + std::to_string(c) + " at row " + std::to_string(i));
    }
    total -= std::log(probs(static_cast<Eigen::Index>(i), c));
  }
  return total / static_cast<double>(true_labels.size());
}

ClassScores prototypical_scores(const DenseMatrix& support_z, std::span<const int> support_labels,
                                std::size_t n_classes, const DenseMatrix& query_z) {
  require_dense(support_z, "support embeddings");
  require_dense(query_z, "query embeddings");
  if (static_cast<std::size_t>(support_z.rows()) != support_labels.size()) {
    raise(Errc::DimensionMismatch, "support rows and label count differ");
  }
  if (support_z.cols() != query_z.cols()) {
    raise(Errc::DimensionMismatch, "support and query dimensions differ");
  }
  const auto classes = static_cast<Eigen::Index>(n_classes);
  DenseMatrix prototypes = DenseMatrix::Zero(classes, support_z.cols());
  std::vector<double> counts(n_classes, 0.0);
  for (std::size_t i = 0; i < support_labels.size(); ++i) {
    const int c = support_labels[i];
    if (c == kUnlabeled) continue;
    if (c < 0 || c >= classes) {
      raise(Errc::LabelOutOfRange, "support label " + std::to_string(c));
    }
    prototypes.row(c) += support_z.row(static_cast<Eigen::Index>(i));
    counts[static_cast<std::size_t>(c)] += 1.0;
  }
  for (Eigen::Index c = 0; c < classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0.0) {
      raise(Errc::EmptyClass, "class " + std::to_string(c) + " has no support");
    }
    prototypes.row(c) /= counts[static_cast<std::size_t>(c)];
  }

  DenseMatrix scores(query_z.rows(), classes);
  for (Eigen::Index q = 0; q < query_z.rows(); ++q) {
    for (Eigen::Index c = 0; c < classes; ++c) {
      scores(q, c) = -(query_z.row(q) - prototypes.row(c)).squaredNorm();
    }
  }
  return {std::move(scores)};
}

std::vector<int> predict(const DenseMatrix& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()), 0);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c) {
      if (scores(i, c) > scores(i, best)) best = c;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predict(const ClassScores& scores) { return predict(scores.values); }

}  // namespace epprop
