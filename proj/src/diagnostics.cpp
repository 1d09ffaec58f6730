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

#include "epprop/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "epprop/error.hpp"
#include "epprop/random.hpp"

namespace epprop {

InterpolationCurve interpolation_curve(const EmbeddingSet& data, const Episode& ep, std::size_t i,
                                       std::size_t j, std::size_t grid_size,
                                       const EvalConfig& cfg) {
  cfg.validate();
  const std::size_t n = ep.node_count();
  if (i >= n || j >= n) {
    raise(Errc::InvalidConfig, "interpolation endpoints must be episode nodes (< " +
                                   std::to_string(n) + ")");
  }
  if (grid_size < 2) raise(Errc::InvalidConfig, "grid needs at least two points");
  const std::vector<int> truth = ep.node_classes();
  if (truth[i] == truth[j]) {
    raise(Errc::SameClassPair, "nodes " + std::to_string(i) + " and " + std::to_string(j) +
                                   " share class " + std::to_string(truth[i]));
  }

  const DenseMatrix nodes = gather_nodes(data, ep);
  DenseMatrix batch(nodes.rows() + 1, nodes.cols());
  batch.topRows(nodes.rows()) = nodes;
  std::vector<int> labels = ep.node_labels();
  labels.push_back(kUnlabeled);
  const auto probe = static_cast<Eigen::Index>(n);

  InterpolationCurve curve;
  curve.i = i;
  curve.j = j;
  curve.class_i = truth[i];
  curve.class_j = truth[j];
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double w = static_cast<double>(k) / static_cast<double>(grid_size - 1);
    batch.row(probe) = w * nodes.row(static_cast<Eigen::Index>(i)) +
                       (1.0 - w) * nodes.row(static_cast<Eigen::Index>(j));
    const ClassScores scores = transductive_scores(batch, labels, ep.classes.size(), cfg);
    const DenseMatrix probs = softmax_probs(scores);
    curve.weights.push_back(w);
    curve.probs.push_back(probs(probe, curve.class_i));
  }
  for (std::size_t k = 1; k < grid_size; ++k) {
    curve.max_jump = std::max(curve.max_jump, std::abs(curve.probs[k] - curve.probs[k - 1]));
  }
  return curve;
}

std::vector<std::pair<std::size_t, std::size_t>> sample_interpolation_pairs(const Episode& ep,
                                                                            std::size_t count,
                                                                            std::uint64_t seed) {
  const std::vector<int> truth = ep.node_classes();
  const std::size_t labeled_nodes = ep.support.size() + ep.query.size();
  if (ep.classes.size() < 2 || labeled_nodes < 2) {
    raise(Errc::SameClassPair, "episode has fewer than two classes");
  }
  Rng rng = stream_rng(seed, 0x706169727300ULL);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(count);
  while (pairs.size() < count) {
    const std::size_t a = uniform_below(rng, labeled_nodes);
    const std::size_t b = uniform_below(rng, labeled_nodes);
    if (truth[a] != truth[b]) pairs.emplace_back(a, b);
  }
  return pairs;
}

EmbeddingSet two_moons(std::size_t n_per_moon, double noise_sd, std::uint64_t seed) {
  if (n_per_moon < 1) raise(Errc::InvalidConfig, "two_moons needs at least one point per moon");
  if (!(noise_sd >= 0.0)) raise(Errc::InvalidConfig, "noise standard deviation must be >= 0");
  Rng rng = stream_rng(seed, 0);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::normal_distribution<double> noise(0.0, 1.0);

  EmbeddingSet set;
  set.embeddings.resize(static_cast<Eigen::Index>(2 * n_per_moon), 2);
  for (std::size_t moon = 0; moon < 2; ++moon) {
    for (std::size_t k = 0; k < n_per_moon; ++k) {
      const double t = angle(rng);
      double x = moon == 0 ? std::cos(t) : 1.0 - std::cos(t);
      double y = moon == 0 ? std::sin(t) : 0.5 - std::sin(t);
      if (noise_sd > 0.0) {
        x += noise_sd * noise(rng);
        y += noise_sd * noise(rng);
      }
      const std::size_t row = moon * n_per_moon + k;
      set.embeddings(static_cast<Eigen::Index>(row), 0) = x;
      set.embeddings(static_cast<Eigen::Index>(row), 1) = y;
      set.ids.push_back(std::to_string(row));
      set.labels.push_back(std::to_string(moon));
      set.splits.push_back(Split::None);
    }
  }
  return set;
}

EmbeddingSet gaussian_clusters(const ClusterSpec& spec) {
  if (spec.n_classes < 1 || spec.per_class < 1) {
    raise(Errc::InvalidConfig, "gaussian_clusters needs at least one class and one row per class");
  }
  if (spec.dim < spec.n_classes) {
    raise(Errc::InvalidConfig, "gaussian_clusters needs dim >= n_classes");
  }
  if (!(spec.spread >= 0.0) || !(spec.center_distance >= 0.0)) {
    raise(Errc::InvalidConfig, "spread and center distance must be >= 0");
  }
  Rng rng = stream_rng(spec.seed, 0);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double offset = spec.center_distance / std::numbers::sqrt2;
  const double coord_sd = spec.spread / std::sqrt(static_cast<double>(spec.dim));
  const int width = static_cast<int>(std::to_string(spec.n_classes - 1).size());

  EmbeddingSet set;
  const auto dim = static_cast<Eigen::Index>(spec.dim);
  set.embeddings.resize(static_cast<Eigen::Index>(spec.n_classes * spec.per_class), dim);
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    char label[32];
    std::snprintf(label, sizeof label, "c%0*zu", width, c);
    for (std::size_t k = 0; k < spec.per_class; ++k) {
      const auto row = static_cast<Eigen::Index>(c * spec.per_class + k);
      for (Eigen::Index d = 0; d < dim; ++d) {
        set.embeddings(row, d) = coord_sd * noise(rng);
      }
      set.embeddings(row, static_cast<Eigen::Index>(c)) += offset;
      set.ids.push_back(std::to_string(row));
      set.labels.emplace_back(label);
      set.splits.push_back(Split::None);
    }
  }
  return set;
}

namespace {

std::pair<double, double> mean_pair_distances(const DenseMatrix& z, std::span<const int> labels) {
  double intra = 0.0, inter = 0.0;
  std::size_t n_intra = 0, n_inter = 0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < z.rows(); ++j) {
      const double d = (z.row(i) - z.row(j)).norm();
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) {
        intra += d;
        ++n_intra;
      } else {
        inter += d;
        ++n_inter;
      }
    }
  }
  return {n_intra ? intra / static_cast<double>(n_intra) : 0.0,
          n_inter ? inter / static_cast<double>(n_inter) : 0.0};
}

double ratio(double after, double before) { return before > 0.0 ? after / before : 1.0; }

}  // namespace

CompactnessMetrics compactness_metrics(const DenseMatrix& z, std::span<const int> labels,
                                       const DenseMatrix& ztilde) {
  if (z.rows() != ztilde.rows() || z.cols() != ztilde.cols()) {
    raise(Errc::DimensionMismatch, "embeddings before and after propagation differ in shape");
  }
  if (static_cast<std::size_t>(z.rows()) != labels.size()) {
    raise(Errc::DimensionMismatch, "label count differs from embedding rows");
  }
  CompactnessMetrics m;
  std::tie(m.intra_before, m.inter_before) = mean_pair_distances(z, labels);
  std::tie(m.intra_after, m.inter_after) = mean_pair_distances(ztilde, labels);
  m.intra_ratio = ratio(m.intra_after, m.intra_before);
  m.inter_ratio = ratio(m.inter_after, m.inter_before);
  return m;
}

BatchProjections batch_projections(const EmbeddingSet& data, std::size_t batches,
                                   std::size_t batch_size, const GraphConfig& cfg,
                                   PropagationMode mode, std::uint64_t seed) {
  const std::size_t n = data.size();
  if (batch_size < 1 || batch_size > n) {
    raise(Errc::InvalidConfig, "batch size must lie in [1, " + std::to_string(n) + "]");
  }
  BatchProjections out;
  out.embeddings.resize(static_cast<Eigen::Index>(batches * batch_size), data.embeddings.cols());
  std::vector<std::size_t> order(n);
  for (std::size_t b = 0; b < batches; ++b) {
    Rng rng = stream_rng(seed, b);
    std::iota(order.begin(), order.end(), std::size_t{0});
    partial_shuffle(std::span(order), batch_size, rng);
    DenseMatrix z(static_cast<Eigen::Index>(batch_size), data.embeddings.cols());
    for (std::size_t k = 0; k < batch_size; ++k) {
      z.row(static_cast<Eigen::Index>(k)) = data.embeddings.row(static_cast<Eigen::Index>(order[k]));
    }
    const PropagatedEmbeddings prop = propagate_embeddings(z, cfg, mode);
    out.embeddings.middleRows(static_cast<Eigen::Index>(b * batch_size),
                              static_cast<Eigen::Index>(batch_size)) = prop.embeddings;
    for (std::size_t k = 0; k < batch_size; ++k) {
      out.rows.push_back(order[k]);
      out.batches.push_back(b);
    }
  }
  return out;
}

}  // namespace epprop
