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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epprop/classify.hpp"
#include "epprop/embedding_set.hpp"
#include "epprop/propagation.hpp"

namespace epprop {

enum class ClassifierKind { LabelProp, Prototypical };
enum class SslMode { Off, PseudoLabel };

/// Which rows episodes are drawn from. Auto picks the novel split when any
/// row carries it and every row otherwise.
enum class SplitSelection { Auto, All, Base, Val, Novel };

std::string_view to_string(ClassifierKind kind) noexcept;
ClassifierKind parse_classifier(std::string_view name);  // lp | proto
std::string_view to_string(SslMode mode) noexcept;
std::string_view to_string(SplitSelection selection) noexcept;
SplitSelection parse_split_selection(std::string_view name);  // auto | all | base | val | novel

struct EvalConfig {
  std::size_t n_way = 5;
  std::size_t k_shot = 1;
  std::size_t q_queries = 15;
  std::size_t u_unlabeled = 0;
  /// Fraction of supports per class that keep their label; ceil(f * k) do.
  double labeled_fraction = 1.0;
  std::size_t episodes = 1000;
  /// Graph used for embedding propagation.
  GraphConfig graph;
  /// Label propagation alpha; defaults to graph.alpha.
  std::optional<double> inference_alpha;
  PropagationMode mode = PropagationMode::Full;
  ClassifierKind classifier = ClassifierKind::LabelProp;
  SslMode ssl = SslMode::Off;
  SplitSelection split = SplitSelection::Auto;
  std::uint64_t seed = 42;

  /// Throws InvalidConfig.
  void validate() const;
  GraphConfig inference_graph() const;
  /// Labeled supports per class.
  std::size_t labeled_per_class() const;
};

/// One sampled task. Node order everywhere is supports, queries, unlabeled;
/// within each block rows are grouped by episode class.
struct Episode {
  /// Sorted class identifiers; position = episode class index.
  std::vector<std::string> classes;
  std::vector<std::size_t> support;
  std::vector<int> support_class;
  std::vector<std::size_t> query;
  std::vector<int> query_class;
  std::vector<std::size_t> unlabeled;
  /// Ground truth for the pool; never fed to inference.
  std::vector<int> unlabeled_class;
  /// Per support: false when the label is hidden (partial-label scenario).
  std::vector<bool> labeled_mask;

  std::size_t node_count() const noexcept {
    return support.size() + query.size() + unlabeled.size();
  }
  /// Dataset row of every node.
  std::vector<std::size_t> node_rows() const;
  /// True class of every node.
  std::vector<int> node_classes() const;
  /// Visible labels: masked supports, queries and the pool are kUnlabeled.
  std::vector<int> node_labels() const;
  std::size_t query_offset() const noexcept { return support.size(); }
  std::size_t unlabeled_offset() const noexcept { return support.size() + query.size(); }
};

/// Rows the sampler may draw from under `cfg.split`.
std::optional<Split> resolve_split(const EmbeddingSet& data, SplitSelection selection);

/// Deterministic in (cfg.seed, episode_index). Throws InsufficientClassCount
/// or InsufficientClassSize.
Episode sample_episode(const EmbeddingSet& data, const EvalConfig& cfg, std::size_t episode_index);

/// Stacks the episode nodes into one matrix in node order.
DenseMatrix gather_nodes(const EmbeddingSet& data, const Episode& ep);

/// Embedding propagation on the whole batch followed by the configured
/// classifier. Scores cover every node.
ClassScores transductive_scores(const DenseMatrix& nodes, std::span<const int> node_labels,
                                std::size_t n_classes, const EvalConfig& cfg);

struct EpisodeResult {
  std::vector<int> query_predictions;
  double accuracy = 0.0;
  ClassScores scores;
};

EpisodeResult run_episode(const EmbeddingSet& data, const Episode& ep, const EvalConfig& cfg);

struct SslResult {
  std::vector<int> query_predictions;
  double accuracy = 0.0;
  /// Node positions of the pool: hidden-label supports, then unlabeled rows.
  std::vector<std::size_t> pool;
  std::vector<int> pseudo_labels;
  /// Labeled rows in the second pass.
  std::size_t labeled_rows = 0;
};

/// Two passes: pseudo-label the pool with the full pipeline, then classify
/// the queries with supports plus the pseudo-labeled pool. Throws
/// NoUnlabeledPool.
SslResult ssl_predict(const EmbeddingSet& data, const Episode& ep, const EvalConfig& cfg);

struct ConfidenceInterval {
  double mean = 0.0;
  /// 1.96 s / sqrt(E) with the sample standard deviation; 0 for E < 2.
  double half_width = 0.0;
};

ConfidenceInterval summarize(std::span<const double> accuracies);

struct EvalReport {
  EvalConfig config;
  std::uint64_t seed = 0;
  std::vector<double> accuracies;
  double mean = 0.0;
  double ci95 = 0.0;
  std::uint64_t wall_ms = 0;
};

/// EP_THREADS when set to a positive integer, hardware concurrency otherwise.
unsigned default_thread_count();

/// Runs cfg.episodes episodes on up to `threads` workers. Accuracies are
/// ordered by episode index and do not depend on the thread count.
EvalReport evaluate(const EmbeddingSet& data, const EvalConfig& cfg, unsigned threads = 0);

}  // namespace epprop
