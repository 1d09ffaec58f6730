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

#include "epprop/episodes.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "epprop/error.hpp"
#include "epprop/random.hpp"

namespace epprop {

std::string_view to_string(ClassifierKind kind) noexcept {
  return kind == ClassifierKind::LabelProp ? "lp" : "proto";
}

ClassifierKind parse_classifier(std::string_view name) {
  if (name == "lp") return ClassifierKind::LabelProp;
  if (name == "proto") return ClassifierKind::Prototypical;
  raise(Errc::InvalidConfig, "unknown classifier '" + std::string(name) + "'");
}

std::string_view to_string(SslMode mode) noexcept {
  return mode == SslMode::Off ? "off" : "pseudo_label";
}

std::string_view to_string(SplitSelection selection) noexcept {
  switch (selection) {
    case SplitSelection::Auto: return "auto";
    case SplitSelection::All: return "all";
    case SplitSelection::Base: return "base";
    case SplitSelection::Val: return "val";
    case SplitSelection::Novel: return "novel";
  }
  return "auto";
}

SplitSelection parse_split_selection(std::string_view name) {
  if (name == "auto") return SplitSelection::Auto;
  if (name == "all") return SplitSelection::All;
  if (name == "base") return SplitSelection::Base;
  if (name == "val") return SplitSelection::Val;
  if (name == "novel") return SplitSelection::Novel;
  raise(Errc::InvalidConfig, "unknown split selection '" + std::string(name) + "'");
}

void EvalConfig::validate() const {
  graph.validate();
  inference_graph().validate();
  if (n_way < 1) raise(Errc::InvalidConfig, "n_way must be at least 1");
  if (k_shot < 1) raise(Errc::InvalidConfig, "k_shot must be at least 1");
  if (q_queries < 1) raise(Errc::InvalidConfig, "q_queries must be at least 1");
  if (episodes < 1) raise(Errc::InvalidConfig, "episodes must be at least 1");
  if (!(labeled_fraction > 0.0 && labeled_fraction <= 1.0)) {
    raise(Errc::InvalidConfig, "labeled_fraction must lie in (0, 1]");
  }
}

GraphConfig EvalConfig::inference_graph() const {
  GraphConfig g = graph;
  if (inference_alpha) g.alpha = *inference_alpha;
  return g;
}

std::size_t EvalConfig::labeled_per_class() const {
  // The epsilon keeps 0.4 * 5 at 2 despite binary rounding of 0.4.
  const double raw = std::ceil(labeled_fraction * static_cast<double>(k_shot) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1, k_shot);
}

std::vector<std::size_t> Episode::node_rows() const {
  std::vector<std::size_t> rows;
  rows.reserve(node_count());
  rows.insert(rows.end(), support.begin(), support.end());
  rows.insert(rows.end(), query.begin(), query.end());
  rows.insert(rows.end(), unlabeled.begin(), unlabeled.end());
  return rows;
}

std::vector<int> Episode::node_classes() const {
  std::vector<int> out;
  out.reserve(node_count());
  out.insert(out.end(), support_class.begin(), support_class.end());
  out.insert(out.end(), query_class.begin(), query_class.end());
  out.insert(out.end(), unlabeled_class.begin(), unlabeled_class.end());
  return out;
}

std::vector<int> Episode::node_labels() const {
  std::vector<int> out(node_count(), kUnlabeled);
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (labeled_mask[i]) out[i] = support_class[i];
  }
  return out;
}

std::optional<Split> resolve_split(const EmbeddingSet& data, SplitSelection selection) {
  switch (selection) {
    case SplitSelection::All: return std::nullopt;
    case SplitSelection::Base: return Split::Base;
    case SplitSelection::Val: return Split::Val;
    case SplitSelection::Novel: return Split::Novel;
    case SplitSelection::Auto:
      if (std::find(data.splits.begin(), data.splits.end(), Split::Novel) != data.splits.end()) {
        return Split::Novel;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

Episode sample_episode(const EmbeddingSet& data, const EvalConfig& cfg, std::size_t episode_index) {
  cfg.validate();
  const std::optional<Split> split = resolve_split(data, cfg.split);
  const std::vector<std::string> all_classes = data.classes(split);
  if (all_classes.size() < cfg.n_way) {
    raise(Errc::InsufficientClassCount, "need " + std::to_string(cfg.n_way) + " classes, have " +
                                            std::to_string(all_classes.size()));
  }
  const std::size_t pool_per_class = (cfg.u_unlabeled + cfg.n_way - 1) / cfg.n_way;
  const std::size_t needed = cfg.k_shot + cfg.q_queries + pool_per_class;

  Rng rng = stream_rng(cfg.seed, episode_index);

  std::vector<std::size_t> order(all_classes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  partial_shuffle(std::span(order), cfg.n_way, rng);
  order.resize(cfg.n_way);
  std::sort(order.begin(), order.end());

  Episode ep;
  for (std::size_t idx : order) ep.classes.push_back(all_classes[idx]);
  auto rows = data.rows_by_class(ep.classes, split);
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (rows[c].size() < needed) {
      raise(Errc::InsufficientClassSize, "class '" + ep.classes[c] + "' has " +
                                             std::to_string(rows[c].size()) + " rows, need " +
                                             std::to_string(needed));
    }
  }

  const std::size_t labeled = cfg.labeled_per_class();
  for (std::size_t c = 0; c < rows.size(); ++c) {
    const std::size_t pool = cfg.u_unlabeled / cfg.n_way + (c < cfg.u_unlabeled % cfg.n_way ? 1 : 0);
    const std::size_t take = cfg.k_shot + cfg.q_queries + pool;
    std::span<std::size_t> class_rows(rows[c]);
    partial_shuffle(class_rows, take, rng);
    const int cls = static_cast<int>(c);
    for (std::size_t i = 0; i < cfg.k_shot; ++i) {
      ep.support.push_back(class_rows[i]);
      ep.support_class.push_back(cls);
    }
    for (std::size_t i = 0; i < cfg.q_queries; ++i) {
      ep.query.push_back(class_rows[cfg.k_shot + i]);
      ep.query_class.push_back(cls);
    }
    for (std::size_t i = 0; i < pool; ++i) {
      ep.unlabeled.push_back(class_rows[cfg.k_shot + cfg.q_queries + i]);
      ep.unlabeled_class.push_back(cls);
    }

    std::vector<std::size_t> slots(cfg.k_shot);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    partial_shuffle(std::span(slots), labeled, rng);
    std::vector<bool> mask(cfg.k_shot, false);
    for (std::size_t i = 0; i < labeled; ++i) mask[slots[i]] = true;
    ep.labeled_mask.insert(ep.labeled_mask.end(), mask.begin(), mask.end());
  }
  return ep;
}

DenseMatrix gather_nodes(const EmbeddingSet& data, const Episode& ep) {
  const std::vector<std::size_t> rows = ep.node_rows();
  DenseMatrix nodes(static_cast<Eigen::Index>(rows.size()), data.embeddings.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nodes.row(static_cast<Eigen::Index>(i)) = data.embeddings.row(static_cast<Eigen::Index>(rows[i]));
  }
  return nodes;
}

ClassScores transductive_scores(const DenseMatrix& nodes, std::span<const int> node_labels,
                                std::size_t n_classes, const EvalConfig& cfg) {
  const PropagatedEmbeddings prop = propagate_embeddings(nodes, cfg.graph, cfg.mode);
  if (cfg.classifier == ClassifierKind::Prototypical) {
    return prototypical_scores(prop.embeddings, node_labels, n_classes, prop.embeddings);
  }
  const LabelMatrix labels(node_labels, n_classes);
  return label_propagation_scores(prop.embeddings, labels, cfg.inference_graph());
}

namespace {

EpisodeResult classify_queries(const DenseMatrix& nodes, const Episode& ep,
                               std::span<const int> node_labels, const EvalConfig& cfg) {
  EpisodeResult result;
  result.scores = transductive_scores(nodes, node_labels, ep.classes.size(), cfg);
  const std::vector<int> predicted = predict(softmax_probs(result.scores));
  const std::size_t offset = ep.query_offset();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ep.query.size(); ++i) {
    const int p = predicted[offset + i];
    result.query_predictions.push_back(p);
    if (p == ep.query_class[i]) ++correct;
  }
  result.accuracy = static_cast<double>(correct) / static_cast<double>(ep.query.size());
  return result;
}

}  // namespace

EpisodeResult run_episode(const EmbeddingSet& data, const Episode& ep, const EvalConfig& cfg) {
  cfg.validate();
  const DenseMatrix nodes = gather_nodes(data, ep);
  const std::vector<int> labels = ep.node_labels();
  return classify_queries(nodes, ep, labels, cfg);
}

SslResult ssl_predict(const EmbeddingSet& data, const Episode& ep, const EvalConfig& cfg) {
  cfg.validate();
  SslResult out;
  for (std::size_t i = 0; i < ep.support.size(); ++i) {
    if (!ep.labeled_mask[i]) out.pool.push_back(i);
  }
  for (std::size_t i = 0; i < ep.unlabeled.size(); ++i) out.pool.push_back(ep.unlabeled_offset() + i);
  if (out.pool.empty()) {
    raise(Errc::NoUnlabeledPool, "episode has no unlabeled rows and every support is labeled");
  }

  const DenseMatrix nodes = gather_nodes(data, ep);
  std::vector<int> labels = ep.node_labels();

  const ClassScores first = transductive_scores(nodes, labels, ep.classes.size(), cfg);
  const std::vector<int> guess = predict(softmax_probs(first));
  for (std::size_t node : out.pool) {
    out.pseudo_labels.push_back(guess[node]);
    labels[node] = guess[node];
  }
  out.labeled_rows = static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](int l) { return l != kUnlabeled; }));

  EpisodeResult second = classify_queries(nodes, ep, labels, cfg);
  out.query_predictions = std::move(second.query_predictions);
  out.accuracy = second.accuracy;
  return out;
}

ConfidenceInterval summarize(std::span<const double> accuracies) {
  ConfidenceInterval ci;
  if (accuracies.empty()) return ci;
  const double e = static_cast<double>(accuracies.size());
  ci.mean = std::accumulate(accuracies.begin(), accuracies.end(), 0.0) / e;
  if (accuracies.size() < 2) return ci;
  double ss = 0.0;
  for (double a : accuracies) ss += (a - ci.mean) * (a - ci.mean);
  const double sd = std::sqrt(ss / (e - 1.0));
  ci.half_width = 1.96 * sd / std::sqrt(e);
  return ci;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("EP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EvalReport evaluate(const EmbeddingSet& data, const EvalConfig& cfg, unsigned threads) {
  cfg.validate();
  data.validate();
  const auto start = std::chrono::steady_clock::now();
  if (threads == 0) threads = default_thread_count();
  const auto workers = static_cast<std::size_t>(
      std::min<std::size_t>(threads, cfg.episodes));

  EvalReport report;
  report.config = cfg;
  report.seed = cfg.seed;
  report.accuracies.assign(cfg.episodes, 0.0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.episodes) return;
      try {
        const Episode ep = sample_episode(data, cfg, i);
        report.accuracies[i] = cfg.ssl == SslMode::PseudoLabel ? ssl_predict(data, ep, cfg).accuracy
                                                               : run_episode(data, ep, cfg).accuracy;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cfg.episodes);
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  const ConfidenceInterval ci = summarize(report.accuracies);
  report.mean = ci.mean;
  report.ci95 = ci.half_width;
  report.wall_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
          .count());
  return report;
}

}  // namespace epprop
