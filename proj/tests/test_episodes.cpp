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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "epprop/diagnostics.hpp"
#include "epprop/episodes.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace epprop;

namespace {

EmbeddingSet clusters(std::size_t classes, std::size_t per_class, double spread,
                      std::uint64_t seed = 1, std::size_t dim = 0) {
  ClusterSpec spec;
  spec.n_classes = classes;
  spec.per_class = per_class;
  spec.dim = dim ? dim : classes;
  spec.spread = spread;
  spec.seed = seed;
  return gaussian_clusters(spec);
}

/// Two classes collapsed onto (0,0) and (100,0).
EmbeddingSet point_masses() {
  EmbeddingSet set;
  set.embeddings = DenseMatrix::Zero(8, 2);
  for (int i = 0; i < 8; ++i) {
    set.ids.push_back(std::to_string(i));
    set.labels.push_back(i < 4 ? "a" : "b");
    set.splits.push_back(Split::None);
    if (i >= 4) set.embeddings(i, 0) = 100.0;
  }
  return set;
}

}  // namespace

TEST_CASE("sample_episode shapes") {
  const EmbeddingSet data = clusters(20, 600, 0.3);
  EvalConfig cfg;
  cfg.n_way = 5;
  cfg.k_shot = 1;
  cfg.q_queries = 15;
  const Episode ep = sample_episode(data, cfg, 0);
  CHECK(ep.classes.size() == 5);
  CHECK(ep.support.size() == 5);
  CHECK(ep.query.size() == 75);
  CHECK(ep.unlabeled.empty());
  CHECK(std::is_sorted(ep.classes.begin(), ep.classes.end()));
  CHECK(std::all_of(ep.labeled_mask.begin(), ep.labeled_mask.end(), [](bool b) { return b; }));
}

TEST_CASE("labeled fraction rounds up per class") {
  const EmbeddingSet data = clusters(10, 40, 0.3);
  EvalConfig cfg;
  cfg.k_shot = 5;
  for (auto [fraction, expected] : {std::pair{0.4, 2}, {0.2, 1}, {0.6, 3}, {0.5, 3}, {1.0, 5}}) {
    cfg.labeled_fraction = fraction;
    CHECK(cfg.labeled_per_class() == static_cast<std::size_t>(expected));
    const Episode ep = sample_episode(data, cfg, 3);
    for (int c = 0; c < 5; ++c) {
      int labeled = 0;
      for (std::size_t i = 0; i < ep.support.size(); ++i) {
        if (ep.support_class[i] == c && ep.labeled_mask[i]) ++labeled;
      }
      CHECK(labeled == expected);
    }
  }
}

TEST_CASE("sampler preconditions") {
  EvalConfig cfg;
  cfg.k_shot = 5;
  cfg.q_queries = 15;
  CHECK(error_code([&] { sample_episode(clusters(6, 10, 0.3), cfg, 0); }) ==
        Errc::InsufficientClassSize);
  CHECK(error_code([&] { sample_episode(clusters(4, 50, 0.3), cfg, 0); }) ==
        Errc::InsufficientClassCount);
  cfg.q_queries = 0;
  CHECK(error_code([&] { sample_episode(clusters(6, 50, 0.3), cfg, 0); }) == Errc::InvalidConfig);
}

TEST_CASE("sampler invariants") {
  const EmbeddingSet data = clusters(12, 60, 0.3);
  EvalConfig cfg;
  cfg.n_way = 4;
  cfg.k_shot = 3;
  cfg.q_queries = 5;
  cfg.u_unlabeled = 10;
  cfg.labeled_fraction = 0.5;
  for (std::size_t e = 0; e < 200; ++e) {
    const Episode ep = sample_episode(data, cfg, e);
    const auto rows = ep.node_rows();
    CHECK(std::set<std::size_t>(rows.begin(), rows.end()).size() == rows.size());
    CHECK(ep.unlabeled.size() == 10);
    const auto truth = ep.node_classes();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(data.labels[rows[i]] == ep.classes[static_cast<std::size_t>(truth[i])]);
    }
    // Same (seed, index) gives the same episode regardless of call order.
    const Episode again = sample_episode(data, cfg, e);
    CHECK(again.node_rows() == rows);
    CHECK(again.labeled_mask == ep.labeled_mask);
  }
  CHECK(sample_episode(data, cfg, 0).node_rows() != sample_episode(data, cfg, 1).node_rows());
}

TEST_CASE("split selection") {
  EmbeddingSet data = clusters(10, 30, 0.3);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data.splits[i] = data.labels[i] < "c5" ? Split::Base : Split::Novel;
  }
  EvalConfig cfg;
  const Episode ep = sample_episode(data, cfg, 0);
  for (const auto& c : ep.classes) CHECK(c >= "c5");
  cfg.split = SplitSelection::Base;
  for (const auto& c : sample_episode(data, cfg, 0).classes) CHECK(c < "c5");
  cfg.split = SplitSelection::Val;
  CHECK(error_code([&] { sample_episode(data, cfg, 0); }) == Errc::InsufficientClassCount);
}

TEST_CASE("run_episode separates point masses under both classifiers") {
  const EmbeddingSet data = point_masses();
  EvalConfig cfg;
  cfg.n_way = 2;
  cfg.k_shot = 1;
  cfg.q_queries = 1;
  for (auto kind : {ClassifierKind::LabelProp, ClassifierKind::Prototypical}) {
    cfg.classifier = kind;
    for (std::size_t e = 0; e < 10; ++e) {
      CHECK(run_episode(data, sample_episode(data, cfg, e), cfg).accuracy == 1.0);
    }
  }
  // The LP scores agree with the Neumann oracle on the same batch.
  cfg.classifier = ClassifierKind::LabelProp;
  const Episode ep = sample_episode(data, cfg, 0);
  const DenseMatrix nodes = gather_nodes(data, ep);
  const auto labels = ep.node_labels();
  const DenseMatrix expected = oracle::lp_scores(oracle::propagate(nodes, 0.5), labels, 2, 0.5);
  CHECK(oracle::max_diff(run_episode(data, ep, cfg).scores.values, expected) <= 1e-9);
}

TEST_CASE("identity mode with prototypes is nearest-support classification in 1-shot") {
  const EmbeddingSet data = clusters(8, 40, 1.2, 5);
  EvalConfig cfg;
  cfg.k_shot = 1;
  cfg.q_queries = 10;
  cfg.mode = PropagationMode::Identity;
  cfg.classifier = ClassifierKind::Prototypical;
  for (std::size_t e = 0; e < 20; ++e) {
    const Episode ep = sample_episode(data, cfg, e);
    const EpisodeResult r = run_episode(data, ep, cfg);
    for (std::size_t q = 0; q < ep.query.size(); ++q) {
      double best = INFINITY;
      int nearest = -1;
      for (std::size_t s = 0; s < ep.support.size(); ++s) {
        const double d = (data.embeddings.row(static_cast<Eigen::Index>(ep.query[q])) -
                          data.embeddings.row(static_cast<Eigen::Index>(ep.support[s])))
                             .squaredNorm();
        if (d < best) {
          best = d;
          nearest = ep.support_class[s];
        }
      }
      CHECK(r.query_predictions[q] == nearest);
    }
  }
}

TEST_CASE("accuracy counts wrong predictions") {
  // Queries sit on the other class's support, so every prediction is wrong.
  EmbeddingSet data;
  const int n_way = 5;
  data.embeddings = DenseMatrix::Zero(n_way * 16, n_way);
  for (int c = 0; c < n_way; ++c) {
    for (int k = 0; k < 16; ++k) {
      const int row = c * 16 + k;
      data.ids.push_back(std::to_string(row));
      data.labels.push_back("k" + std::to_string(c));
      data.splits.push_back(Split::None);
      data.embeddings(row, k == 0 ? c : (c + 1) % n_way) = 10.0;
    }
  }
  // Hand-built episode: row 0 of each class is its support.
  Episode ep;
  for (int c = 0; c < n_way; ++c) {
    ep.classes.push_back("k" + std::to_string(c));
    ep.support.push_back(static_cast<std::size_t>(c * 16));
    ep.support_class.push_back(c);
    ep.labeled_mask.push_back(true);
    for (int k = 1; k < 16; ++k) {
      ep.query.push_back(static_cast<std::size_t>(c * 16 + k));
      ep.query_class.push_back(c);
    }
  }
  EvalConfig cfg;
  cfg.classifier = ClassifierKind::Prototypical;
  cfg.mode = PropagationMode::Identity;
  const EpisodeResult r = run_episode(data, ep, cfg);
  CHECK(r.query_predictions.size() == 75);
  CHECK(r.accuracy == 0.0);
}

TEST_CASE("ssl_predict") {
  const EmbeddingSet data = clusters(10, 60, 0.2);
  EvalConfig cfg;
  cfg.k_shot = 1;
  cfg.q_queries = 5;
  SUBCASE("pool size and second-pass label count") {
    cfg.u_unlabeled = 100;
    const EmbeddingSet big = clusters(10, 130, 0.2);
    const Episode ep = sample_episode(big, cfg, 0);
    const SslResult r = ssl_predict(big, ep, cfg);
    CHECK(r.pool.size() == 100);
    CHECK(r.labeled_rows == cfg.n_way * cfg.k_shot + 100);
    CHECK(r.query_predictions.size() == 25);
  }
  SUBCASE("pool points on top of a support inherit its class") {
    cfg.u_unlabeled = 5;
    Episode ep = sample_episode(data, cfg, 2);
    for (std::size_t i = 0; i < ep.unlabeled.size(); ++i) ep.unlabeled[i] = ep.support[i];
    // Duplicate rows are fine for inference: the pool copies the supports.
    const SslResult r = ssl_predict(data, ep, cfg);
    for (std::size_t i = 0; i < r.pool.size(); ++i) CHECK(r.pseudo_labels[i] == ep.support_class[i]);
  }
  SUBCASE("hidden supports form the pool") {
    cfg.k_shot = 5;
    cfg.labeled_fraction = 0.4;
    const Episode ep = sample_episode(data, cfg, 4);
    const SslResult r = ssl_predict(data, ep, cfg);
    CHECK(r.pool.size() == 15);
    CHECK(r.labeled_rows == 25);
  }
  SUBCASE("no pool") {
    const Episode ep = sample_episode(data, cfg, 0);
    CHECK(error_code([&] { ssl_predict(data, ep, cfg); }) == Errc::NoUnlabeledPool);
  }
}

TEST_CASE("ssl does not hurt on easy data") {
  const EmbeddingSet data = clusters(10, 60, 0.1);
  EvalConfig cfg;
  cfg.k_shot = 1;
  cfg.q_queries = 5;
  cfg.u_unlabeled = 20;
  double base = 0.0, ssl = 0.0;
  const int episodes = 1000;
  for (int e = 0; e < episodes; ++e) {
    const Episode ep = sample_episode(data, cfg, static_cast<std::size_t>(e));
    base += run_episode(data, ep, cfg).accuracy;
    ssl += ssl_predict(data, ep, cfg).accuracy;
  }
  CHECK(ssl / episodes >= base / episodes - 0.01);
}

TEST_CASE("summarize") {
  const std::vector<double> perfect(10, 1.0);
  const ConfidenceInterval a = summarize(perfect);
  CHECK(a.mean == 1.0);
  CHECK(a.half_width == 0.0);

  const std::vector<double> two{0.0, 1.0};
  const ConfidenceInterval b = summarize(two);
  CHECK(b.mean == 0.5);
  CHECK(b.half_width == doctest::Approx(1.96 * std::sqrt(0.5) / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(b.half_width == doctest::Approx(0.98).epsilon(1e-12));

  const std::vector<double> one{0.3};
  CHECK(summarize(one).half_width == 0.0);
}

TEST_CASE("evaluate is deterministic across thread counts") {
  const EmbeddingSet data = clusters(10, 40, 0.8);
  EvalConfig cfg;
  cfg.episodes = 60;
  cfg.q_queries = 5;
  const EvalReport one = evaluate(data, cfg, 1);
  const EvalReport four = evaluate(data, cfg, 4);
  CHECK(one.accuracies.size() == 60);
  CHECK(one.accuracies == four.accuracies);
  CHECK(one.mean == four.mean);
  CHECK(one.ci95 == four.ci95);
  CHECK(one.mean >= 0.0);
  CHECK(one.mean <= 1.0);

  cfg.ssl = SslMode::PseudoLabel;
  CHECK(error_code([&] { evaluate(data, cfg, 2); }) == Errc::NoUnlabeledPool);
}
