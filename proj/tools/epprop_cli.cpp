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

// epprop command-line tool.
//
// Exit codes: 0 ok, 1 usage error, 2 data or parse error.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "epprop/diagnostics.hpp"
#include "epprop/episodes.hpp"
#include "epprop/error.hpp"
#include "epprop/io.hpp"

using namespace epprop;

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;

const std::vector<std::string> kModes{"full", "offdiag", "diag", "identity"};

struct EvalFlags {
  std::string data;
  std::string out;
  std::string mode = "full";
  std::string classifier = "lp";
  std::string split = "auto";
  std::size_t n_way = 5;
  std::size_t k_shot = 1;
  std::size_t q_queries = 15;
  std::size_t episodes = 1000;
  std::size_t unlabeled = 0;
  double labeled_fraction = 1.0;
  double alpha = 0.5;
  double inference_alpha = 0.0;
  std::uint64_t seed = 42;
};

void add_eval_flags(CLI::App* cmd, EvalFlags& f) {
  cmd->add_option("--data", f.data, "embedding file (.csv or binary)")->required();
  cmd->add_option("--n-way", f.n_way)->capture_default_str();
  cmd->add_option("--k-shot", f.k_shot)->capture_default_str();
  cmd->add_option("--q-queries", f.q_queries)->capture_default_str();
  cmd->add_option("--episodes", f.episodes)->capture_default_str();
  cmd->add_option("--alpha", f.alpha)->capture_default_str();
  cmd->add_option("--inference-alpha", f.inference_alpha, "label propagation alpha, defaults to --alpha");
  cmd->add_option("--mode", f.mode)->check(CLI::IsMember(kModes))->capture_default_str();
  cmd->add_option("--classifier", f.classifier)->check(CLI::IsMember({"lp", "proto"}))->capture_default_str();
  cmd->add_option("--split", f.split, "auto|all|base|val|novel")
      ->check(CLI::IsMember({"auto", "all", "base", "val", "novel"}))
      ->capture_default_str();
  cmd->add_option("--seed", f.seed)->capture_default_str();
  cmd->add_option("--out", f.out, "JSON report; stdout when omitted");
}

EvalConfig eval_config(const EvalFlags& f, const CLI::App* cmd) {
  EvalConfig cfg;
  cfg.n_way = f.n_way;
  cfg.k_shot = f.k_shot;
  cfg.q_queries = f.q_queries;
  cfg.episodes = f.episodes;
  cfg.u_unlabeled = f.unlabeled;
  cfg.labeled_fraction = f.labeled_fraction;
  cfg.graph.alpha = f.alpha;
  if (const auto* opt = cmd->get_option_no_throw("--inference-alpha"); opt && opt->count() > 0)
    cfg.inference_alpha = f.inference_alpha;
  cfg.mode = parse_propagation_mode(f.mode);
  cfg.classifier = parse_classifier(f.classifier);
  cfg.split = parse_split_selection(f.split);
  cfg.seed = f.seed;
  return cfg;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty())
    std::cout << text;
  else
    write_text_file(out, text);
}

int run_evaluate(const EvalFlags& f, const CLI::App* cmd, bool ssl) {
  EvalConfig cfg = eval_config(f, cmd);
  if (ssl) cfg.ssl = SslMode::PseudoLabel;
  cfg.validate();
  const EmbeddingSet data = load_embeddings(f.data);
  const EvalReport report = evaluate(data, cfg);
  emit(f.out, to_json(report).dump(2) + "\n");
  std::fprintf(stderr, "%zu episodes  accuracy %.4f +- %.4f  (%llu ms)\n", report.accuracies.size(),
               report.mean, report.ci95, static_cast<unsigned long long>(report.wall_ms));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedding propagation for few-shot episodes"};
  app.require_subcommand(1);

  EvalFlags ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "episodic evaluation, JSON report");
  add_eval_flags(evaluate_cmd, ev);

  EvalFlags sf;
  auto* ssl_cmd = app.add_subcommand("ssl", "evaluation with pseudo-labeled unlabeled pool");
  add_eval_flags(ssl_cmd, sf);
  ssl_cmd->add_option("--unlabeled", sf.unlabeled, "unlabeled rows per episode")->capture_default_str();
  ssl_cmd->add_option("--labeled-fraction", sf.labeled_fraction, "share of supports that keep their label")
      ->capture_default_str();

  std::string prop_data, prop_out, prop_mode = "full", prop_format = "auto";
  double prop_alpha = 0.5;
  auto* propagate_cmd = app.add_subcommand("propagate", "propagate a whole embedding file as one batch");
  propagate_cmd->add_option("--data", prop_data)->required();
  propagate_cmd->add_option("--alpha", prop_alpha)->capture_default_str();
  propagate_cmd->add_option("--mode", prop_mode)->check(CLI::IsMember(kModes))->capture_default_str();
  propagate_cmd->add_option("--out", prop_out)->required();
  propagate_cmd->add_option("--format", prop_format, "auto|csv|binary")
      ->check(CLI::IsMember({"auto", "csv", "binary"}))
      ->capture_default_str();

  std::size_t moons_n = 200, moons_batches = 0, moons_batch_size = 64;
  double moons_noise = 0.1, moons_alpha = 0.5;
  std::uint64_t moons_seed = 42;
  std::string moons_out, moons_mode = "full";
  auto* moons_cmd = app.add_subcommand("moons", "two-moons points and their propagated positions, CSV");
  moons_cmd->add_option("--n", moons_n, "points per moon")->capture_default_str();
  moons_cmd->add_option("--noise", moons_noise)->capture_default_str();
  moons_cmd->add_option("--seed", moons_seed)->capture_default_str();
  moons_cmd->add_option("--alpha", moons_alpha)->capture_default_str();
  moons_cmd->add_option("--mode", moons_mode)->check(CLI::IsMember(kModes))->capture_default_str();
  moons_cmd->add_option("--batches", moons_batches, "extra random-subset batches")->capture_default_str();
  moons_cmd->add_option("--batch-size", moons_batch_size)->capture_default_str();
  moons_cmd->add_option("--out", moons_out)->required();

  ClusterSpec blobs;
  std::string blobs_out;
  auto* blobs_cmd = app.add_subcommand("blobs", "Gaussian clusters as an embedding file");
  blobs_cmd->add_option("--classes", blobs.n_classes)->capture_default_str();
  blobs_cmd->add_option("--per-class", blobs.per_class)->capture_default_str();
  blobs_cmd->add_option("--dim", blobs.dim, "must be >= --classes")->capture_default_str();
  blobs_cmd->add_option("--spread", blobs.spread, "RMS radius around each center")->capture_default_str();
  blobs_cmd->add_option("--center-distance", blobs.center_distance)->capture_default_str();
  blobs_cmd->add_option("--seed", blobs.seed)->capture_default_str();
  blobs_cmd->add_option("--out", blobs_out)->required();

  EvalFlags in;
  std::size_t pairs = 20, grid = 21, episode = 0;
  auto* interp_cmd = app.add_subcommand("interp", "interpolation probability curves, CSV");
  interp_cmd->add_option("--data", in.data)->required();
  interp_cmd->add_option("--n-way", in.n_way)->capture_default_str();
  interp_cmd->add_option("--k-shot", in.k_shot)->capture_default_str();
  interp_cmd->add_option("--q-queries", in.q_queries)->capture_default_str();
  interp_cmd->add_option("--pairs", pairs)->capture_default_str();
  interp_cmd->add_option("--grid", grid)->capture_default_str();
  interp_cmd->add_option("--alpha", in.alpha)->capture_default_str();
  interp_cmd->add_option("--mode", in.mode)->check(CLI::IsMember(kModes))->capture_default_str();
  interp_cmd->add_option("--split", in.split)
      ->check(CLI::IsMember({"auto", "all", "base", "val", "novel"}))
      ->capture_default_str();
  interp_cmd->add_option("--episode", episode, "episode index")->capture_default_str();
  interp_cmd->add_option("--seed", in.seed)->capture_default_str();
  interp_cmd->add_option("--out", in.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*evaluate_cmd) return run_evaluate(ev, evaluate_cmd, false);
    if (*ssl_cmd) return run_evaluate(sf, ssl_cmd, true);

    if (*propagate_cmd) {
      GraphConfig g;
      g.alpha = prop_alpha;
      g.validate();
      const PropagationMode mode = parse_propagation_mode(prop_mode);
      const EmbeddingFormat format = parse_format(prop_format);
      EmbeddingSet set = load_embeddings(prop_data);
      auto out = propagate_embeddings(set.embeddings, g, mode);
      std::fprintf(stderr, "propagated %zu rows, sigma2 %.6g\n", set.size(), out.propagator.sigma2);
      set.embeddings = std::move(out.embeddings);
      save_embeddings(set, prop_out, format);
      return 0;
    }

    if (*moons_cmd) {
      GraphConfig g;
      g.alpha = moons_alpha;
      g.validate();
      const PropagationMode mode = parse_propagation_mode(moons_mode);
      const EmbeddingSet moons = two_moons(moons_n, moons_noise, moons_seed);
      const auto full = propagate_embeddings(moons.embeddings, g, mode);
      std::ostringstream csv;
      csv.precision(17);
      // batch -1 is the whole set in one graph
      csv << "id,label,batch,x,y,px,py\n";
      for (std::size_t r = 0; r < moons.size(); ++r) {
        const auto i = static_cast<Eigen::Index>(r);
        csv << moons.ids[r] << ',' << moons.labels[r] << ",-1," << moons.embeddings(i, 0) << ','
            << moons.embeddings(i, 1) << ',' << full.embeddings(i, 0) << ',' << full.embeddings(i, 1)
            << '\n';
      }
      if (moons_batches > 0) {
        const auto bp = batch_projections(moons, moons_batches, moons_batch_size, g, mode, moons_seed);
        for (std::size_t k = 0; k < bp.rows.size(); ++k) {
          const auto r = static_cast<Eigen::Index>(bp.rows[k]);
          const auto i = static_cast<Eigen::Index>(k);
          csv << moons.ids[bp.rows[k]] << ',' << moons.labels[bp.rows[k]] << ',' << bp.batches[k] << ','
              << moons.embeddings(r, 0) << ',' << moons.embeddings(r, 1) << ',' << bp.embeddings(i, 0)
              << ',' << bp.embeddings(i, 1) << '\n';
        }
      }
      write_text_file(moons_out, csv.str());
      const auto metrics = compactness_metrics(moons.embeddings, moons.class_indices(), full.embeddings);
      std::cout << to_json(metrics).dump(2) << '\n';
      return 0;
    }

    if (*blobs_cmd) {
      save_embeddings(gaussian_clusters(blobs), blobs_out);
      return 0;
    }

    if (*interp_cmd) {
      EvalConfig cfg = eval_config(in, interp_cmd);
      cfg.episodes = 1;
      cfg.validate();
      if (cfg.n_way < 2) raise(Errc::InvalidConfig, "interp needs --n-way of at least 2");
      const EmbeddingSet data = load_embeddings(in.data);
      const Episode ep = sample_episode(data, cfg, episode);
      std::ostringstream csv;
      csv.precision(17);
      csv << "pair,i,j,class_i,class_j,weight,prob\n";
      double jumps = 0.0;
      const auto chosen = sample_interpolation_pairs(ep, pairs, in.seed);
      for (std::size_t p = 0; p < chosen.size(); ++p) {
        const auto curve = interpolation_curve(data, ep, chosen[p].first, chosen[p].second, grid, cfg);
        jumps += curve.max_jump;
        for (std::size_t k = 0; k < curve.weights.size(); ++k) {
          csv << p << ',' << curve.i << ',' << curve.j << ',' << ep.classes[curve.class_i] << ','
              << ep.classes[curve.class_j] << ',' << curve.weights[k] << ',' << curve.probs[k] << '\n';
        }
      }
      write_text_file(in.out, csv.str());
      std::printf("%zu pairs, mean max jump %.6f\n", chosen.size(),
                  chosen.empty() ? 0.0 : jumps / static_cast<double>(chosen.size()));
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "epprop: %s\n", e.what());
    return e.code() == Errc::InvalidConfig ? kUsage : kData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "epprop: %s\n", e.what());
    return kData;
  }
  return kUsage;
}
