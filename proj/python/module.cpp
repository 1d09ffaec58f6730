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

// Python bindings for the epprop library.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "epprop/diagnostics.hpp"
#include "epprop/episodes.hpp"
#include "epprop/error.hpp"
#include "epprop/io.hpp"

namespace py = pybind11;
using namespace epprop;

namespace {

std::vector<std::string> split_names(const EmbeddingSet& s) {
  std::vector<std::string> out;
  out.reserve(s.splits.size());
  for (Split sp : s.splits) out.emplace_back(to_string(sp));
  return out;
}

EmbeddingSet make_set(DenseMatrix embeddings, std::vector<std::string> labels,
                      std::optional<std::vector<std::string>> ids,
                      std::optional<std::vector<std::string>> splits) {
  EmbeddingSet s;
  s.embeddings = std::move(embeddings);
  s.labels = std::move(labels);
  if (ids) {
    s.ids = std::move(*ids);
  } else {
    for (std::size_t i = 0; i < s.labels.size(); ++i) s.ids.push_back(std::to_string(i));
  }
  if (splits) {
    for (const auto& name : *splits) s.splits.push_back(parse_split(name));
  } else {
    s.splits.assign(s.labels.size(), Split::None);
  }
  s.validate();
  return s;
}

GraphConfig graph_config(double alpha, std::optional<double> sigma2) {
  GraphConfig g;
  g.alpha = alpha;
  g.sigma2_override = sigma2;
  g.validate();
  return g;
}

}  // namespace

PYBIND11_MODULE(_epprop, m) {
  m.doc() = "Embedding propagation and label propagation for few-shot episodes";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<GraphConfig>(m, "GraphConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &GraphConfig::alpha)
      .def_readwrite("sigma2_override", &GraphConfig::sigma2_override)
      .def_readwrite("variance_floor", &GraphConfig::variance_floor)
      .def_readwrite("fallback_sigma2", &GraphConfig::fallback_sigma2)
      .def("validate", &GraphConfig::validate);

  m.def("pairwise_sq_distances", &pairwise_sq_distances, py::arg("z"));
  m.def(
      "adjacency",
      [](const DenseMatrix& d2, double alpha, std::optional<double> sigma2) {
        const Adjacency a = adjacency(d2, graph_config(alpha, sigma2));
        return py::make_tuple(a.matrix, a.sigma2);
      },
      py::arg("d2"), py::arg("alpha") = 0.5, py::arg("sigma2") = py::none(),
      "Returns (A, sigma2 used).");
  m.def("normalized_laplacian", &normalized_laplacian, py::arg("a"));
  m.def(
      "propagator",
      [](const DenseMatrix& z, double alpha, std::optional<double> sigma2) {
        const Propagator p = build_propagator(z, graph_config(alpha, sigma2));
        return py::make_tuple(p.matrix, p.sigma2);
      },
      py::arg("z"), py::arg("alpha") = 0.5, py::arg("sigma2") = py::none(),
      "P = (I - alpha L)^-1 for the graph on the rows of z. Returns (P, sigma2 used).");
  m.def(
      "propagate",
      [](const DenseMatrix& z, double alpha, const std::string& mode, std::optional<double> sigma2) {
        return propagate_embeddings(z, graph_config(alpha, sigma2), parse_propagation_mode(mode))
            .embeddings;
      },
      py::arg("z"), py::arg("alpha") = 0.5, py::arg("mode") = "full", py::arg("sigma2") = py::none());

  m.attr("UNLABELED") = kUnlabeled;
  m.def(
      "label_propagation_scores",
      [](const DenseMatrix& z, const std::vector<int>& labels, std::size_t n_classes, double alpha,
         std::optional<double> sigma2) {
        return label_propagation_scores(z, LabelMatrix(labels, n_classes), graph_config(alpha, sigma2))
            .values;
      },
      py::arg("z"), py::arg("labels"), py::arg("n_classes"), py::arg("alpha") = 0.5,
      py::arg("sigma2") = py::none(), "Labels use UNLABELED (-1) for unlabeled rows.");
  m.def(
      "prototypical_scores",
      [](const DenseMatrix& support, const std::vector<int>& labels, std::size_t n_classes,
         const DenseMatrix& query) { return prototypical_scores(support, labels, n_classes, query).values; },
      py::arg("support"), py::arg("labels"), py::arg("n_classes"), py::arg("query"));
  m.def("softmax", [](const DenseMatrix& s) { return softmax_probs(ClassScores{s}); }, py::arg("scores"));
  m.def("predict", py::overload_cast<const DenseMatrix&>(&predict), py::arg("scores"));

  py::class_<EmbeddingSet>(m, "EmbeddingSet")
      .def(py::init(&make_set), py::arg("embeddings"), py::arg("labels"), py::arg("ids") = py::none(),
           py::arg("splits") = py::none())
      .def_readonly("ids", &EmbeddingSet::ids)
      .def_readonly("labels", &EmbeddingSet::labels)
      .def_property_readonly("splits", &split_names)
      .def_readonly("embeddings", &EmbeddingSet::embeddings)
      .def("__len__", &EmbeddingSet::size)
      .def_property_readonly("dim", &EmbeddingSet::dim)
      .def("classes", [](const EmbeddingSet& s) { return s.classes(); })
      .def("class_indices", &EmbeddingSet::class_indices);

  m.def(
      "load_embeddings",
      [](const std::filesystem::path& path, const std::string& format) {
        return load_embeddings(path, parse_format(format));
      },
      py::arg("path"), py::arg("format") = "auto");
  m.def(
      "save_embeddings",
      [](const EmbeddingSet& s, const std::filesystem::path& path, const std::string& format) {
        save_embeddings(s, path, parse_format(format));
      },
      py::arg("data"), py::arg("path"), py::arg("format") = "auto");

  py::class_<EvalConfig>(m, "EvalConfig")
      .def(py::init<>())
      .def_readwrite("n_way", &EvalConfig::n_way)
      .def_readwrite("k_shot", &EvalConfig::k_shot)
      .def_readwrite("q_queries", &EvalConfig::q_queries)
      .def_readwrite("u_unlabeled", &EvalConfig::u_unlabeled)
      .def_readwrite("labeled_fraction", &EvalConfig::labeled_fraction)
      .def_readwrite("episodes", &EvalConfig::episodes)
      .def_readwrite("graph", &EvalConfig::graph)
      .def_readwrite("inference_alpha", &EvalConfig::inference_alpha)
      .def_readwrite("seed", &EvalConfig::seed)
      .def_property(
          "alpha", [](const EvalConfig& c) { return c.graph.alpha; },
          [](EvalConfig& c, double a) { c.graph.alpha = a; })
      .def_property(
          "mode", [](const EvalConfig& c) { return std::string(to_string(c.mode)); },
          [](EvalConfig& c, const std::string& s) { c.mode = parse_propagation_mode(s); })
      .def_property(
          "classifier", [](const EvalConfig& c) { return std::string(to_string(c.classifier)); },
          [](EvalConfig& c, const std::string& s) { c.classifier = parse_classifier(s); })
      .def_property(
          "ssl", [](const EvalConfig& c) { return c.ssl == SslMode::PseudoLabel; },
          [](EvalConfig& c, bool on) { c.ssl = on ? SslMode::PseudoLabel : SslMode::Off; })
      .def_property(
          "split", [](const EvalConfig& c) { return std::string(to_string(c.split)); },
          [](EvalConfig& c, const std::string& s) { c.split = parse_split_selection(s); })
      .def("validate", &EvalConfig::validate);

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("accuracies", &EvalReport::accuracies)
      .def_readonly("mean", &EvalReport::mean)
      .def_readonly("ci95", &EvalReport::ci95)
      .def_readonly("seed", &EvalReport::seed)
      .def_readonly("wall_ms", &EvalReport::wall_ms)
      .def("to_json", [](const EvalReport& r) { return to_json(r).dump(); });

  m.def("evaluate", &evaluate, py::arg("data"), py::arg("config"), py::arg("threads") = 0u,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "ci95",
      [](const std::vector<double>& acc) {
        const ConfidenceInterval ci = summarize(acc);
        return py::make_tuple(ci.mean, ci.half_width);
      },
      py::arg("accuracies"), "Returns (mean, 1.96 s / sqrt(E)).");

  py::class_<Episode>(m, "Episode")
      .def_readonly("classes", &Episode::classes)
      .def_readonly("support", &Episode::support)
      .def_readonly("query", &Episode::query)
      .def_readonly("unlabeled", &Episode::unlabeled)
      .def("node_rows", &Episode::node_rows)
      .def("node_classes", &Episode::node_classes)
      .def("node_labels", &Episode::node_labels);
  m.def("sample_episode", &sample_episode, py::arg("data"), py::arg("config"), py::arg("index"));
  m.def(
      "run_episode",
      [](const EmbeddingSet& d, const Episode& ep, const EvalConfig& c) {
        const EpisodeResult r = run_episode(d, ep, c);
        return py::make_tuple(r.accuracy, r.query_predictions);
      },
      py::arg("data"), py::arg("episode"), py::arg("config"), "Returns (accuracy, query predictions).");
  m.def(
      "ssl_predict",
      [](const EmbeddingSet& d, const Episode& ep, const EvalConfig& c) {
        const SslResult r = ssl_predict(d, ep, c);
        return py::make_tuple(r.accuracy, r.query_predictions, r.pseudo_labels);
      },
      py::arg("data"), py::arg("episode"), py::arg("config"),
      "Returns (accuracy, query predictions, pool pseudo-labels).");
  m.def(
      "interpolation_curve",
      [](const EmbeddingSet& d, const Episode& ep, std::size_t i, std::size_t j, std::size_t grid,
         const EvalConfig& c) {
        const InterpolationCurve curve = interpolation_curve(d, ep, i, j, grid, c);
        return py::make_tuple(curve.weights, curve.probs, curve.max_jump);
      },
      py::arg("data"), py::arg("episode"), py::arg("i"), py::arg("j"), py::arg("grid") = 21,
      py::arg("config") = EvalConfig{}, "Returns (weights, p(class of i), max jump).");

  m.def("two_moons", &two_moons, py::arg("n_per_moon"), py::arg("noise") = 0.0, py::arg("seed") = 0);
  m.def(
      "gaussian_clusters",
      [](std::size_t n_classes, std::size_t per_class, std::size_t dim, double spread,
         double center_distance, std::uint64_t seed) {
        ClusterSpec s;
        s.n_classes = n_classes;
        s.per_class = per_class;
        s.dim = dim;
        s.spread = spread;
        s.center_distance = center_distance;
        s.seed = seed;
        return gaussian_clusters(s);
      },
      py::arg("n_classes"), py::arg("per_class"), py::arg("dim"), py::arg("spread") = 0.1,
      py::arg("center_distance") = 1.0, py::arg("seed") = 0);
  m.def(
      "compactness_metrics",
      [](const DenseMatrix& z, const std::vector<int>& labels, const DenseMatrix& zt) {
        const CompactnessMetrics c = compactness_metrics(z, labels, zt);
        py::dict d;
        d["intra_before"] = c.intra_before;
        d["inter_before"] = c.inter_before;
        d["intra_after"] = c.intra_after;
        d["inter_after"] = c.inter_after;
        d["intra_ratio"] = c.intra_ratio;
        d["inter_ratio"] = c.inter_ratio;
        return d;
      },
      py::arg("z"), py::arg("labels"), py::arg("z_tilde"));
}
