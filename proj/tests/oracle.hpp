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

// Reference computations for the tests. Everything here is written with
// plain loops and a truncated Neumann series, independently of the library's
// Cholesky-based path.

#include <cmath>
#include <cstdint>
#include <optional>
#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;

struct Graph {
  Matrix d2;
  double sigma2 = 0.0;
  Matrix adjacency;
  Matrix laplacian;
};

inline Graph naive_graph(const Matrix& z, std::optional<double> sigma2_override = std::nullopt) {
  const auto n = z.rows();
  Graph g;
  g.d2 = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < z.cols(); ++k) s += (z(i, k) - z(j, k)) * (z(i, k) - z(j, k));
      g.d2(i, j) = s;
    }

  std::vector<double> off;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) off.push_back(g.d2(i, j));
  double var = 0.0;
  if (!off.empty()) {
    double mean = 0.0;
    for (double v : off) mean += v;
    mean /= static_cast<double>(off.size());
    for (double v : off) var += (v - mean) * (v - mean);
    var /= static_cast<double>(off.size());
  }
  g.sigma2 = sigma2_override ? *sigma2_override : (var < 1e-12 ? 1.0 : var);

  g.adjacency = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) g.adjacency(i, j) = std::exp(-g.d2(i, j) / g.sigma2);

  g.laplacian = Matrix::Zero(n, n);
  if (n > 1) {
    std::vector<double> deg(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) deg[static_cast<std::size_t>(i)] += g.adjacency(i, j);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        g.laplacian(i, j) = g.adjacency(i, j) / std::sqrt(deg[static_cast<std::size_t>(i)] *
                                                          deg[static_cast<std::size_t>(j)]);
  }
  return g;
}

/// sum_{k=0}^{terms} alpha^k L^k
inline Matrix neumann(const Matrix& laplacian, double alpha, int terms) {
  const auto n = laplacian.rows();
  Matrix sum = Matrix::Identity(n, n);
  Matrix power = Matrix::Identity(n, n);
  for (int k = 1; k <= terms; ++k) {
    power = alpha * (power * laplacian);
    sum += power;
  }
  return sum;
}

inline Matrix propagate(const Matrix& z, double alpha, int terms = 600) {
  return neumann(naive_graph(z).laplacian, alpha, terms) * z;
}

/// P_z * Y with the graph rebuilt on z; label -1 is unlabeled.
inline Matrix lp_scores(const Matrix& z, const std::vector<int>& labels, int classes, double alpha,
                        int terms = 600) {
  Matrix y = Matrix::Zero(z.rows(), classes);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= 0) y(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  return neumann(naive_graph(z).laplacian, alpha, terms) * y;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                            double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

inline std::vector<Eigen::Index> random_permutation(std::mt19937_64& rng, Eigen::Index n) {
  std::vector<Eigen::Index> p(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// out.row(i) = m.row(perm[i])
inline Matrix permute_rows(const Matrix& m, const std::vector<Eigen::Index>& perm) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(perm[i]);
  return out;
}

/// out(i, j) = m(perm[i], perm[j])
inline Matrix permute_both(const Matrix& m, const std::vector<Eigen::Index>& perm) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = 0; j < perm.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(perm[i], perm[j]);
  return out;
}

inline double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace oracle
