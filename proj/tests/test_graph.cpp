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

#include <cmath>
#include <random>

#include "epprop/graph.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace epprop;

namespace {

DenseMatrix three_points() {
  DenseMatrix z(3, 2);
  z << 0, 0, 1, 0, 0, 2;
  return z;
}

}  // namespace

TEST_CASE("pairwise_sq_distances") {
  SUBCASE("pythagorean pair") {
    DenseMatrix z(2, 2);
    z << 0, 0, 3, 4;
    DenseMatrix expected(2, 2);
    expected << 0, 25, 25, 0;
    CHECK(pairwise_sq_distances(z) == expected);
  }
  SUBCASE("single row") { CHECK(pairwise_sq_distances(DenseMatrix::Ones(1, 4)) == DenseMatrix::Zero(1, 1)); }
  SUBCASE("three points") {
    const DenseMatrix d2 = pairwise_sq_distances(three_points());
    CHECK(d2(0, 1) == 1.0);
    CHECK(d2(0, 2) == 4.0);
    CHECK(d2(1, 2) == 5.0);
    CHECK(d2 == d2.transpose());
    CHECK(d2.diagonal().isZero(0.0));
  }
  SUBCASE("non-finite input") {
    DenseMatrix z = DenseMatrix::Zero(2, 2);
    z(1, 1) = INFINITY;
    CHECK(error_code([&] { pairwise_sq_distances(z); }) == Errc::NonFiniteInput);
  }
}

TEST_CASE("adjacency bandwidth and weights") {
  SUBCASE("population variance of the off-diagonal distances") {
    const Adjacency adj = adjacency(pairwise_sq_distances(three_points()), GraphConfig{});
    // {1, 4, 5} twice: mean 10/3, variance (49 + 4 + 25) / 27 = 26/9.
    CHECK(adj.sigma2 == doctest::Approx(26.0 / 9.0).epsilon(1e-14));
    CHECK(adj.sigma2 == doctest::Approx(2.8889).epsilon(1e-4));
    CHECK(adj.matrix(0, 1) == doctest::Approx(0.7074).epsilon(1e-4));
    CHECK(adj.matrix(0, 2) == doctest::Approx(0.2504).epsilon(1e-3));
    CHECK(adj.matrix(1, 2) == doctest::Approx(0.1772).epsilon(1e-3));
    CHECK(adj.matrix.diagonal().isZero(0.0));
  }
  SUBCASE("zero variance falls back") {
    DenseMatrix d2(2, 2);
    d2 << 0, 25, 25, 0;
    const Adjacency adj = adjacency(d2, GraphConfig{});
    CHECK(adj.sigma2 == 1.0);
    CHECK(adj.matrix(0, 1) == doctest::Approx(std::exp(-25.0)).epsilon(1e-14));
  }
  SUBCASE("single node uses the fallback") {
    const Adjacency adj = adjacency(DenseMatrix::Zero(1, 1), GraphConfig{});
    CHECK(adj.sigma2 == 1.0);
    CHECK(adj.matrix(0, 0) == 0.0);
  }
  SUBCASE("override at the largest distance keeps weights above 1/e") {
    const DenseMatrix d2 = pairwise_sq_distances(three_points());
    GraphConfig cfg;
    cfg.sigma2_override = d2.maxCoeff();
    const Adjacency adj = adjacency(d2, cfg);
    CHECK(adj.sigma2 == 5.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(adj.matrix(i, j) >= std::exp(-1.0));
  }
  SUBCASE("invalid distance matrices") {
    DenseMatrix asym(2, 2);
    asym << 0, 1, 2, 0;
    CHECK(error_code([&] { adjacency(asym, GraphConfig{}); }) == Errc::InvalidDistanceMatrix);
    DenseMatrix negative(2, 2);
    negative << 0, -1, -1, 0;
    CHECK(error_code([&] { adjacency(negative, GraphConfig{}); }) == Errc::InvalidDistanceMatrix);
    DenseMatrix diagonal(2, 2);
    diagonal << 1, 1, 1, 0;
    CHECK(error_code([&] { adjacency(diagonal, GraphConfig{}); }) == Errc::InvalidDistanceMatrix);
  }
  SUBCASE("config validation") {
    GraphConfig cfg;
    cfg.alpha = 1.0;
    CHECK(error_code([&] { cfg.validate(); }) == Errc::InvalidConfig);
    cfg.alpha = 0.5;
    cfg.sigma2_override = 0.0;
    CHECK(error_code([&] { cfg.validate(); }) == Errc::InvalidConfig);
  }
}

TEST_CASE("normalized_laplacian") {
  SUBCASE("two nodes normalize to the swap matrix") {
    for (double a : {1e-6, 0.3, 1.0, 17.0}) {
      DenseMatrix adj(2, 2);
      adj << 0, a, a, 0;
      DenseMatrix expected(2, 2);
      expected << 0, 1, 1, 0;
      CHECK(oracle::max_diff(normalized_laplacian(adj), expected) < 1e-15);
    }
  }
  SUBCASE("equal-weight triangle") {
    const DenseMatrix adj = 0.4 * (DenseMatrix::Ones(3, 3) - DenseMatrix::Identity(3, 3));
    const DenseMatrix expected = 0.5 * (DenseMatrix::Ones(3, 3) - DenseMatrix::Identity(3, 3));
    CHECK(oracle::max_diff(normalized_laplacian(adj), expected) < 1e-15);
  }
  SUBCASE("single node") { CHECK(normalized_laplacian(DenseMatrix::Zero(1, 1)) == DenseMatrix::Zero(1, 1)); }
  SUBCASE("isolated node") {
    DenseMatrix adj = DenseMatrix::Zero(3, 3);
    adj(0, 1) = adj(1, 0) = 1.0;
    CHECK(error_code([&] { normalized_laplacian(adj); }) == Errc::IsolatedNode);
  }
}

TEST_CASE("propagator") {
  SUBCASE("two-node worked example") {
    DenseMatrix l(2, 2);
    l << 0, 1, 1, 0;
    DenseMatrix expected(2, 2);
    expected << 4.0 / 3, 2.0 / 3, 2.0 / 3, 4.0 / 3;
    const Propagator p = propagator(l, 0.5);
    CHECK(oracle::max_diff(p.matrix, expected) < 1e-14);
    CHECK(p.alpha == 0.5);
  }
  SUBCASE("vanishing alpha gives the identity") {
    std::mt19937_64 rng(1);
    const DenseMatrix z = oracle::random_matrix(rng, 7, 3);
    GraphConfig cfg;
    cfg.alpha = 1e-12;
    const Propagator p = build_propagator(z, cfg);
    CHECK(oracle::max_diff(p.matrix, DenseMatrix::Identity(7, 7)) <= 1e-10);
  }
  SUBCASE("random six-node graph matches the Neumann series") {
    std::mt19937_64 rng(6);
    const DenseMatrix z = oracle::random_matrix(rng, 6, 3);
    GraphConfig cfg;
    cfg.alpha = 0.3;
    const Propagator p = build_propagator(z, cfg);
    const oracle::Graph g = oracle::naive_graph(z);
    CHECK(p.sigma2 == doctest::Approx(g.sigma2).epsilon(1e-12));
    CHECK(oracle::max_diff(p.matrix, oracle::neumann(g.laplacian, 0.3, 200)) <= 1e-6);
  }
  SUBCASE("alpha out of range") {
    CHECK(error_code([&] { propagator(DenseMatrix::Zero(2, 2), 0.0); }) == Errc::InvalidConfig);
  }
  SUBCASE("laplacian outside the unit spectral radius") {
    DenseMatrix l(2, 2);
    l << 0, 3, 3, 0;
    CHECK(error_code([&] { propagator(l, 0.5); }) == Errc::NotPositiveDefinite);
  }
}

TEST_CASE("graph properties on random inputs") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> size(2, 16);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = size(rng);
    const auto m = 1 + trial % 5;
    const DenseMatrix z = oracle::random_matrix(rng, n, m, 0.5 + 2.0 * unit(rng));
    GraphConfig cfg;
    cfg.alpha = 0.05 + 0.9 * unit(rng);

    // Rotation and translation leave the adjacency unchanged.
    const Eigen::HouseholderQR<DenseMatrix> qr(oracle::random_matrix(rng, m, m));
    const DenseMatrix q = qr.householderQ();
    DenseMatrix moved = z * q;
    moved.rowwise() += oracle::random_matrix(rng, 1, m, 3.0).row(0);
    const Adjacency a0 = adjacency(pairwise_sq_distances(z), cfg);
    const Adjacency a1 = adjacency(pairwise_sq_distances(moved), cfg);
    CHECK(oracle::max_diff(a0.matrix, a1.matrix) <= 1e-9);

    // Permutation equivariance through every stage.
    const auto perm = oracle::random_permutation(rng, n);
    const DenseMatrix zp = oracle::permute_rows(z, perm);
    const DenseMatrix d2 = pairwise_sq_distances(z);
    const DenseMatrix d2p = pairwise_sq_distances(zp);
    CHECK(oracle::max_diff(d2p, oracle::permute_both(d2, perm)) <= 1e-9);
    const DenseMatrix l = normalized_laplacian(a0.matrix);
    const DenseMatrix lp = normalized_laplacian(adjacency(d2p, cfg).matrix);
    CHECK(oracle::max_diff(lp, oracle::permute_both(l, perm)) <= 1e-9);
    const Propagator p = build_propagator(z, cfg);
    const Propagator pp = build_propagator(zp, cfg);
    CHECK(oracle::max_diff(pp.matrix, oracle::permute_both(p.matrix, perm)) <= 1e-9);

    // Propagator structure.
    CHECK(oracle::max_diff(p.matrix, p.matrix.transpose()) <= 1e-9);
    CHECK(p.matrix.minCoeff() >= -1e-9);
    CHECK(p.matrix.diagonal().minCoeff() >= 1.0 - 1e-9);
  }
}

TEST_CASE("Neumann series converges to the propagator") {
  std::mt19937_64 rng(404);
  for (double alpha : {0.1, 0.5, 0.9}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto n = 2 + trial % 7;
      const DenseMatrix z = oracle::random_matrix(rng, n, 1 + trial % 4);
      GraphConfig cfg;
      cfg.alpha = alpha;
      const Propagator p = build_propagator(z, cfg);
      const DenseMatrix l = oracle::naive_graph(z).laplacian;
      const double coarse = oracle::max_diff(p.matrix, oracle::neumann(l, alpha, 20));
      const double fine = oracle::max_diff(p.matrix, oracle::neumann(l, alpha, 400));
      CHECK(fine <= coarse + 1e-15);
      CHECK(fine <= 1e-6);
    }
  }
}
