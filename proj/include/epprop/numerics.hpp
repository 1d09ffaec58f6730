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

#include <string_view>

#include <Eigen/Dense>

namespace epprop {

/// Row-major semantics, 64-bit entries. Every public entry point validates
/// shape and finiteness on the way in.
using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;

/// Throws NonFiniteInput on NaN/Inf and DimensionMismatch on an empty matrix.
void require_dense(const DenseMatrix& m, std::string_view what);

/// |m(i,j) - m(j,i)| <= rel_tol * max(1, max|m|) for every pair.
bool is_symmetric(const DenseMatrix& m, double rel_tol);

double max_abs(const DenseMatrix& m);

/// Solves M X = B for symmetric positive definite M via a Cholesky
/// factorization. Throws NotSymmetric, NotPositiveDefinite or
/// DimensionMismatch.
DenseMatrix solve_spd(const DenseMatrix& m, const DenseMatrix& b);

}  // namespace epprop
