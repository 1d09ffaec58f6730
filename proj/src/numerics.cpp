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

#include "epprop/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epprop/error.hpp"

namespace epprop {

namespace {
constexpr double kSymmetryTol = 1e-9;
}

void require_dense(const DenseMatrix& m, std::string_view what) {
  if (m.rows() < 1 || m.cols() < 1) {
    raise(Errc::DimensionMismatch, std::string(what) + " must have at least one row and column");
  }
  if (!m.allFinite()) {
    raise(Errc::NonFiniteInput, std::string(what) + " contains NaN or Inf");
  }
}

double max_abs(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_symmetric(const DenseMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double tol = rel_tol * std::max(1.0, max_abs(m));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
    }
  }
  return true;
}

DenseMatrix solve_spd(const DenseMatrix& m, const DenseMatrix& b) {
  require_dense(m, "solve_spd: M");
  require_dense(b, "solve_spd: B");
  if (m.rows() != m.cols()) {
    raise(Errc::DimensionMismatch, "solve_spd: M is " + std::to_string(m.rows()) + "x" +
                                       std::to_string(m.cols()) + ", expected square");
  }
  if (b.rows() != m.rows()) {
    raise(Errc::DimensionMismatch, "solve_spd: B has " + std::to_string(b.rows()) +
                                       " rows, M has " + std::to_string(m.rows()));
  }
  if (!is_symmetric(m, kSymmetryTol)) {
    raise(Errc::NotSymmetric, "solve_spd: M is not symmetric");
  }

  // Eigen's LLT reads the lower triangle and stops at the first pivot <= 0.
  const Eigen::LLT<DenseMatrix, Eigen::Lower> llt(m);
  if (llt.info() != Eigen::Success) {
    raise(Errc::NotPositiveDefinite, "solve_spd: Cholesky pivot <= 0");
  }
  return llt.solve(b);
}

}  // namespace epprop
