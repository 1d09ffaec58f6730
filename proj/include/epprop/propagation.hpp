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

#include "epprop/graph.hpp"

namespace epprop {

/// Which part of the propagator multiplies the embeddings.
enum class PropagationMode {
  Full,             ///< P
  OffDiagonalOnly,  ///< P with its diagonal zeroed
  DiagonalOnly,     ///< diag(P)
  Identity,         ///< I; the graph is still built for diagnostics
};

/// Names used on the command line: full, offdiag, diag, identity.
std::string_view to_string(PropagationMode mode) noexcept;
PropagationMode parse_propagation_mode(std::string_view name);

struct PropagatedEmbeddings {
  DenseMatrix embeddings;
  Propagator propagator;
};

/// z~_i = sum_j M(i,j) z_j with M selected by `mode`. P is applied as is, so
/// rows are not convex combinations and norms change.
PropagatedEmbeddings propagate_embeddings(const DenseMatrix& z, const GraphConfig& cfg,
                                          PropagationMode mode);

}  // namespace epprop
