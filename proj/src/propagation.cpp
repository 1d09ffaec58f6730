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

#include "epprop/propagation.hpp"

#include <string>

#include "epprop/error.hpp"

namespace epprop {

std::string_view to_string(PropagationMode mode) noexcept {
  switch (mode) {
    case PropagationMode::Full: return "full";
    case PropagationMode::OffDiagonalOnly: return "offdiag";
    case PropagationMode::DiagonalOnly: return "diag";
    case PropagationMode::Identity: return "identity";
  }
  return "full";
}

PropagationMode parse_propagation_mode(std::string_view name) {
  if (name == "full") return PropagationMode::Full;
  if (name == "offdiag") return PropagationMode::OffDiagonalOnly;
  if (name == "diag") return PropagationMode::DiagonalOnly;
  if (name == "identity") return PropagationMode::Identity;
  raise(Errc::InvalidConfig, "unknown propagation mode '" + std::string(name) + "'");
}

PropagatedEmbeddings propagate_embeddings(const DenseMatrix& z, const GraphConfig& cfg,
                                          PropagationMode mode) {
  Propagator prop = build_propagator(z, cfg);
  DenseMatrix out;
  switch (mode) {
    case PropagationMode::Full:
      out = prop.matrix * z;
      break;
    case PropagationMode::OffDiagonalOnly: {
      DenseMatrix off = prop.matrix;
      off.diagonal().setZero();
      out = off * z;
      break;
    }
    case PropagationMode::DiagonalOnly:
      out = prop.matrix.diagonal().asDiagonal() * z;
      break;
    case PropagationMode::Identity:
      out = z;
      break;
  }
  return {std::move(out), std::move(prop)};
}

}  // namespace epprop
