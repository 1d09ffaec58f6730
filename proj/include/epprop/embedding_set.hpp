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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epprop/numerics.hpp"

namespace epprop {

/// Dataset role of a row. Codes match the binary embedding format.
enum class Split : std::uint8_t { None = 0, Base = 1, Val = 2, Novel = 3 };

/// "", "base", "val", "novel".
std::string_view to_string(Split split) noexcept;
/// Throws ParseError on anything else.
Split parse_split(std::string_view name);

/// N embedding rows with class identifiers and optional split tags.
struct EmbeddingSet {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::vector<Split> splits;
  DenseMatrix embeddings;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(embeddings.cols()); }

  /// Sorted distinct class identifiers, optionally restricted to one split.
  std::vector<std::string> classes(std::optional<Split> split = std::nullopt) const;

  /// Row indices per sorted class identifier.
  std::vector<std::vector<std::size_t>> rows_by_class(const std::vector<std::string>& classes,
                                                      std::optional<Split> split) const;

  /// Index of every row's label within classes().
  std::vector<int> class_indices() const;

  /// Throws InvariantViolation on ragged columns, duplicate ids or non-finite
  /// entries.
  void validate() const;
};

}  // namespace epprop
