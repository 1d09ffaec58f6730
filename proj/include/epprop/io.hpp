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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "epprop/diagnostics.hpp"
#include "epprop/episodes.hpp"

namespace epprop {

enum class EmbeddingFormat { Auto, Csv, Binary };

/// "auto", "csv", "binary".
EmbeddingFormat parse_format(std::string_view name);

/// Text format. Header `id,label,split,f0,...,f{m-1}`; values are written in
/// shortest round-trip form so a reload is exact.
EmbeddingSet read_embeddings_csv(std::istream& in);
void write_embeddings_csv(const EmbeddingSet& set, std::ostream& out);

/// Binary format, little-endian:
///   "EPB1" | u32 version (1) | u32 N | u32 m | u32 label count
///   | label count x (u16 length, UTF-8 bytes) | N x u16 label index
///   | N x u8 split code | N x m f32, row-major
/// The file length must match the header exactly. Ids are not stored; a
/// decoded set uses row numbers.
EmbeddingSet decode_embeddings_binary(std::span<const std::byte> bytes);
std::vector<std::byte> encode_embeddings_binary(const EmbeddingSet& set);

/// Auto sniffs the magic bytes. Throws IoError, ParseError or
/// InvariantViolation.
EmbeddingSet load_embeddings(const std::filesystem::path& path,
                             EmbeddingFormat format = EmbeddingFormat::Auto);

/// Auto picks binary for .epb and .bin, CSV otherwise. Throws IoError.
void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path,
                     EmbeddingFormat format = EmbeddingFormat::Auto);

nlohmann::json to_json(const EvalConfig& cfg);

/// {"config", "seed", "episodes", "accuracies", "mean", "ci95", "wall_ms"}.
nlohmann::json to_json(const EvalReport& report);

nlohmann::json to_json(const CompactnessMetrics& metrics);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace epprop
