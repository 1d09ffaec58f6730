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

#include "epprop/embedding_set.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "epprop/error.hpp"

namespace epprop {

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::None: return "";
    case Split::Base: return "base";
    case Split::Val: return "val";
    case Split::Novel: return "novel";
  }
  return "";
}

Split parse_split(std::string_view name) {
  if (name.empty() || name == "none") return Split::None;
  if (name == "base") return Split::Base;
  if (name == "val") return Split::Val;
  if (name == "novel") return Split::Novel;
  raise(Errc::ParseError, "unknown split '" + std::string(name) + "'");
}

std::vector<std::string> EmbeddingSet::classes(std::optional<Split> split) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (split && splits[i] != *split) continue;
    out.push_back(labels[i]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<std::size_t>> EmbeddingSet::rows_by_class(
    const std::vector<std::string>& class_list, std::optional<Split> split) const {
  std::map<std::string_view, std::size_t> slot;
  for (std::size_t c = 0; c < class_list.size(); ++c) slot.emplace(class_list[c], c);
  std::vector<std::vector<std::size_t>> rows(class_list.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (split && splits[i] != *split) continue;
    if (auto it = slot.find(labels[i]); it != slot.end()) rows[it->second].push_back(i);
  }
  return rows;
}

std::vector<int> EmbeddingSet::class_indices() const {
  const std::vector<std::string> sorted = classes();
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& label : labels) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), label);
    out.push_back(static_cast<int>(it - sorted.begin()));
  }
  return out;
}

void EmbeddingSet::validate() const {
  const std::size_t n = labels.size();
  if (n == 0) raise(Errc::InvariantViolation, "embedding set is empty");
  if (ids.size() != n || splits.size() != n || static_cast<std::size_t>(embeddings.rows()) != n) {
    raise(Errc::InvariantViolation, "ids, labels, splits and embedding rows disagree in count");
  }
  if (embeddings.cols() < 1) raise(Errc::InvariantViolation, "embedding dimension is zero");
  if (!embeddings.allFinite()) raise(Errc::InvariantViolation, "embeddings contain NaN or Inf");
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) raise(Errc::InvariantViolation, "duplicate id '" + id + "'");
  }
  for (const auto& label : labels) {
    if (label.empty()) raise(Errc::InvariantViolation, "empty class identifier");
  }
}

}  // namespace epprop
