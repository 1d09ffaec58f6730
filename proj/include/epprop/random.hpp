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
#include <random>
#include <span>
#include <utility>

namespace epprop {

using Rng = std::mt19937_64;

/// Independent stream for (master seed, stream index). Episodes draw from
/// their own stream so results do not depend on execution order.
Rng stream_rng(std::uint64_t seed, std::uint64_t stream);

/// Uniform integer in [0, bound) by rejection; identical on every platform.
std::size_t uniform_below(Rng& rng, std::size_t bound);

/// Moves a uniform random sample of `count` elements to the front of `items`
/// (partial Fisher-Yates).
template <typename T>
void partial_shuffle(std::span<T> items, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count && i + 1 < items.size(); ++i) {
    const std::size_t j = i + uniform_below(rng, items.size() - i);
    using std::swap;
    swap(items[i], items[j]);
  }
}

}  // namespace epprop
