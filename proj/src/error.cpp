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

#include "epprop/error.hpp"

namespace epprop {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::InvalidDistanceMatrix: return "InvalidDistanceMatrix";
    case Errc::IsolatedNode: return "IsolatedNode";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::EmptyClass: return "EmptyClass";
    case Errc::LabelOutOfRange: return "LabelOutOfRange";
    case Errc::InsufficientClassCount: return "InsufficientClassCount";
    case Errc::InsufficientClassSize: return "InsufficientClassSize";
    case Errc::NoUnlabeledPool: return "NoUnlabeledPool";
    case Errc::SameClassPair: return "SameClassPair";
    case Errc::ParseError: return "ParseError";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace epprop
