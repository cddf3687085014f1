// Copyright 2026 The bcqzk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace bcqzk {

/// Invalid parameters or a violated profile relation.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Integer width exceeded while deriving parameters.
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Inputs whose lengths or dimensions do not line up.
struct LengthError : std::length_error {
    using std::length_error::length_error;
};

/// A party or the engine saw something the protocol does not allow.
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The engine ran past its step budget without every session settling.
struct StallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bcqzk
