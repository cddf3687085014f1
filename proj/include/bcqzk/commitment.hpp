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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bcqzk/core/bitstring.hpp"

namespace bcqzk {

// Naor bit commitment. The receiver sends a 3n-bit string r; the committer
// sends G(s) for bit 0 or G(s) xor r for bit 1, with G the hash-counter PRG
// below and s an n-bit seed.

using ReceiverString = BitString;

struct Commitment {
    BitString value;
    bool operator==(const Commitment &) const = default;
    std::string hex() const {
        return value.hex();
    }
};

struct Opening {
    std::uint8_t bit = 0;
    BitString seed;
    bool operator==(const Opening &) const = default;
    /// "<bit>:<seed hex>"
    std::string hex() const {
        return std::string(1, static_cast<char>('0' + bit)) + ":" + seed.hex();
    }
};

/// SHA-256(seed bytes || counter as 4-byte big endian) blocks, truncated.
inline BitString prg(const BitString &seed, std::size_t out_len) {
    if (out_len > (1u << 16)) throw LengthError("prg output longer than 2^16 bits");
    const auto &sb = seed.bytes();
    Bytes buf(sb.size() + 4);
    std::copy(sb.begin(), sb.end(), buf.begin());
    std::size_t produced = 0;
    Bytes packed((out_len + 7) / 8);
    for (std::uint32_t counter = 0; produced < packed.size(); ++counter) {
        for (int i = 0; i < 4; ++i) buf[sb.size() + i] = static_cast<std::uint8_t>(counter >> (24 - 8 * i));
        Digest d = sha256(buf);
        std::size_t take = std::min<std::size_t>(d.size(), packed.size() - produced);
        std::copy(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(take), packed.begin() + static_cast<std::ptrdiff_t>(produced));
        produced += take;
    }
    return BitString::from_bytes(std::move(packed), out_len);
}

inline ReceiverString random_receiver_string(std::size_t n, Rng &rng) {
    return BitString::random(3 * n, rng);
}

inline Commitment commit(const ReceiverString &rstring, std::uint8_t bit, const BitString &seed) {
    if (rstring.size() != 3 * seed.size()) throw LengthError("receiver string must be 3n bits for an n-bit seed");
    BitString g = prg(seed, rstring.size());
    return Commitment{(bit & 1) ? g ^ rstring : g};
}

inline bool verify_open(const ReceiverString &rstring, const Commitment &com, const Opening &op) {
    if (com.value.size() != rstring.size() || rstring.size() != 3 * op.seed.size()) {
        throw LengthError("commitment, receiver string and seed lengths are inconsistent");
    }
    return commit(rstring, op.bit, op.seed) == com;
}

/// Every equivocation pair (s0, s1) with G(s0) = G(s1) xor r, sorted.
/// Exhaustive over all 2^(2n) pairs via a table of G over the 2^n seeds.
inline std::vector<std::pair<BitString, BitString>> binding_collision_search(std::size_t n, const ReceiverString &rstring) {
    if (n > 12) throw ValidationError("binding search refuses n > 12");
    if (rstring.size() != 3 * n) throw LengthError("receiver string must be 3n bits");
    const std::uint64_t count = 1ull << n;
    std::vector<BitString> outputs;
    outputs.reserve(count);
    std::unordered_map<std::string, std::vector<std::uint64_t>> by_value;
    for (std::uint64_t s = 0; s < count; ++s) {
        outputs.push_back(prg(BitString::from_uint(s, n), 3 * n));
        by_value[outputs.back().hex()].push_back(s);
    }
    std::vector<std::pair<BitString, BitString>> pairs;
    for (std::uint64_t s0 = 0; s0 < count; ++s0) {
        auto it = by_value.find((outputs[s0] ^ rstring).hex());
        if (it == by_value.end()) continue;
        for (std::uint64_t s1 : it->second) {
            pairs.emplace_back(BitString::from_uint(s0, n), BitString::from_uint(s1, n));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

/// Recovers the committed bit by exhaustive seed search. Unbounded in n, so
/// only simulators that are allowed to be inefficient use it, and only at
/// small seed lengths.
inline std::optional<Opening> brute_force_open(const ReceiverString &rstring, const Commitment &com, std::size_t n) {
    if (n > 20) throw ValidationError("brute-force opening refuses n > 20");
    for (std::uint64_t s = 0; s < (1ull << n); ++s) {
        BitString seed = BitString::from_uint(s, n);
        BitString g = prg(seed, 3 * n);
        if (g == com.value) return Opening{0, seed};
        if ((g ^ rstring) == com.value) return Opening{1, seed};
    }
    return std::nullopt;
}

}  // namespace bcqzk
