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

#include <cstdint>
#include <string>
#include <string_view>

#include "bcqzk/core/bytes.hpp"
#include "bcqzk/core/rng.hpp"

namespace bcqzk {

/// Fixed-length bit string packed MSB-first: bit i lives in byte i/8 at
/// position 7 - i%8. Padding bits past size() are always zero, so byte
/// equality is bit equality.
class BitString {
   public:
    BitString() = default;
    explicit BitString(std::size_t nbits) : nbits_(nbits), bytes_((nbits + 7) / 8, 0) {
    }

    static BitString from_bytes(Bytes bytes, std::size_t nbits) {
        if (bytes.size() != (nbits + 7) / 8) {
            throw LengthError("byte length does not match bit length");
        }
        BitString s;
        s.nbits_ = nbits;
        s.bytes_ = std::move(bytes);
        s.clear_padding();
        return s;
    }

    static BitString from_hex(std::string_view hex, std::size_t nbits) {
        return from_bytes(bcqzk::from_hex(hex), nbits);
    }

    static BitString random(std::size_t nbits, Rng &rng) {
        BitString s(nbits);
        for (std::size_t i = 0; i < s.bytes_.size(); i += 8) {
            std::uint64_t w = rng.next_u64();
            for (std::size_t k = 0; k < 8 && i + k < s.bytes_.size(); ++k) {
                s.bytes_[i + k] = static_cast<std::uint8_t>(w >> (8 * k));
            }
        }
        s.clear_padding();
        return s;
    }

    /// Bits of a 64-bit value, most significant of the low `nbits` first.
    static BitString from_uint(std::uint64_t v, std::size_t nbits) {
        BitString s(nbits);
        for (std::size_t i = 0; i < nbits; ++i) {
            s.set(i, static_cast<std::uint8_t>((v >> (nbits - 1 - i)) & 1));
        }
        return s;
    }

    std::uint64_t to_uint() const {
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < nbits_; ++i) {
            v = (v << 1) | get(i);
        }
        return v;
    }

    std::size_t size() const {
        return nbits_;
    }
    bool empty() const {
        return nbits_ == 0;
    }

    std::uint8_t get(std::size_t i) const {
        return static_cast<std::uint8_t>((bytes_[i >> 3] >> (7 - (i & 7))) & 1);
    }
    void set(std::size_t i, std::uint8_t v) {
        std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - (i & 7)));
        if (v & 1) {
            bytes_[i >> 3] |= mask;
        } else {
            bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
        }
    }
    std::uint8_t operator[](std::size_t i) const {
        return get(i);
    }

    BitString operator^(const BitString &o) const {
        if (o.nbits_ != nbits_) {
            throw LengthError("xor of bit strings with different lengths");
        }
        BitString r = *this;
        for (std::size_t i = 0; i < bytes_.size(); ++i) {
            r.bytes_[i] ^= o.bytes_[i];
        }
        return r;
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto b : bytes_) {
            c += static_cast<std::size_t>(__builtin_popcount(b));
        }
        return c;
    }

    const Bytes &bytes() const {
        return bytes_;
    }
    std::string hex() const {
        return to_hex(bytes_);
    }

    bool operator==(const BitString &) const = default;
    auto operator<=>(const BitString &) const = default;

   private:
    void clear_padding() {
        if (nbits_ % 8 != 0 && !bytes_.empty()) {
            bytes_.back() &= static_cast<std::uint8_t>(0xFF << (8 - nbits_ % 8));
        }
    }

    std::size_t nbits_ = 0;
    Bytes bytes_;
};

}  // namespace bcqzk
