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
#include <map>
#include <memory>
#include <utility>

#include "bcqzk/core/bitstring.hpp"

namespace bcqzk {

/// Opaque two-round SSOT transcript.
///   ot1 = H("ssot1" || receiver coins || beta)
///   ot2 = H("ssot2" || ot1 || sender coins || m0 || m1)
/// ot1 hides beta behind 128 receiver coins; ot2 binds the sender inputs
/// and coins so that "valid w.r.t. coins and inputs" is checkable.
struct SsotTranscript {
    Digest ot1{};
    Digest ot2{};
    bool operator==(const SsotTranscript &) const = default;
};

inline Digest ssot_first_token(std::uint64_t coins_lo, std::uint64_t coins_hi, std::uint8_t beta) {
    FieldWriter f;
    f.byte('1').u64(coins_lo).u64(coins_hi).byte(beta & 1);
    return f.digest();
}

inline Digest ssot_second_token(const Digest &ot1, const BitString &sender_coins, std::uint8_t m0, std::uint8_t m1) {
    FieldWriter f;
    f.byte('2').field(ot1).u64(sender_coins.size()).field(sender_coins.bytes()).byte(m0 & 1).byte(m1 & 1);
    return f.digest();
}

inline bool ssot_valid(const SsotTranscript &t, const BitString &sender_coins, std::uint8_t m0, std::uint8_t m1) {
    return ssot_second_token(t.ot1, sender_coins, m0, m1) == t.ot2;
}

/// The trusted SSOT party. It remembers each receiver bit so it can hand the
/// receiver m_beta once the sender has spoken. Single owner.
class SsotFunctionality {
   public:
    Digest first_message(std::uint8_t beta, Rng &receiver_rng) {
        std::uint64_t lo = receiver_rng.next_u64();
        std::uint64_t hi = receiver_rng.next_u64();
        Digest ot1 = ssot_first_token(lo, hi, beta);
        records_[ot1] = Record{static_cast<std::uint8_t>(beta & 1), 0, false};
        return ot1;
    }

    /// Sender side; unknown ot1 values (forged first messages) are answered
    /// but deliver nothing.
    Digest second_message(const Digest &ot1, std::uint8_t m0, std::uint8_t m1, const BitString &sender_coins) {
        auto it = records_.find(ot1);
        if (it != records_.end()) {
            it->second.output = (it->second.beta ? m1 : m0) & 1;
            it->second.delivered = true;
        }
        return ssot_second_token(ot1, sender_coins, m0, m1);
    }

    std::uint8_t output(const Digest &ot1) const {
        auto it = records_.find(ot1);
        if (it == records_.end() || !it->second.delivered) throw ProtocolError("ssot output requested before delivery");
        return it->second.output;
    }

    /// Harness-only tap. Nothing on a protocol surface calls this.
    std::uint8_t extract_receiver_bit(const Digest &ot1) const {
        auto it = records_.find(ot1);
        if (it == records_.end()) throw ProtocolError("unknown ssot first message");
        return it->second.beta;
    }

   private:
    struct Record {
        std::uint8_t beta;
        std::uint8_t output;
        bool delivered;
    };
    std::map<Digest, Record> records_;
};

struct SsotRunResult {
    std::uint8_t output;
    SsotTranscript transcript;
};

/// One standalone execution with fresh coins on both sides.
inline SsotRunResult ssot_run(std::uint8_t beta, std::uint8_t m0, std::uint8_t m1, Rng &rng, std::size_t coin_bits = 16) {
    SsotFunctionality f;
    SsotTranscript t;
    t.ot1 = f.first_message(beta, rng);
    t.ot2 = f.second_message(t.ot1, m0, m1, BitString::random(coin_bits, rng));
    return {f.output(t.ot1), t};
}

}  // namespace bcqzk
