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

#include <concepts>
#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bcqzk/base_relation.hpp"
#include "bcqzk/commitment.hpp"
#include "bcqzk/ssot.hpp"

namespace bcqzk {

enum class RelationId : std::uint8_t {
    RWI = 1,
    RZkPok = 2,
    RSrotConsistency = 3,
    RCoinflipOpen = 4,
    RCrsBit = 5,
};

inline RelationId relation_from_tag(std::uint8_t tag) {
    if (tag < 1 || tag > 5) throw ValidationError("unknown relation id " + std::to_string(tag));
    return static_cast<RelationId>(tag);
}

inline const char *relation_name(RelationId r) {
    switch (r) {
        case RelationId::RWI: return "RWI";
        case RelationId::RZkPok: return "RZkPok";
        case RelationId::RSrotConsistency: return "RSrotConsistency";
        case RelationId::RCoinflipOpen: return "RCoinflipOpen";
        case RelationId::RCrsBit: return "RCrsBit";
    }
    return "?";
}

/// A relation type supplies its id, instance/witness types, a predicate and
/// the canonical instance encoding.
template <typename R>
concept Relation = requires(const typename R::Instance &x, const typename R::Witness &w, FieldWriter &f) {
    { R::id } -> std::convertible_to<RelationId>;
    { R::holds(x, w) } -> std::same_as<bool>;
    { R::encode(f, x) };
};

template <Relation R>
Digest instance_digest(const typename R::Instance &x) {
    FieldWriter f;
    f.byte(static_cast<std::uint8_t>(R::id));
    R::encode(f, x);
    return f.digest();
}

// ---------------------------------------------------------------------------
// RWI: base relation OR at least `threshold` matched openings.

struct SlotStatement {
    ReceiverString rstring;
    Commitment commitment;
    std::uint8_t verifier_bit = 0;
};

template <typename Base>
struct RwiInstance {
    typename Base::Instance x;
    std::vector<SlotStatement> slots;
    std::uint64_t threshold = 0;
};

template <typename Base>
struct RwiWitness {
    std::optional<typename Base::Witness> base;
    std::vector<std::optional<Opening>> openings;
};

template <typename Base>
struct Rwi {
    static constexpr RelationId id = RelationId::RWI;
    using Instance = RwiInstance<Base>;
    using Witness = RwiWitness<Base>;

    static bool holds(const Instance &x, const Witness &w) {
        if (w.openings.size() != x.slots.size()) throw LengthError("RWI: one opening entry per slot required");
        for (auto &s : x.slots) {
            if (s.rstring.size() != s.commitment.value.size() || s.rstring.size() % 3 != 0) {
                throw LengthError("RWI: malformed slot statement");
            }
        }
        if (w.base && Base::holds(x.x, *w.base)) return true;
        std::uint64_t matched = 0;
        for (std::size_t j = 0; j < x.slots.size(); ++j) {
            const auto &op = w.openings[j];
            if (!op || op->bit != x.slots[j].verifier_bit) continue;
            if (op->seed.size() * 3 != x.slots[j].rstring.size()) continue;
            if (verify_open(x.slots[j].rstring, x.slots[j].commitment, *op)) ++matched;
        }
        return matched >= x.threshold;
    }

    static void encode(FieldWriter &f, const Instance &x) {
        Base::encode(f, x.x);
        f.u64(x.threshold).u64(x.slots.size());
        for (auto &s : x.slots) {
            f.u64(s.rstring.size()).field(s.rstring.bytes()).field(s.commitment.value.bytes()).byte(s.verifier_bit);
        }
    }
};

template <typename Base = SubsetSum>
bool relation_rwi(const RwiInstance<Base> &x, const RwiWitness<Base> &w) {
    return Rwi<Base>::holds(x, w);
}

// ---------------------------------------------------------------------------
// Share-grid relations shared by the PoK and the receiver-private OT.

struct CellStatement {
    SsotTranscript transcript;
    std::uint8_t location = 0;  // 0: share sent in position 0, 1: position 1
};

struct CellWitness {
    BitString sender_coins;
    std::uint8_t share = 0;
    std::uint8_t mask = 0;
};

using CellGrid = std::vector<std::vector<CellStatement>>;
using CellWitnessGrid = std::vector<std::vector<CellWitness>>;

namespace detail {

inline void check_grid(const CellGrid &g, const CellWitnessGrid &wg, std::size_t rows, std::size_t cols) {
    if (g.size() != rows || wg.size() != rows) throw LengthError("share grid: row count mismatch");
    for (std::size_t i = 0; i < rows; ++i) {
        if (g[i].size() != cols || wg[i].size() != cols) throw LengthError("share grid: column count mismatch");
    }
}

/// Every cell valid for its placement and each row XORs to `row_bits[i]`.
inline bool grid_consistent(const CellGrid &g, const CellWitnessGrid &wg, const BitString &row_bits) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::uint8_t acc = 0;
        for (std::size_t j = 0; j < g[i].size(); ++j) {
            const auto &c = g[i][j];
            const auto &cw = wg[i][j];
            std::uint8_t m0 = c.location ? cw.mask : cw.share;
            std::uint8_t m1 = c.location ? cw.share : cw.mask;
            if (!ssot_valid(c.transcript, cw.sender_coins, m0, m1)) return false;
            acc ^= cw.share & 1;
        }
        if (acc != row_bits[i]) return false;
    }
    return true;
}

inline void encode_grid(FieldWriter &f, const CellGrid &g) {
    f.u64(g.size());
    for (auto &row : g) {
        f.u64(row.size());
        for (auto &c : row) f.field(c.transcript.ot1).field(c.transcript.ot2).byte(c.location);
    }
}

}  // namespace detail

struct ZkPokInstance {
    SubsetSumInstance x;
    CellGrid cells;
};

struct ZkPokWitness {
    BitString w;
    CellWitnessGrid cells;
};

struct ZkPok {
    static constexpr RelationId id = RelationId::RZkPok;
    using Instance = ZkPokInstance;
    using Witness = ZkPokWitness;

    static bool holds(const Instance &x, const Witness &w) {
        const std::size_t rows = x.x.witness_bits();
        const std::size_t cols = x.cells.empty() ? 0 : x.cells.front().size();
        if (w.w.size() != rows) throw LengthError("RZkPok: witness length differs from instance");
        detail::check_grid(x.cells, w.cells, rows, cols);
        return detail::grid_consistent(x.cells, w.cells, w.w) && SubsetSum::holds(x.x, w.w);
    }

    static void encode(FieldWriter &f, const Instance &x) {
        SubsetSum::encode(f, x.x);
        detail::encode_grid(f, x.cells);
    }
};

inline bool relation_zkpok(const ZkPokInstance &x, const ZkPokWitness &w) {
    return ZkPok::holds(x, w);
}

struct SrotInstance {
    std::size_t lambda = 0;
    SsotTranscript main;
    CellGrid cells;  // (lambda + 2) x lambda
};

struct SrotWitness {
    std::uint8_t r_prime = 0;
    std::uint8_t beta = 0;
    BitString main_coins;  // lambda bits
    CellWitnessGrid cells;

    /// w = (r', beta, main coins), one row per bit.
    BitString rows() const {
        BitString w(main_coins.size() + 2);
        w.set(0, r_prime);
        w.set(1, beta);
        for (std::size_t i = 0; i < main_coins.size(); ++i) w.set(i + 2, main_coins[i]);
        return w;
    }
};

struct SrotConsistency {
    static constexpr RelationId id = RelationId::RSrotConsistency;
    using Instance = SrotInstance;
    using Witness = SrotWitness;

    static bool holds(const Instance &x, const Witness &w) {
        if (w.main_coins.size() != x.lambda) throw LengthError("RSrotConsistency: main coins must be lambda bits");
        detail::check_grid(x.cells, w.cells, x.lambda + 2, x.lambda);
        std::uint8_t r0 = w.r_prime & 1;
        std::uint8_t r1 = static_cast<std::uint8_t>((w.r_prime ^ w.beta) & 1);
        if (!ssot_valid(x.main, w.main_coins, r0, r1)) return false;
        return detail::grid_consistent(x.cells, w.cells, w.rows());
    }

    static void encode(FieldWriter &f, const Instance &x) {
        f.u64(x.lambda).field(x.main.ot1).field(x.main.ot2);
        detail::encode_grid(f, x.cells);
    }
};

inline bool relation_srot(const SrotInstance &x, const SrotWitness &w) {
    return SrotConsistency::holds(x, w);
}

// ---------------------------------------------------------------------------
// Commitment-opening relations for the coin flip and the CRS bits.

struct CoinflipOpenInstance {
    ReceiverString rstring;
    Commitment commitment;
    std::uint8_t a = 0;
};

struct CoinflipOpen {
    static constexpr RelationId id = RelationId::RCoinflipOpen;
    using Instance = CoinflipOpenInstance;
    using Witness = BitString;  // the seed

    static bool holds(const Instance &x, const Witness &seed) {
        if (seed.size() * 3 != x.rstring.size()) return false;
        return verify_open(x.rstring, x.commitment, Opening{x.a, seed});
    }
    static void encode(FieldWriter &f, const Instance &x) {
        f.field(x.rstring.bytes()).field(x.commitment.value.bytes()).byte(x.a);
    }
};

struct CrsBitInstance {
    ReceiverString rstring;
    Commitment commitment;
    std::uint8_t crs_bit = 0;
    std::uint8_t b = 0;
};

struct CrsBitWitness {
    std::uint8_t a = 0;
    BitString seed;
};

struct CrsBit {
    static constexpr RelationId id = RelationId::RCrsBit;
    using Instance = CrsBitInstance;
    using Witness = CrsBitWitness;

    static bool holds(const Instance &x, const Witness &w) {
        if (w.seed.size() * 3 != x.rstring.size()) return false;
        return ((w.a ^ x.b) & 1) == x.crs_bit && verify_open(x.rstring, x.commitment, Opening{w.a, w.seed});
    }
    static void encode(FieldWriter &f, const Instance &x) {
        f.field(x.rstring.bytes()).field(x.commitment.value.bytes()).byte(x.crs_bit).byte(x.b);
    }
};

// ---------------------------------------------------------------------------
// Tokens and the ideal backend.

struct ProofToken {
    RelationId relation = RelationId::RWI;
    Digest instance_digest{};
    bool valid = false;

    /// tag byte || 32-byte digest || validity byte
    Bytes serialize() const {
        Bytes out;
        out.reserve(34);
        out.push_back(static_cast<std::uint8_t>(relation));
        out.insert(out.end(), instance_digest.begin(), instance_digest.end());
        out.push_back(valid ? 1 : 0);
        return out;
    }

    static ProofToken parse(const Bytes &b) {
        if (b.size() != 34) throw LengthError("proof token must be 34 bytes");
        ProofToken t;
        t.relation = relation_from_tag(b[0]);
        std::copy(b.begin() + 1, b.begin() + 33, t.instance_digest.begin());
        if (b[33] > 1) throw ValidationError("proof token validity byte must be 0 or 1");
        t.valid = b[33] == 1;
        return t;
    }

    bool operator==(const ProofToken &) const = default;
};

/// Ideal proof functionality. It evaluates the predicate itself and keeps a
/// ledger of statements it has vouched for, so a hand-built token claiming
/// validity for a statement never proven is rejected.
class IdealBackend {
   public:
    template <Relation R>
    ProofToken prove(const typename R::Instance &x, const typename R::Witness &w) {
        ProofToken t{R::id, instance_digest<R>(x), R::holds(x, w)};
        if (t.valid) record(t);
        return t;
    }

    template <Relation R>
    bool verify(const typename R::Instance &x, const ProofToken &t) const {
        if (t.relation != R::id || !t.valid) return false;
        if (t.instance_digest != instance_digest<R>(x)) return false;
        std::lock_guard<std::mutex> lk(mu_);
        return vouched_.count({static_cast<std::uint8_t>(t.relation), t.instance_digest}) > 0;
    }

    /// Zero-knowledge simulator privilege: an accepting token without a
    /// witness. Only simulators call this.
    template <Relation R>
    ProofToken simulate(const typename R::Instance &x) {
        ProofToken t{R::id, instance_digest<R>(x), true};
        record(t);
        return t;
    }

   private:
    void record(const ProofToken &t) {
        std::lock_guard<std::mutex> lk(mu_);
        vouched_.insert({static_cast<std::uint8_t>(t.relation), t.instance_digest});
    }

    mutable std::mutex mu_;
    std::set<std::pair<std::uint8_t, Digest>> vouched_;
};

template <Relation R>
ProofToken prove(IdealBackend &backend, const typename R::Instance &x, const typename R::Witness &w) {
    return backend.prove<R>(x, w);
}

template <Relation R>
bool verify(const IdealBackend &backend, const typename R::Instance &x, const ProofToken &t) {
    return backend.verify<R>(x, t);
}

// ---------------------------------------------------------------------------
// CRS generation by coin flipping, one bit at a time.

enum class CrsProverRole { Honest, FixedZero, FixedOne, AdaptiveOnCommitment };

struct CrsVerifierRole {
    enum Kind { Honest, InconsistentReveal } kind = Honest;
    std::size_t bad_index = 0;
};

struct CrsMessage {
    std::size_t bit_index;
    char from;  // 'V' or 'P'
    std::string label;
    std::string payload_hex;
};

struct CrsResult {
    BitString crs;
    std::vector<CrsMessage> transcript;
    Bytes session_nonce;
};

struct CrsAbort : ProtocolError {
    std::size_t index;
    explicit CrsAbort(std::size_t i) : ProtocolError("crs bit proof failed at index " + std::to_string(i)), index(i) {
    }
};

/// Naor receiver string for bit i, derived from the public session nonce so
/// the verifier cannot choose it and each bit costs four messages.
inline ReceiverString crs_receiver_string(const Bytes &nonce, std::size_t i, std::size_t seed_bits) {
    FieldWriter f;
    f.field(nonce).u64(i);
    Digest d = f.digest();
    BitString seed = BitString::from_bytes(Bytes(d.begin(), d.end()), 256);
    return prg(seed, 3 * seed_bits);
}

inline CrsResult crs_from_coinflip(std::size_t bit_len, CrsProverRole prover_role, CrsVerifierRole verifier_role, Rng &rng,
                                   std::size_t seed_bits = 16) {
    if (bit_len < 1) throw ValidationError("crs length must be >= 1");
    IdealBackend backend;
    CrsResult out;
    out.crs = BitString(bit_len);
    for (int k = 0; k < 16; ++k) out.session_nonce.push_back(static_cast<std::uint8_t>(rng.next_u64()));
    for (std::size_t i = 0; i < bit_len; ++i) {
        ReceiverString r = crs_receiver_string(out.session_nonce, i, seed_bits);
        std::uint8_t a = rng.bit();
        BitString seed = BitString::random(seed_bits, rng);
        Commitment c = commit(r, a, seed);
        out.transcript.push_back({i, 'V', "commit", c.hex()});

        std::uint8_t b = 0;
        switch (prover_role) {
            case CrsProverRole::Honest: b = rng.bit(); break;
            case CrsProverRole::FixedZero: b = 0; break;
            case CrsProverRole::FixedOne: b = 1; break;
            case CrsProverRole::AdaptiveOnCommitment: b = c.value[0]; break;
        }
        out.transcript.push_back({i, 'P', "b", std::to_string(b)});

        std::uint8_t crs_bit = a ^ b;
        if (verifier_role.kind == CrsVerifierRole::InconsistentReveal && verifier_role.bad_index == i) crs_bit ^= 1;
        out.transcript.push_back({i, 'V', "crs", std::to_string(crs_bit)});

        CrsBitInstance inst{r, c, crs_bit, b};
        ProofToken t = backend.prove<CrsBit>(inst, CrsBitWitness{a, seed});
        out.transcript.push_back({i, 'V', "proof", to_hex(t.serialize())});
        if (!backend.verify<CrsBit>(inst, t)) throw CrsAbort(i);
        out.crs.set(i, crs_bit);
    }
    return out;
}

}  // namespace bcqzk
