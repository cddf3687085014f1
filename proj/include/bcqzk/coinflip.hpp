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

// One-bit coin flip. P2 sends a Naor receiver string, P1 commits to a, P2
// sends b, P1 reveals a with a proof that it opens the commitment, and both
// output a ^ b.

#include <map>
#include <optional>
#include <string>

#include "bcqzk/commitment.hpp"
#include "bcqzk/core/parallel.hpp"
#include "bcqzk/core/stats.hpp"
#include "bcqzk/proof_backends.hpp"

namespace bcqzk {

constexpr std::size_t kCoinflipSeedBits = 8;

struct CoinflipP1 {
    enum Kind { Honest, Equivocator } kind = Honest;

    static CoinflipP1 honest() {
        return {};
    }
    /// Reveals the complement of its committed bit.
    static CoinflipP1 equivocator() {
        return {Equivocator};
    }
    std::string name() const {
        return kind == Honest ? "Honest" : "Equivocator";
    }
};

struct CoinflipP2 {
    enum Kind { Honest, FixedB, AdaptiveB } kind = Honest;
    std::uint8_t fixed = 0;

    static CoinflipP2 honest() {
        return {};
    }
    static CoinflipP2 fixed_b(std::uint8_t b) {
        return {FixedB, static_cast<std::uint8_t>(b & 1)};
    }
    /// b is the first bit of the commitment it just saw.
    static CoinflipP2 adaptive_b() {
        return {AdaptiveB, 0};
    }
    std::string name() const {
        switch (kind) {
            case Honest: return "Honest";
            case FixedB: return "FixedB(" + std::to_string(fixed) + ")";
            case AdaptiveB: return "AdaptiveB";
        }
        return "?";
    }

    std::uint8_t choose(const Commitment &c, Rng &rng) const {
        switch (kind) {
            case Honest: return rng.bit();
            case FixedB: return fixed;
            case AdaptiveB: return c.value[0];
        }
        return 0;
    }
};

inline std::vector<CoinflipP2> coinflip_p2_suite() {
    return {CoinflipP2::honest(), CoinflipP2::fixed_b(0), CoinflipP2::fixed_b(1), CoinflipP2::adaptive_b()};
}

inline CoinflipP1 parse_coinflip_p1(const std::string &s) {
    if (s == "Honest") return CoinflipP1::honest();
    if (s == "Equivocator") return CoinflipP1::equivocator();
    throw ValidationError("unknown coin-flip P1 strategy: " + s);
}

inline CoinflipP2 parse_coinflip_p2(const std::string &s) {
    if (s == "Honest") return CoinflipP2::honest();
    if (s == "AdaptiveB") return CoinflipP2::adaptive_b();
    if (s == "FixedB(0)") return CoinflipP2::fixed_b(0);
    if (s == "FixedB(1)") return CoinflipP2::fixed_b(1);
    throw ValidationError("unknown coin-flip P2 strategy: " + s);
}

struct CoinflipTranscript {
    ReceiverString rstring;
    Commitment commitment;
    std::uint8_t b = 0;
    std::uint8_t a = 0;  // revealed
    ProofToken token;
    std::optional<std::uint8_t> s;  // empty on abort

    bool aborted() const {
        return !s.has_value();
    }
    std::map<std::string, std::string> to_record() const {
        return {{"rstring", rstring.hex()},
                {"commitment", commitment.hex()},
                {"b", std::to_string(b)},
                {"a", std::to_string(a)},
                {"token", to_hex(token.serialize())},
                {"s", s ? std::to_string(*s) : "-"}};
    }
};

namespace detail {

inline void coinflip_finish(CoinflipTranscript &t, IdealBackend &backend) {
    CoinflipOpenInstance x{t.rstring, t.commitment, t.a};
    if (backend.verify<CoinflipOpen>(x, t.token)) t.s = static_cast<std::uint8_t>(t.a ^ t.b);
}

}  // namespace detail

inline CoinflipTranscript coinflip_run(const CoinflipP1 &p1, const CoinflipP2 &p2, Rng &rng, std::size_t n = kCoinflipSeedBits) {
    IdealBackend backend;
    Rng r1 = rng.fork(1), r2 = rng.fork(2);
    rng.next_u64();
    CoinflipTranscript t;
    t.rstring = random_receiver_string(n, r2);
    const std::uint8_t a = r1.bit();
    const BitString seed = BitString::random(n, r1);
    t.commitment = commit(t.rstring, a, seed);
    t.b = p2.choose(t.commitment, r2);
    t.a = p1.kind == CoinflipP1::Equivocator ? static_cast<std::uint8_t>(a ^ 1) : a;
    t.token = backend.prove<CoinflipOpen>(CoinflipOpenInstance{t.rstring, t.commitment, t.a}, seed);
    detail::coinflip_finish(t, backend);
    return t;
}

/// Simulator playing P1 against an arbitrary P2: commits to junk, learns b,
/// reveals a = target ^ b and proves it with the simulation privilege.
inline CoinflipTranscript coinflip_force_output(std::uint8_t target, const CoinflipP2 &p2, Rng &rng, std::size_t n = kCoinflipSeedBits) {
    IdealBackend backend;
    Rng r1 = rng.fork(1), r2 = rng.fork(2);
    rng.next_u64();
    CoinflipTranscript t;
    t.rstring = random_receiver_string(n, r2);
    const std::uint8_t junk = r1.bit();
    t.commitment = commit(t.rstring, junk, BitString::random(n, r1));
    t.b = p2.choose(t.commitment, r2);
    t.a = static_cast<std::uint8_t>((target ^ t.b) & 1);
    t.token = backend.simulate<CoinflipOpen>(CoinflipOpenInstance{t.rstring, t.commitment, t.a});
    detail::coinflip_finish(t, backend);
    return t;
}

/// Simulator playing P2 against P1: opens the commitment by exhaustive seed
/// search and answers b = target ^ a. Inefficient by design; n <= 20.
inline CoinflipTranscript coinflip_force_against_p1(std::uint8_t target, const CoinflipP1 &p1, Rng &rng, std::size_t n = kCoinflipSeedBits) {
    IdealBackend backend;
    Rng r1 = rng.fork(1), r2 = rng.fork(2);
    rng.next_u64();
    CoinflipTranscript t;
    t.rstring = random_receiver_string(n, r2);
    const std::uint8_t a = r1.bit();
    const BitString seed = BitString::random(n, r1);
    t.commitment = commit(t.rstring, a, seed);
    auto opened = brute_force_open(t.rstring, t.commitment, n);
    if (!opened) throw ProtocolError("commitment has no opening");
    t.b = static_cast<std::uint8_t>((target ^ opened->bit) & 1);
    t.a = p1.kind == CoinflipP1::Equivocator ? static_cast<std::uint8_t>(a ^ 1) : a;
    t.token = backend.prove<CoinflipOpen>(CoinflipOpenInstance{t.rstring, t.commitment, t.a}, seed);
    detail::coinflip_finish(t, backend);
    return t;
}

/// Sequential repetition; the first abort ends the string.
inline std::optional<BitString> coinflip_string(std::size_t len, const CoinflipP1 &p1, const CoinflipP2 &p2, Rng &rng,
                                                std::size_t n = kCoinflipSeedBits) {
    BitString out(len);
    for (std::size_t i = 0; i < len; ++i) {
        auto t = coinflip_run(p1, p2, rng, n);
        if (t.aborted()) return std::nullopt;
        out.set(i, *t.s);
    }
    return out;
}

struct CoinflipFrequency {
    std::uint64_t runs = 0, ones = 0, aborts = 0;
    double frequency() const {
        const auto done = runs - aborts;
        return done ? static_cast<double>(ones) / static_cast<double>(done) : 0;
    }
};

inline CoinflipFrequency coinflip_frequency(const CoinflipP1 &p1, const CoinflipP2 &p2, std::uint64_t runs, std::uint64_t seed,
                                            unsigned workers = 1) {
    auto out = parallel_trials(runs, workers, [&](std::uint64_t i) {
        Rng rng(derive_seed(seed, i));
        auto t = coinflip_run(p1, p2, rng);
        return t.s ? static_cast<int>(*t.s) : -1;
    });
    CoinflipFrequency f;
    f.runs = runs;
    for (int v : out) {
        if (v < 0) {
            ++f.aborts;
        } else {
            f.ones += static_cast<std::uint64_t>(v);
        }
    }
    return f;
}

struct ForcingReport {
    std::uint64_t runs = 0, forced = 0, aborts = 0;
    bool all_forced() const {
        return forced == runs;
    }
};

/// Forces alternating targets against one P2 strategy.
inline ForcingReport coinflip_forcing(const CoinflipP2 &p2, std::uint64_t runs, std::uint64_t seed, unsigned workers = 1) {
    auto out = parallel_trials(runs, workers, [&](std::uint64_t i) {
        Rng rng(derive_seed(seed, i));
        const std::uint8_t target = i & 1;
        auto t = coinflip_force_output(target, p2, rng);
        return t.s ? static_cast<int>(*t.s == target) : -1;
    });
    ForcingReport r;
    r.runs = runs;
    for (int v : out) {
        if (v < 0) ++r.aborts;
        if (v == 1) ++r.forced;
    }
    return r;
}

}  // namespace bcqzk
