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

// Statistical receiver-private OT from an ideal sender-private OT.
//
// Extraction phase: a (lambda+2) x lambda grid of SSOT runs with roles
// flipped. Row i secret-shares bit i of w = (r', beta, main coins); cell
// (i,j) places (share, mask) or (mask, share) according to a location bit
// the receiver reveals afterwards. The sender asks for a uniform position,
// so it sees the share exactly when its bit equals the location.
//
// Main phase: one more flipped SSOT where the receiver offers (r', r'^beta)
// and the sender selects with a random r, getting r~ = r' ^ (r & beta).
// After a consistency proof the sender sends (r~^m0, r~^r^m1).

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bcqzk/core/parallel.hpp"
#include "bcqzk/core/stats.hpp"
#include "bcqzk/params.hpp"
#include "bcqzk/proof_backends.hpp"
#include "bcqzk/ssot.hpp"

namespace bcqzk {

constexpr std::size_t kCellCoinBits = 16;

struct SrotReceiverStrategy {
    enum Kind { Honest, ShareWithholder, LocationLiar, InconsistentBeta } kind = Honest;
    std::uint8_t beta = 0;
    double p_lie = 0.5;  // LocationLiar: chance of lying in a run

    static SrotReceiverStrategy honest(std::uint8_t beta) {
        return {Honest, static_cast<std::uint8_t>(beta & 1), 0};
    }
    static SrotReceiverStrategy share_withholder(std::uint8_t beta = 0) {
        return {ShareWithholder, static_cast<std::uint8_t>(beta & 1), 0};
    }
    static SrotReceiverStrategy location_liar(double p = 0.5, std::uint8_t beta = 0) {
        if (p < 0 || p > 1) throw ValidationError("lie probability outside [0,1]");
        return {LocationLiar, static_cast<std::uint8_t>(beta & 1), p};
    }
    /// beta in the extraction phase, 1 - beta in the main phase.
    static SrotReceiverStrategy inconsistent_beta(std::uint8_t beta = 0) {
        return {InconsistentBeta, static_cast<std::uint8_t>(beta & 1), 0};
    }

    std::string name() const {
        switch (kind) {
            case Honest: return "Honest(" + std::to_string(beta) + ")";
            case ShareWithholder: return "ShareWithholder";
            case LocationLiar: return "LocationLiar";
            case InconsistentBeta: return "InconsistentBeta";
        }
        return "?";
    }
};

struct SrotCell {
    CellStatement statement;  // transcript and revealed location
    CellWitness witness;      // receiver private
    std::uint8_t true_location = 0;
    std::uint8_t sender_bit = 0;  // sender's SSOT choice
    std::uint8_t received = 0;    // what the sender's SSOT returned
};

/// Full record of one execution, both sides.
struct SrotRun {
    std::size_t lambda = 0;
    std::vector<std::vector<SrotCell>> cells;
    SsotTranscript main;
    std::uint8_t r = 0, r_prime = 0, r_tilde = 0;
    BitString main_coins;
    std::uint8_t beta = 0;
    std::optional<ProofToken> token;
    bool aborted = false;

    /// Flat key/value record with hex fields.
    std::map<std::string, std::string> to_record() const {
        std::map<std::string, std::string> rec;
        rec["lambda"] = std::to_string(lambda);
        rec["main_ot1"] = to_hex(main.ot1);
        rec["main_ot2"] = to_hex(main.ot2);
        rec["r"] = std::to_string(r);
        rec["r_tilde"] = std::to_string(r_tilde);
        rec["aborted"] = aborted ? "1" : "0";
        rec["token"] = token ? to_hex(token->serialize()) : "-";
        std::string locs, bits, recv;
        for (auto &row : cells) {
            for (auto &c : row) {
                locs += static_cast<char>('0' + c.statement.location);
                bits += static_cast<char>('0' + c.sender_bit);
                recv += static_cast<char>('0' + c.received);
            }
            locs += '/';
            bits += '/';
            recv += '/';
        }
        rec["locations"] = locs;
        rec["sender_bits"] = bits;
        rec["received"] = recv;
        return rec;
    }

    SrotInstance instance() const {
        SrotInstance x;
        x.lambda = lambda;
        x.main = main;
        for (auto &row : cells) {
            x.cells.emplace_back();
            for (auto &c : row) x.cells.back().push_back(c.statement);
        }
        return x;
    }
};

/// The interactive part up to (but excluding) the sender's final message.
/// Holds the SSOT functionality so outputs stay available.
struct SrotSession {
    SrotRun run;
    std::shared_ptr<IdealBackend> backend;

    /// Sender's last message for inputs (m0, m1); nullopt after an abort.
    std::optional<std::pair<std::uint8_t, std::uint8_t>> final_pair(std::uint8_t m0, std::uint8_t m1) const {
        if (run.aborted) return std::nullopt;
        std::uint8_t a = static_cast<std::uint8_t>((run.r_tilde ^ m0) & 1);
        std::uint8_t b = static_cast<std::uint8_t>((run.r_tilde ^ run.r ^ m1) & 1);
        return std::make_pair(a, b);
    }

    /// Honest receiver reconstruction: pair[beta] ^ r'.
    std::uint8_t reconstruct(const std::pair<std::uint8_t, std::uint8_t> &pair) const {
        return static_cast<std::uint8_t>((run.beta ? pair.second : pair.first) ^ run.r_prime);
    }
};

/// Runs the extraction and main phases and the consistency check.
inline SrotSession srot_interact(const SrotReceiverStrategy &strategy, std::size_t lambda, Rng &rng,
                                 std::shared_ptr<IdealBackend> backend = nullptr) {
    if (lambda < 2) throw ValidationError("SROT needs lambda >= 2");
    if (!backend) backend = std::make_shared<IdealBackend>();
    Rng srng = rng.fork(1);  // sender
    Rng rrng = rng.fork(2);  // receiver
    rng.next_u64();
    SsotFunctionality ssot;
    SrotSession s;
    s.backend = backend;
    SrotRun &run = s.run;
    run.lambda = lambda;
    run.beta = strategy.beta;

    // Receiver: w = (r', beta, main coins) and its shares.
    run.r_prime = rrng.bit();
    run.main_coins = BitString::random(lambda, rrng);
    SrotWitness wit;
    wit.r_prime = run.r_prime;
    wit.beta = strategy.beta;
    wit.main_coins = run.main_coins;
    const BitString w = wit.rows();
    const bool liar = strategy.kind == SrotReceiverStrategy::LocationLiar && rrng.bernoulli(strategy.p_lie);
    const std::size_t lie_cell = liar ? rrng.uniform((lambda + 2) * lambda) : 0;

    run.cells.assign(lambda + 2, std::vector<SrotCell>(lambda));
    for (std::size_t i = 0; i < lambda + 2; ++i) {
        std::uint8_t acc = 0;
        for (std::size_t j = 0; j < lambda; ++j) {
            SrotCell &c = run.cells[i][j];
            c.witness.share = j + 1 == lambda ? static_cast<std::uint8_t>(acc ^ w[i]) : rrng.bit();
            acc ^= c.witness.share;
            c.witness.mask = rrng.bit();
            c.witness.sender_coins = BitString::random(kCellCoinBits, rrng);
            c.true_location = rrng.bit();
            // A swapped location goes unnoticed when share == mask.
            if (liar && i * lambda + j == lie_cell) c.witness.mask = static_cast<std::uint8_t>(c.witness.share ^ 1);

            c.sender_bit = srng.bit();
            c.statement.transcript.ot1 = ssot.first_message(c.sender_bit, srng);
            std::uint8_t m0 = c.true_location ? c.witness.mask : c.witness.share;
            std::uint8_t m1 = c.true_location ? c.witness.share : c.witness.mask;
            if (strategy.kind == SrotReceiverStrategy::ShareWithholder) {
                // Masks in both positions; the share never enters the OT.
                (c.true_location ? m1 : m0) = static_cast<std::uint8_t>(c.witness.share ^ 1);
            }
            c.statement.transcript.ot2 = ssot.second_message(c.statement.transcript.ot1, m0, m1, c.witness.sender_coins);
            c.received = ssot.output(c.statement.transcript.ot1);
            c.statement.location = c.true_location;
            if (liar && i * lambda + j == lie_cell) c.statement.location ^= 1;
        }
    }

    // Main phase, roles flipped.
    run.r = srng.bit();
    const std::uint8_t main_beta = strategy.kind == SrotReceiverStrategy::InconsistentBeta ? strategy.beta ^ 1 : strategy.beta;
    run.main.ot1 = ssot.first_message(run.r, srng);
    run.main.ot2 = ssot.second_message(run.main.ot1, run.r_prime, static_cast<std::uint8_t>(run.r_prime ^ main_beta), run.main_coins);
    run.r_tilde = ssot.output(run.main.ot1);

    // Consistency proof by the receiver, checked by the sender.
    for (auto &row : run.cells) {
        wit.cells.emplace_back();
        for (auto &c : row) wit.cells.back().push_back(c.witness);
    }
    const SrotInstance x = run.instance();
    run.token = backend->prove<SrotConsistency>(x, wit);
    run.aborted = !backend->verify<SrotConsistency>(x, *run.token);
    return s;
}

struct SrotOutcome {
    std::optional<std::uint8_t> output;  // empty when the sender aborted
    SrotRun run;
};

inline SrotOutcome srot_run(std::uint8_t m0, std::uint8_t m1, const SrotReceiverStrategy &strategy, std::size_t lambda, Rng &rng) {
    auto s = srot_interact(strategy, lambda, rng);
    auto pair = s.final_pair(m0, m1);
    if (!pair) return {std::nullopt, s.run};
    return {s.reconstruct(*pair), s.run};
}

inline SrotOutcome srot_run(std::uint8_t m0, std::uint8_t m1, std::uint8_t beta, std::size_t lambda, Rng &rng) {
    return srot_run(m0, m1, SrotReceiverStrategy::honest(beta), lambda, rng);
}

// ---------------------------------------------------------------------------
// Receiver privacy.

/// What the sender learns about beta from its view. 0 or 1 when the view
/// pins beta down, 2 otherwise. Beta is exposed when every cell of row 1 was
/// recovered, or when every cell of row 0 was and r = 1 (then r~ ^ r' = beta).
/// In every other case the likelihood ratio of the view is 1, so this
/// statistic carries the full distinguishing power.
inline std::uint8_t sender_beta_statistic(const SrotRun &run) {
    auto recover = [&](std::size_t i) -> std::optional<std::uint8_t> {
        std::uint8_t acc = 0;
        for (auto &c : run.cells[i]) {
            if (c.sender_bit != c.statement.location) return std::nullopt;
            acc ^= c.received;
        }
        return acc;
    };
    if (auto b = recover(1)) return *b;
    if (run.r == 1) {
        if (auto rp = recover(0)) return static_cast<std::uint8_t>(run.r_tilde ^ *rp);
    }
    return 2;
}

namespace detail {

// Exhaustive tally of one row's sender view for row value `w`: per cell
// (location, sender bit, received). Keys pack 3 bits per cell.
inline std::map<std::uint64_t, std::uint64_t> srot_row_views(std::size_t lambda, std::uint8_t w) {
    std::map<std::uint64_t, std::uint64_t> out;
    const std::size_t bits = 4 * lambda - 1;  // location, sender bit, mask per cell; free shares
    for (std::uint64_t cfg = 0; cfg < (1ull << bits); ++cfg) {
        std::uint64_t key = 0;
        std::uint8_t acc = 0;
        for (std::size_t j = 0; j < lambda; ++j) {
            std::uint8_t loc = (cfg >> (3 * j)) & 1;
            std::uint8_t sb = (cfg >> (3 * j + 1)) & 1;
            std::uint8_t mask = (cfg >> (3 * j + 2)) & 1;
            std::uint8_t share = j + 1 == lambda ? static_cast<std::uint8_t>(acc ^ w) : (cfg >> (3 * lambda + j)) & 1;
            acc ^= share;
            std::uint8_t recv = sb == loc ? share : mask;
            key |= static_cast<std::uint64_t>(loc | (sb << 1) | (recv << 2)) << (3 * j);
        }
        ++out[key];
    }
    return out;
}

}  // namespace detail

/// Exact TV between the sender's views for beta = 0 and beta = 1, for
/// lambda <= 3. The view is every cell's (location, sender bit, received)
/// plus r and r~. Rows carrying the main coins have the same law under both
/// values of beta and factor out of the distance, so only rows 0 and 1 are
/// enumerated.
inline Rational receiver_privacy_tv_exact(std::size_t lambda) {
    if (lambda < 2 || lambda > 3) throw ValidationError("exact receiver-privacy TV is enumerated for lambda in {2, 3}");
    std::array<std::map<std::uint64_t, std::uint64_t>, 2> row{detail::srot_row_views(lambda, 0), detail::srot_row_views(lambda, 1)};
    std::vector<std::uint64_t> keys;
    for (auto &kv : row[0]) keys.push_back(kv.first);
    for (auto &kv : row[1])
        if (!row[0].count(kv.first)) keys.push_back(kv.first);
    auto count = [&](std::uint8_t w, std::uint64_t k) -> std::uint64_t {
        auto it = row[w].find(k);
        return it == row[w].end() ? 0 : it->second;
    };
    // Weight of (v0, v1, r, r~) under beta: sum over r' of
    // N(v0 | r') N(v1 | beta) [r~ = r' ^ (r & beta)].
    BigInt diff = 0, total = 0;
    for (auto v0 : keys) {
        for (auto v1 : keys) {
            for (std::uint8_t r = 0; r < 2; ++r) {
                for (std::uint8_t rt = 0; rt < 2; ++rt) {
                    std::array<std::uint64_t, 2> weight{};
                    for (std::uint8_t beta = 0; beta < 2; ++beta) {
                        std::uint8_t rp = static_cast<std::uint8_t>(rt ^ (r & beta));
                        weight[beta] = count(rp, v0) * count(beta, v1);
                    }
                    diff += weight[0] > weight[1] ? weight[0] - weight[1] : weight[1] - weight[0];
                    total += weight[0];
                }
            }
        }
    }
    return Rational(diff, 2 * total);
}

struct TvEstimate {
    double tv = 0;
    std::uint64_t trials = 0;  // per value of beta
    std::array<std::array<std::uint64_t, 3>, 2> counts{};
};

/// Sampled TV over `trials` honest runs per beta, measured on the sender's
/// beta statistic.
inline TvEstimate receiver_privacy_tv_sampled(std::size_t lambda, std::uint64_t trials, std::uint64_t seed, unsigned workers = 1) {
    TvEstimate e;
    e.trials = trials;
    for (std::uint8_t beta = 0; beta < 2; ++beta) {
        auto stats = parallel_trials(trials, workers, [&](std::uint64_t i) {
            Rng rng(derive_seed(derive_seed(seed, beta), i));
            auto s = srot_interact(SrotReceiverStrategy::honest(beta), lambda, rng);
            return sender_beta_statistic(s.run);
        });
        for (auto t : stats) ++e.counts[beta][t];
    }
    double n = static_cast<double>(trials);
    for (int t = 0; t < 3; ++t) e.tv += std::abs(static_cast<double>(e.counts[0][t]) - static_cast<double>(e.counts[1][t])) / n;
    e.tv /= 2;
    return e;
}

// ---------------------------------------------------------------------------
// Sender privacy games.

struct SenderPrivacyResult {
    double p0_hat = 0, p1_hat = 0;
    double advantage = 0;
    std::uint64_t trials = 0, completed = 0, aborted = 0;
};

/// G0 sends (m_b0, m1) and G1 sends (m0, m_b1) for fresh coins b0, b1. The
/// adversary is the receiver's own decoder: it reads slot beta and names
/// the coin when that slot is the randomized one, else guesses.
inline SenderPrivacyResult sender_privacy_game(const SrotReceiverStrategy &strategy, std::uint8_t m0, std::uint8_t m1,
                                               std::size_t lambda, std::uint64_t trials, std::uint64_t seed) {
    SenderPrivacyResult res;
    res.trials = trials;
    std::uint64_t wins0 = 0, wins1 = 0;
    const std::array<std::uint8_t, 2> m{static_cast<std::uint8_t>(m0 & 1), static_cast<std::uint8_t>(m1 & 1)};
    for (std::uint64_t i = 0; i < trials; ++i) {
        Rng rng(derive_seed(seed, i));
        auto s = srot_interact(strategy, lambda, rng);
        if (s.run.aborted) {
            ++res.aborted;
            continue;
        }
        ++res.completed;
        Rng game(derive_seed(seed ^ 0x9a3e, i));
        for (int g = 0; g < 2; ++g) {
            std::uint8_t coin = game.bit();
            auto pair = g == 0 ? *s.final_pair(m[coin], m[1]) : *s.final_pair(m[0], m[coin]);
            std::uint8_t guess;
            if (s.run.beta == g && m[0] != m[1]) {
                std::uint8_t got = s.reconstruct(pair);
                guess = got == m[0] ? 0 : 1;
            } else {
                guess = game.bit();
            }
            (g == 0 ? wins0 : wins1) += guess == coin;
        }
    }
    if (res.completed) {
        double n = static_cast<double>(res.completed);
        res.p0_hat = std::abs(static_cast<double>(wins0) / n - 0.5);
        res.p1_hat = std::abs(static_cast<double>(wins1) / n - 0.5);
    }
    res.advantage = std::min(res.p0_hat, res.p1_hat);
    return res;
}

}  // namespace bcqzk
