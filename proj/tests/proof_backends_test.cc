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

#include "bcqzk/proof_backends.hpp"

#include <map>

#include "gtest/gtest.h"

#include "bcqzk/core/stats.hpp"

using namespace bcqzk;

namespace {

struct RwiFixture {
    RwiInstance<SubsetSum> x;
    std::vector<Opening> secrets;  // the prover's real openings
};

RwiFixture make_rwi(std::size_t slots, std::uint64_t threshold, Rng &rng, bool satisfiable_base = true) {
    RwiFixture f;
    f.x.x = satisfiable_base ? planted_subset_sum(6, rng).x : unsatisfiable_subset_sum(6, rng);
    f.x.threshold = threshold;
    for (std::size_t j = 0; j < slots; ++j) {
        auto r = random_receiver_string(8, rng);
        Opening op{rng.bit(), BitString::random(8, rng)};
        f.x.slots.push_back({r, commit(r, op.bit, op.seed), rng.bit()});
        f.secrets.push_back(op);
    }
    return f;
}

RwiWitness<SubsetSum> openings_for(const RwiFixture &f, std::size_t how_many_matched) {
    RwiWitness<SubsetSum> w;
    w.openings.resize(f.x.slots.size());
    std::size_t used = 0;
    for (std::size_t j = 0; j < f.x.slots.size() && used < how_many_matched; ++j) {
        if (f.secrets[j].bit == f.x.slots[j].verifier_bit) {
            w.openings[j] = f.secrets[j];
            ++used;
        }
    }
    return w;
}

std::size_t matched(const RwiFixture &f) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < f.secrets.size(); ++j) m += f.secrets[j].bit == f.x.slots[j].verifier_bit;
    return m;
}

struct Grid {
    ZkPokInstance x;
    ZkPokWitness w;
};

// Honest share grid built directly from SSOT tokens.
Grid make_grid(std::size_t bits, std::size_t lambda, Rng &rng) {
    auto pair = planted_subset_sum(bits, rng);
    Grid g;
    g.x.x = pair.x;
    g.w.w = pair.w;
    for (std::size_t i = 0; i < bits; ++i) {
        std::vector<CellStatement> row;
        std::vector<CellWitness> wrow;
        std::uint8_t acc = 0;
        for (std::size_t j = 0; j < lambda; ++j) {
            std::uint8_t sh = j + 1 == lambda ? static_cast<std::uint8_t>(acc ^ pair.w[i]) : rng.bit();
            acc ^= sh;
            CellWitness cw{BitString::random(lambda, rng), sh, rng.bit()};
            std::uint8_t loc = rng.bit();
            SsotTranscript t;
            t.ot1 = ssot_first_token(rng.next_u64(), rng.next_u64(), 0);
            t.ot2 = ssot_second_token(t.ot1, cw.sender_coins, loc ? cw.mask : cw.share, loc ? cw.share : cw.mask);
            row.push_back({t, loc});
            wrow.push_back(cw);
        }
        g.x.cells.push_back(row);
        g.w.cells.push_back(wrow);
    }
    return g;
}

}  // namespace

TEST(rwi, base_witness_branch) {
    Rng rng(1);
    auto pair = planted_subset_sum(6, rng);
    auto f = make_rwi(10, 8, rng);
    f.x.x = pair.x;
    RwiWitness<SubsetSum> w;
    w.base = pair.w;
    w.openings.resize(10);
    EXPECT_TRUE(relation_rwi(f.x, w));
    w.base = BitString(6) ^ pair.w ^ BitString::from_uint(1, 6);
    EXPECT_FALSE(relation_rwi(f.x, w));
}

TEST(rwi, threshold_boundary) {
    Rng rng(2);
    auto f = make_rwi(40, 0, rng, false);
    std::size_t m = matched(f);
    ASSERT_GT(m, 3u);
    f.x.threshold = m;
    EXPECT_TRUE(relation_rwi(f.x, openings_for(f, m)));
    EXPECT_FALSE(relation_rwi(f.x, openings_for(f, m - 1)));
}

TEST(rwi, unmatched_openings_never_count) {
    Rng rng(3);
    auto f = make_rwi(40, 1, rng, false);
    RwiWitness<SubsetSum> w;
    w.openings.resize(40);
    for (std::size_t j = 0; j < 40; ++j) {
        if (f.secrets[j].bit != f.x.slots[j].verifier_bit) w.openings[j] = f.secrets[j];
    }
    EXPECT_FALSE(relation_rwi(f.x, w));
}

TEST(rwi, monotone_in_openings) {
    Rng rng(4);
    auto f = make_rwi(30, 0, rng, false);
    std::size_t m = matched(f);
    for (std::uint64_t thr = 1; thr <= m; ++thr) {
        f.x.threshold = thr;
        bool prev = false;
        for (std::size_t k = 0; k <= m; ++k) {
            bool cur = relation_rwi(f.x, openings_for(f, k));
            EXPECT_TRUE(!prev || cur);
            EXPECT_EQ(cur, k >= thr);
            prev = cur;
        }
    }
}

TEST(rwi, malformed_shape) {
    Rng rng(5);
    auto f = make_rwi(5, 1, rng);
    RwiWitness<SubsetSum> w;
    w.openings.resize(4);
    EXPECT_THROW(relation_rwi(f.x, w), LengthError);
}

TEST(zkpok_relation, honest_flipped_and_wrong_witness) {
    Rng rng(6);
    auto g = make_grid(4, 5, rng);
    EXPECT_TRUE(relation_zkpok(g.x, g.w));

    auto flipped = g.w;
    flipped.cells[2][3].share ^= 1;
    EXPECT_FALSE(relation_zkpok(g.x, flipped));

    // Re-share a different witness consistently: rows fine, base relation not.
    auto other = make_grid(4, 5, rng);
    other.x.x = g.x.x;
    if (!SubsetSum::holds(g.x.x, other.w.w)) EXPECT_FALSE(relation_zkpok(other.x, other.w));

    auto bad_dims = g.w;
    bad_dims.cells.pop_back();
    EXPECT_THROW(relation_zkpok(g.x, bad_dims), LengthError);
    auto bad_cols = g.w;
    bad_cols.cells[0].pop_back();
    EXPECT_THROW(relation_zkpok(g.x, bad_cols), LengthError);
}

TEST(tokens, prove_verify_and_mismatch) {
    Rng rng(7);
    IdealBackend backend;
    auto g = make_grid(3, 4, rng);
    auto t = prove<ZkPok>(backend, g.x, g.w);
    EXPECT_TRUE(t.valid);
    EXPECT_TRUE(verify<ZkPok>(backend, g.x, t));

    auto other = make_grid(3, 4, rng);
    EXPECT_FALSE(verify<ZkPok>(backend, other.x, t));

    auto bad = g.w;
    bad.cells[0][0].mask ^= 1;
    auto t2 = prove<ZkPok>(backend, g.x, bad);
    EXPECT_FALSE(t2.valid);

    auto f = make_rwi(4, 1, rng);
    auto wrong_rel = t;
    EXPECT_FALSE((verify<Rwi<SubsetSum>>(backend, f.x, wrong_rel)));
}

TEST(tokens, forged_validity_is_rejected) {
    Rng rng(8);
    IdealBackend backend;
    auto g = make_grid(3, 4, rng);
    auto bad = g.w;
    bad.cells[1][1].share ^= 1;
    auto t = prove<ZkPok>(backend, g.x, bad);
    t.valid = true;
    EXPECT_FALSE(verify<ZkPok>(backend, g.x, t));
}

TEST(tokens, serialization) {
    Rng rng(9);
    IdealBackend backend;
    auto g = make_grid(2, 3, rng);
    auto t = prove<ZkPok>(backend, g.x, g.w);
    auto bytes = t.serialize();
    ASSERT_EQ(bytes.size(), 34u);
    EXPECT_EQ(bytes[0], 2);
    EXPECT_EQ(bytes[33], 1);
    EXPECT_EQ(ProofToken::parse(bytes), t);
    bytes[0] = 9;
    EXPECT_THROW(ProofToken::parse(bytes), ValidationError);
    EXPECT_THROW(relation_from_tag(0), ValidationError);
}

TEST(tokens, digest_layout_is_length_prefixed_fields) {
    CoinflipOpenInstance x{BitString::from_uint(0x5, 12), {BitString::from_uint(0x9, 12)}, 1};
    // tag field, rstring field, commitment field, a field
    Bytes expect = {0, 0, 0, 1, 4, 0, 0, 0, 2, 0x00, 0x50, 0, 0, 0, 2, 0x00, 0x90, 0, 0, 0, 1, 1};
    EXPECT_EQ(instance_digest<CoinflipOpen>(x), sha256(expect));
}

TEST(srot_relation, honest_and_tampered) {
    Rng rng(10);
    const std::size_t lambda = 3;
    SrotInstance x;
    SrotWitness w;
    x.lambda = lambda;
    w.r_prime = 1;
    w.beta = 1;
    w.main_coins = BitString::random(lambda, rng);
    x.main.ot1 = ssot_first_token(1, 2, 0);
    x.main.ot2 = ssot_second_token(x.main.ot1, w.main_coins, w.r_prime, w.r_prime ^ w.beta);
    auto rows = w.rows();
    for (std::size_t i = 0; i < lambda + 2; ++i) {
        std::vector<CellStatement> row;
        std::vector<CellWitness> wrow;
        std::uint8_t acc = 0;
        for (std::size_t j = 0; j < lambda; ++j) {
            std::uint8_t sh = j + 1 == lambda ? static_cast<std::uint8_t>(acc ^ rows[i]) : rng.bit();
            acc ^= sh;
            CellWitness cw{BitString::random(lambda, rng), sh, rng.bit()};
            std::uint8_t loc = rng.bit();
            SsotTranscript t;
            t.ot1 = ssot_first_token(rng.next_u64(), 0, 0);
            t.ot2 = ssot_second_token(t.ot1, cw.sender_coins, loc ? cw.mask : cw.share, loc ? cw.share : cw.mask);
            row.push_back({t, loc});
            wrow.push_back(cw);
        }
        x.cells.push_back(row);
        w.cells.push_back(wrow);
    }
    EXPECT_TRUE(relation_srot(x, w));

    auto other_beta = w;
    other_beta.beta ^= 1;
    EXPECT_FALSE(relation_srot(x, other_beta));

    auto swapped = w;
    std::swap(swapped.cells[0][0].share, swapped.cells[0][0].mask);
    if (w.cells[0][0].share != w.cells[0][0].mask) EXPECT_FALSE(relation_srot(x, swapped));

    auto short_grid = w;
    short_grid.cells.pop_back();
    EXPECT_THROW(relation_srot(x, short_grid), LengthError);
}

TEST(crs, honest_uniform) {
    Rng rng(11);
    std::size_t ones = 0, total = 0;
    for (int run = 0; run < 100; ++run) {
        auto r = crs_from_coinflip(1000, CrsProverRole::Honest, {}, rng);
        ones += r.crs.popcount();
        total += r.crs.size();
    }
    double f = static_cast<double>(ones) / static_cast<double>(total);
    EXPECT_GE(f, 0.48);
    EXPECT_LE(f, 0.52);
}

TEST(crs, inconsistent_reveal_aborts_at_index) {
    Rng rng(12);
    CrsVerifierRole v{CrsVerifierRole::InconsistentReveal, 5};
    try {
        crs_from_coinflip(10, CrsProverRole::Honest, v, rng);
        FAIL();
    } catch (const CrsAbort &e) {
        EXPECT_EQ(e.index, 5u);
    }
}

TEST(crs, single_bit_has_four_messages) {
    Rng rng(13);
    auto r = crs_from_coinflip(1, CrsProverRole::Honest, {}, rng);
    EXPECT_EQ(r.transcript.size(), 4u);
    EXPECT_THROW(crs_from_coinflip(0, CrsProverRole::Honest, {}, rng), ValidationError);
}

TEST(crs, cheating_prover_cannot_bias) {
    for (auto role : {CrsProverRole::FixedZero, CrsProverRole::FixedOne, CrsProverRole::AdaptiveOnCommitment}) {
        Rng rng(14 + static_cast<int>(role));
        std::map<int, double> counts;
        for (int run = 0; run < 20; ++run) {
            auto r = crs_from_coinflip(500, role, {}, rng);
            for (std::size_t i = 0; i < r.crs.size(); ++i) counts[r.crs[i]] += 1;
        }
        auto chi = chi_square_gof({counts[0], counts[1]}, {0.5, 0.5});
        EXPECT_GT(chi.p_value, 0.01) << static_cast<int>(role);
    }
}
