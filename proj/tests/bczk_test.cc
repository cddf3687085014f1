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

#include "bcqzk/bczk.hpp"

#include <cmath>
#include <map>

#include "gtest/gtest.h"

#include "bcqzk/core/stats.hpp"

using namespace bcqzk;

namespace {

BczkRun<> go(const ProtocolParams &p, const AdversarySpec &adv, std::uint64_t seed, ProverOptions po = {}) {
    return run_protocol(planted_setup(p, seed), po, adv, seed);
}

// Wraps an honest prover and corrupts one chosen reply.
struct Tampering {
    enum Mode { GarbageToken, ForgedToken, ShortCommitment } mode;
    BczkProver<> inner;
    std::uint64_t slots;

    bool replies_to(std::uint32_t r) const {
        return inner.replies_to(r);
    }
    bool finished() const {
        return inner.finished();
    }
    PartyReply receive(std::uint32_t r, const Bytes &b, Rng &rng) {
        auto out = inner.receive(r, b, rng);
        if (mode == GarbageToken && r == 3 * slots + 3) {
            for (auto &x : out.body) x = static_cast<std::uint8_t>(rng.next_u64());
            out.body[0] = 1;
            out.body[33] = 1;
        }
        if (mode == ForgedToken && r == 3 * slots + 3) {
            auto t = ProofToken::parse(out.body);
            t.valid = true;
            t.instance_digest[0] ^= 1;
            out.body = t.serialize();
        }
        if (mode == ShortCommitment && r == 1) out.body.pop_back();
        return out;
    }
};

BczkAdversary<> honest_adversary(const BczkSetup<> &s, std::uint64_t seed) {
    return BczkAdversary<>(s.params, AdversarySpec::honest_like(), s.x, s.backend, seed);
}

VerifierSession::Phase tampered_outcome(Tampering::Mode mode, bool with_witness) {
    auto p = desk_profile(8, 4, 1, 1);
    auto s = planted_setup(p, 5);
    if (!with_witness) s.w.reset();
    Tampering t{mode, BczkProver<>(p, s.backend, s.x, s.w), p.slots};
    World<Tampering, BczkAdversary<>> w(Engine<Tampering>({t}), honest_adversary(s, 6));
    Rng rng(7);
    run(w, rng, step_budget(p));
    return w.driver().session(1).phase;
}

}  // namespace

TEST(bczk, honest_completeness) {
    for (std::uint64_t q : {1u, 2u, 3u}) {
        auto p = desk_profile(8, 4, 1, q);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto r = go(p, AdversarySpec::honest_like(), seed);
            for (std::uint32_t i = 1; i <= q; ++i) EXPECT_TRUE(r.accepted(i)) << q << " " << seed;
        }
    }
}

TEST(bczk, committed_bit_frequency) {
    auto p = desk_profile(1000, 10, 1, 1);
    std::uint64_t ones = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto r = go(p, AdversarySpec::honest_like(), seed);
        for (auto &s : r.world.engine().party(1).secrets_handle().slots) ones += s.bit;
        total += p.slots;
    }
    double f = static_cast<double>(ones) / static_cast<double>(total);
    EXPECT_GE(f, 0.48);
    EXPECT_LE(f, 0.52);
}

TEST(bczk, stage2_message_during_stage1_aborts) {
    auto p = desk_profile(8, 4, 1, 1);
    auto s = planted_setup(p, 1);
    BczkProver<> prover(p, s.backend, s.x, s.w);
    Rng rng(1);
    auto first = prover.receive(1, Rng(2).next_u64() ? random_receiver_string(p.seed_bits(), rng).bytes() : Bytes{}, rng);
    EXPECT_EQ(first.kind, PartyReply::Reply);
    EXPECT_EQ(prover.receive(3 * 8 + 1, Bytes(16), rng).kind, PartyReply::Abort);
    EXPECT_EQ(prover.phase(), BczkPhase::Aborted);
}

TEST(bczk, prover_rejects_bad_bodies) {
    auto p = desk_profile(8, 4, 1, 1);
    auto s = planted_setup(p, 1);
    Rng rng(1);
    BczkProver<> a(p, s.backend, s.x, s.w);
    EXPECT_EQ(a.receive(1, Bytes(2), rng).kind, PartyReply::Abort);
    BczkProver<> b(p, s.backend, s.x, s.w);
    b.receive(1, random_receiver_string(p.seed_bits(), rng).bytes(), rng);
    EXPECT_EQ(b.receive(3, Bytes{2}, rng).kind, PartyReply::Abort);
}

TEST(bczk, verifier_rejects_garbage_and_forged_tokens) {
    EXPECT_EQ(tampered_outcome(Tampering::GarbageToken, true), VerifierSession::Phase::Rejected);
    EXPECT_EQ(tampered_outcome(Tampering::ForgedToken, true), VerifierSession::Phase::Rejected);
}

TEST(bczk, verifier_rejects_malformed_commitment) {
    EXPECT_EQ(tampered_outcome(Tampering::ShortCommitment, true), VerifierSession::Phase::Rejected);
}

TEST(bczk, no_witness_and_few_matches_rejected) {
    auto p = desk_profile(8, 4, 3, 1);
    auto s = planted_setup(p, 3);
    s.w.reset();
    // Without the witness the prover falls back on matched openings, which
    // it has only by luck; with threshold 7 of 8 most runs reject.
    int accepted = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto r = run_protocol(s, {Stage2Mode::MatchedOpenings}, AdversarySpec::honest_like(), seed);
        accepted += r.accepted(1);
    }
    // P[Bin(8,1/2) >= 7] = 9/256.
    EXPECT_LE(accepted, 200 * 9 / 256 + 3 * std::sqrt(200 * 0.035));
}

TEST(bczk, verifier_bits_uniform) {
    auto p = desk_profile(1000, 10, 1, 1);
    std::map<int, double> hist;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto r = go(p, AdversarySpec::honest_like(), 100 + seed);
        for (auto &st : r.world.engine().party(1).statements()) hist[st.verifier_bit] += 1;
    }
    auto gof = chi_square_gof({hist[0], hist[1]}, {0.5, 0.5});
    EXPECT_GT(gof.p_value, 0.001);
}

TEST(matched_count, honest_concentration) {
    auto p = desk_profile(1000, 10, 1, 1);
    auto r = go(p, AdversarySpec::honest_like(), 21);
    auto c = matched_count(r.transcript.order, 1, r.world.engine().party(1).secrets_handle(), p);
    EXPECT_GE(c, 460u);
    EXPECT_LE(c, 540u);
    EXPECT_EQ(c, r.world.engine().party(1).matched_slots().size());
}

TEST(matched_count, fixed_zero_counts_zero_commitments) {
    auto p = desk_profile(64, 16, 2, 2);
    auto r = go(p, AdversarySpec::fixed_bits(0), 22);
    for (std::uint32_t i = 1; i <= 2; ++i) {
        const auto &sec = r.world.engine().party(i).secrets_handle();
        std::uint64_t zeros = 0;
        for (auto &s : sec.slots) zeros += s.bit == 0;
        EXPECT_EQ(matched_count(r.transcript.order, i, sec, p), zeros);
    }
}

TEST(matched_count, empty_and_pending) {
    auto p = desk_profile(8, 4, 1, 1);
    EXPECT_EQ(matched_count({}, 1, ProverSecrets{}, p), 0u);
    auto r = go(p, AdversarySpec::honest_like(), 23);
    auto order = r.transcript.order;
    order.resize(2);  // rstring and commitment of slot 1, no reply yet
    EXPECT_THROW(matched_count(order, 1, r.world.engine().party(1).secrets_handle(), p), ProtocolError);
}

TEST(slot_records, positions_and_match_flag) {
    auto p = desk_profile(16, 4, 1, 2);
    auto r = go(p, AdversarySpec::honest_like(), 24);
    for (std::uint32_t i = 1; i <= 2; ++i) {
        const auto &prover = r.world.engine().party(i);
        auto recs = slot_records(r.transcript.order, i, prover.secrets_handle(), p);
        ASSERT_EQ(recs.size(), p.slots);
        for (std::size_t j = 0; j < recs.size(); ++j) {
            EXPECT_LT(recs[j].positions[0], recs[j].positions[1]);
            EXPECT_LT(recs[j].positions[1], recs[j].positions[2]);
            EXPECT_EQ(recs[j].commitment, prover.statements()[j].commitment);
            EXPECT_EQ(recs[j].matched(), recs[j].committed_bit == prover.statements()[j].verifier_bit);
            EXPECT_TRUE(verify_open(recs[j].rstring, recs[j].commitment, {recs[j].committed_bit, recs[j].seed}));
        }
        // The adversary's own position log agrees with the transcript.
        const auto &pos = r.world.driver().session(i).positions;
        for (std::size_t j = 0; j < recs.size(); ++j) EXPECT_EQ(pos[j], recs[j].positions);
    }
}

namespace {

// Independent recount: a slot is complete in a block when its commitment
// and the reply to it sit in the same block.
std::vector<int> complete_per_block(const TranscriptSet &t, const ProtocolParams &p) {
    std::vector<int> out(p.blocks, 0);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> commit_pos;
    for (std::size_t i = 0; i < t.order.size(); ++i) {
        const auto &m = t.order[i];
        if (m.round > 3 * p.slots) continue;
        if (m.round % 3 == 2) commit_pos[{m.session, m.round}] = i;
        if (m.round % 3 == 0) {
            std::size_t c = commit_pos.at({m.session, m.round - 1});
            std::size_t bc = std::min<std::size_t>(c / p.block_len, p.blocks - 1);
            std::size_t bb = std::min<std::size_t>(i / p.block_len, p.blocks - 1);
            if (bc == bb) out[bb] += 1;
        }
    }
    return out;
}

}  // namespace

TEST(adversary, slot_staggerer_empties_a_block) {
    auto p = desk_profile(4, 8, 1, 2);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto r = go(p, AdversarySpec::slot_staggerer(), seed);
        auto counts = complete_per_block(r.transcript, p);
        EXPECT_NE(std::find(counts.begin(), counts.end(), 0), counts.end()) << seed;
        // Library path agrees with the recount.
        auto blocks = block_view(r.transcript.order, p);
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            EXPECT_EQ(static_cast<int>(complete_slots(r.transcript.order, blocks[k].begin, blocks[k].end, p).size()), counts[k]);
        }
        EXPECT_TRUE(r.accepted(1) && r.accepted(2));
    }
}

TEST(adversary, staggerer_reduces_complete_slots) {
    auto p = desk_profile(32, 16, 2, 2);
    int honest = 0, stagger = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        for (int c : complete_per_block(go(p, AdversarySpec::honest_like(), seed).transcript, p)) honest += c;
        for (int c : complete_per_block(go(p, AdversarySpec::slot_staggerer(), seed).transcript, p)) stagger += c;
    }
    EXPECT_LT(stagger, honest);
}

TEST(adversary, aborter_zero_is_honest_like) {
    auto p = desk_profile(16, 8, 1, 3);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EXPECT_EQ(go(p, AdversarySpec::aborter(0), seed).transcript, go(p, AdversarySpec::honest_like(), seed).transcript);
    }
}

TEST(adversary, aborter_one_and_block_abort) {
    auto p = desk_profile(16, 8, 1, 2);
    EXPECT_TRUE(go(p, AdversarySpec::aborter(1.0), 1).transcript.order.empty());
    auto r = go(p, AdversarySpec::all_abort_in_block(3), 2);
    EXPECT_EQ(r.transcript.order.size(), 2 * p.block_len);
    EXPECT_FALSE(r.accepted(1));
    auto none = go(p, AdversarySpec::all_na(), 3);
    EXPECT_TRUE(none.transcript.order.empty());
}

TEST(adversary, public_coin_stream_independent_of_prover) {
    auto p = desk_profile(32, 8, 2, 2);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto a = go(p, AdversarySpec::honest_like(), seed, {Stage2Mode::BaseWitness, CommitStrategy::Random});
        auto b = go(p, AdversarySpec::honest_like(), seed, {Stage2Mode::BaseWitness, CommitStrategy::AllZeros});
        std::vector<TranscriptMessage> va, vb;
        for (auto &m : a.transcript.order)
            if (m.dir == Direction::V) va.push_back(m);
        for (auto &m : b.transcript.order)
            if (m.dir == Direction::V) vb.push_back(m);
        EXPECT_EQ(va, vb);
    }
}

TEST(adversary, matched_fraction_concentrates_for_oblivious_strategies) {
    auto p = desk_profile(200, 20, 2, 2);
    for (auto spec : {AdversarySpec::honest_like(), AdversarySpec::fixed_bits(1), AdversarySpec::state_dependent(),
                      AdversarySpec::slot_staggerer()}) {
        std::uint64_t matched = 0, total = 0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto r = go(p, spec, 300 + seed);
            for (std::uint32_t i = 1; i <= 2; ++i) {
                matched += matched_count(r.transcript.order, i, r.world.engine().party(i).secrets_handle(), p);
                total += p.slots;
            }
        }
        double sigma = std::sqrt(static_cast<double>(total) / 4);
        EXPECT_NEAR(static_cast<double>(matched), static_cast<double>(total) / 2, 3 * sigma) << spec.name();
    }
}

TEST(adversary, parse_names) {
    for (auto &s : adversary_library()) EXPECT_EQ(parse_adversary(s.name()).name(), s.name());
    EXPECT_THROW(parse_adversary("Nope"), ValidationError);
    EXPECT_THROW(parse_adversary("FixedBits(2)"), ValidationError);
    EXPECT_THROW(parse_adversary("Aborter(x)"), ValidationError);
}
