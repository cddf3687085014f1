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

#include "bcqzk/session_engine.hpp"

#include "gtest/gtest.h"

#include "bcqzk/bczk.hpp"

using namespace bcqzk;

namespace {

// Replies to odd rounds with the body reversed; done after `last` rounds.
struct Echo {
    std::uint32_t last = 4;
    std::uint32_t seen = 0;

    bool replies_to(std::uint32_t r) const {
        return r % 2 == 1;
    }
    PartyReply receive(std::uint32_t r, const Bytes &b, Rng &) {
        seen = r + (r % 2);
        return r % 2 ? PartyReply::reply(Bytes(b.rbegin(), b.rend())) : PartyReply::silent();
    }
    bool finished() const {
        return seen >= last;
    }
};

struct NaForever {
    std::optional<BundledMessage> next() {
        return BundledMessage::all_na(2);
    }
    void observe(const BundledMessage &) {
    }
    void on_message(const TranscriptMessage &) {
    }
};

}  // namespace

TEST(engine, all_na_in_all_na_out) {
    Engine<Echo> e({Echo{}, Echo{}, Echo{}});
    Rng rng(1);
    EXPECT_EQ(e.step(BundledMessage::all_na(3), rng), BundledMessage::all_na(3));
}

TEST(engine, in_order_message_gets_next_round) {
    Engine<Echo> e({Echo{}, Echo{}});
    Rng rng(1);
    auto out = e.step(BundledMessage::single(2, 1, 1, {1, 2, 3}), rng);
    EXPECT_EQ(out.at(1), Payload(Live{2, {3, 2, 1}}));
    EXPECT_EQ(out.at(2), Payload(NA{}));
    EXPECT_EQ(e.expected_round(1), 3u);
}

TEST(engine, out_of_order_kills_session) {
    Engine<Echo> e({Echo{}, Echo{}});
    Rng rng(1);
    auto out = e.step(BundledMessage::single(2, 1, 3, {9}), rng);
    EXPECT_EQ(out.at(1), Payload(Bottom{}));
    EXPECT_EQ(e.status(1), SessionStatus::Dead);
    // Dead sessions answer NA from then on; the other session is unaffected.
    EXPECT_EQ(e.step(BundledMessage::single(2, 1, 1, {9}), rng).at(1), Payload(NA{}));
    EXPECT_EQ(e.step(BundledMessage::single(2, 2, 1, {9}), rng).at(2), Payload(Live{2, {9}}));
}

TEST(engine, malformed_bundle) {
    Engine<Echo> e({Echo{}, Echo{}});
    Rng rng(1);
    EXPECT_THROW(e.step(BundledMessage::all_na(3), rng), ProtocolError);
    auto b = BundledMessage::all_na(2);
    std::swap(b.entries[0], b.entries[1]);
    EXPECT_THROW(e.step(b, rng), ProtocolError);
}

TEST(engine, extra_live_entries_normalized_to_lowest_session) {
    Engine<Echo> e({Echo{}, Echo{}, Echo{}});
    Rng rng(1);
    auto b = BundledMessage::all_na(3);
    b.entries[1].payload = Live{1, {7}};
    b.entries[2].payload = Live{1, {8}};
    auto out = e.step(b, rng);
    EXPECT_EQ(out.at(2), Payload(Live{2, {7}}));
    EXPECT_EQ(out.at(3), Payload(NA{}));
    EXPECT_EQ(e.expected_round(3), 1u);
    ASSERT_EQ(e.deviations().size(), 1u);
    EXPECT_NE(e.deviations()[0].what.find("session 3"), std::string::npos);
}

TEST(engine, deliver_complete_split_matches_step) {
    Engine<Echo> a({Echo{}}), b({Echo{}});
    Rng r1(4), r2(4);
    auto in = BundledMessage::single(1, 1, 1, {5, 6});
    auto whole = a.step(in, r1);
    auto d = b.deliver(in, r2);
    ASSERT_TRUE(d.reply_pending);
    EXPECT_TRUE(b.has_pending());
    EXPECT_THROW(b.deliver(in, r2), ProtocolError);
    EXPECT_EQ(b.complete(r2).first, whole);
}

TEST(engine, stall_budget) {
    World<Echo, NaForever> w(Engine<Echo>({Echo{}, Echo{}}), NaForever{});
    Rng rng(1);
    EXPECT_THROW(run(w, rng, 50), StallError);
}

TEST(block_view, partition_examples) {
    auto v = block_view(364, 24, 15);
    ASSERT_EQ(v.size(), 24u);
    for (int k = 0; k < 23; ++k) EXPECT_EQ(v[k].size(), 15u);
    EXPECT_EQ(v[23].size(), 19u);
    for (std::size_t k = 1; k < v.size(); ++k) EXPECT_EQ(v[k].begin, v[k - 1].end);
    EXPECT_EQ(v.front().begin, 0u);
    EXPECT_EQ(v.back().end, 364u);

    auto empty = block_view(0, 5, 4);
    ASSERT_EQ(empty.size(), 5u);
    for (auto &b : empty) EXPECT_EQ(b.size(), 0u);
}

TEST(block_view, concatenation_property) {
    Rng rng(2);
    for (int t = 0; t < 200; ++t) {
        std::size_t total = rng.uniform(500);
        std::uint64_t blocks = 1 + rng.uniform(40), len = 1 + rng.uniform(20);
        auto v = block_view(total, blocks, len);
        std::size_t cursor = 0;
        for (auto &b : v) {
            EXPECT_EQ(b.begin, cursor);
            cursor = b.end;
        }
        EXPECT_EQ(cursor, total);
    }
}

TEST(scheduler, round_robin_alternates) {
    SchedulerState s(Scheduler::round_robin());
    std::vector<std::uint32_t> ready{1, 2, 3};
    EXPECT_EQ(s.pick(ready).session, 1u);
    EXPECT_EQ(s.pick(ready).session, 2u);
    EXPECT_EQ(s.pick(ready).session, 3u);
    EXPECT_EQ(s.pick(ready).session, 1u);
    EXPECT_EQ(s.pick({1, 3}).session, 3u);
}

TEST(scheduler, staggered_runs) {
    SchedulerState s(Scheduler::block_staggered(3));
    std::vector<std::uint32_t> ready{1, 2};
    std::vector<std::uint32_t> got;
    for (int i = 0; i < 6; ++i) got.push_back(s.pick(ready).session);
    EXPECT_EQ(got, (std::vector<std::uint32_t>{1, 1, 1, 2, 2, 2}));
    EXPECT_THROW(Scheduler::block_staggered(0), ValidationError);
    EXPECT_THROW(Scheduler::abortive(1.5), ValidationError);
}

namespace {

BczkRun<> honest_run(std::uint64_t q, Scheduler s, std::uint64_t seed) {
    auto p = desk_profile(8, 4, 1, q);
    return run_protocol(planted_setup(p, seed), {}, AdversarySpec::honest_like(s), seed);
}

}  // namespace

TEST(run, round_robin_two_sessions_complete_and_alternate) {
    auto r = honest_run(2, Scheduler::round_robin(), 3);
    auto p = desk_profile(8, 4, 1, 2);
    EXPECT_EQ(r.transcript.order.size(), p.prot_len * 2);
    for (auto st : r.transcript.status) EXPECT_EQ(st, SessionStatus::Completed);
    EXPECT_TRUE(r.accepted(1));
    EXPECT_TRUE(r.accepted(2));
    // Verifier turns alternate between the sessions.
    std::vector<std::uint32_t> v_sessions;
    for (auto &m : r.transcript.order)
        if (m.dir == Direction::V) v_sessions.push_back(m.session);
    for (std::size_t i = 1; i < v_sessions.size(); ++i) EXPECT_NE(v_sessions[i], v_sessions[i - 1]);
}

TEST(run, abortive_one_kills_everything) {
    auto r = honest_run(3, Scheduler::abortive(1.0), 4);
    EXPECT_TRUE(r.transcript.order.empty());
    for (std::uint32_t i = 1; i <= 3; ++i) {
        EXPECT_EQ(r.world.driver().session(i).phase, VerifierSession::Phase::Aborted);
    }
}

TEST(run, determinism_and_seed_sensitivity) {
    auto a = honest_run(2, Scheduler::random_interleave(), 9);
    auto b = honest_run(2, Scheduler::random_interleave(), 9);
    auto c = honest_run(2, Scheduler::random_interleave(), 10);
    EXPECT_EQ(a.transcript, b.transcript);
    EXPECT_EQ(a.transcript.serialize(), b.transcript.serialize());
    EXPECT_NE(a.transcript.serialize(), c.transcript.serialize());
}

TEST(run, liveness_and_conservation) {
    for (auto s : {Scheduler::round_robin(), Scheduler::random_interleave(), Scheduler::block_staggered(5)}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            auto r = honest_run(3, s, seed);
            auto p = desk_profile(8, 4, 1, 3);
            EXPECT_LE(r.transcript.order.size(), p.prot_len * p.q);
            for (std::uint32_t i = 1; i <= 3; ++i) {
                EXPECT_EQ(r.transcript.status[i - 1], SessionStatus::Completed);
                auto msgs = r.transcript.session(i);
                EXPECT_EQ(msgs.size(), p.prot_len);
                for (std::size_t k = 0; k < msgs.size(); ++k) EXPECT_EQ(msgs[k].round, k + 1);
                std::size_t seen = 0;
                for (auto &m : r.transcript.order) {
                    if (m.session != i) continue;
                    EXPECT_EQ(m, msgs[seen]);
                    ++seen;
                }
            }
        }
    }
}

TEST(transcript, serialization_lines) {
    TranscriptSet t;
    t.order.push_back({1, 2, 1, Direction::V, {0xab, 0x01}});
    t.order.push_back({1, 2, 2, Direction::P, {}});
    EXPECT_EQ(t.serialize(), "0 2 1 V ab01\n1 2 2 P -\n");
}
