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

#include "bcqzk/pok.hpp"

#include "gtest/gtest.h"

using namespace bcqzk;

namespace {

PokConfig small() {
    return PokConfig{4, 3, 40};
}

}  // namespace

TEST(pok_run, honest_accepts_and_corruptions_reject) {
    for (std::uint64_t t = 0; t < 20; ++t) {
        EXPECT_TRUE(pok_run(small(), PokProverStrategy::honest(), t).accept());
        EXPECT_FALSE(pok_run(small(), PokProverStrategy::share_corruptor(1), t).accept());
        EXPECT_FALSE(pok_run(small(), PokProverStrategy::zero_witness(), t).accept());
    }
}

TEST(pok_run, honest_verifier_gets_position_zero) {
    auto r = pok_run(small(), PokProverStrategy::honest(), 3);
    const auto &v = r.world.driver().session(1);
    const auto &wg = r.world.engine().party(1).witness_grid();
    std::size_t k = 0;
    for (std::size_t i = 0; i < wg.size(); ++i) {
        for (std::size_t j = 0; j < wg[i].size(); ++j, ++k) {
            std::uint8_t want = v.grid[i][j].location ? wg[i][j].mask : wg[i][j].share;
            EXPECT_EQ(v.received[k], want);
        }
    }
    EXPECT_EQ(r.transcript.order.size(), small().prot_len());
}

TEST(extract, honest_recovers_exact_witness) {
    for (std::uint64_t t = 0; t < 1000; ++t) {
        auto ex = extract(small(), PokProverStrategy::honest(), t);
        auto &rec = ex.sessions[0];
        ASSERT_TRUE(rec.success()) << t;
        EXPECT_EQ(*rec.witness, pok_setup(small(), PokProverStrategy::honest(), 1, t).statements[0]->w);
        for (auto &c : rec.cells) EXPECT_TRUE(c.matched);
        // No recording: only the kept pass remains.
        EXPECT_EQ(ex.transcript.order.size(), small().prot_len());
    }
}

TEST(extract, shares_match_prover_grid) {
    auto ex = extract(small(), PokProverStrategy::honest(), 8);
    const auto &wg = ex.world.engine().party(1).witness_grid();
    const auto &rec = ex.sessions[0];
    for (std::size_t k = 0; k < rec.cells.size(); ++k) {
        EXPECT_EQ(rec.cells[k].share, wg[k / 3][k % 3].share);
        EXPECT_EQ(rec.cells[k].beta, ex.world.driver().session(1).grid[k / 3][k % 3].location);
    }
}

TEST(extract, false_statement_gives_bottom) {
    for (std::uint64_t t = 0; t < 50; ++t) {
        auto a = extract(small(), PokProverStrategy::zero_witness(), t).sessions[0];
        EXPECT_FALSE(a.accepted);
        EXPECT_FALSE(a.success());
        auto b = extract(small(), PokProverStrategy::share_corruptor(1), t).sessions[0];
        EXPECT_FALSE(b.success());
        // The corrupted row reconstructs to the wrong bit.
        EXPECT_NE(b.reconstructed(), pok_setup(small(), PokProverStrategy::honest(), 1, t).statements[0]->w);
    }
}

TEST(extract, bit_leaker_exhausts_retries) {
    PokConfig c = small();
    c.retry_cap = 5;
    auto rec = extract(c, PokProverStrategy::bit_leaker(), 1).sessions[0];
    EXPECT_EQ(rec.forced_continues, c.cells());
    EXPECT_FALSE(rec.success());
    for (auto &cell : rec.cells) EXPECT_EQ(cell.attempts, 5u);
}

TEST(extractability, gap_and_geometric_attempts) {
    for (auto s : {PokProverStrategy::honest(), PokProverStrategy::aborter(0.3), PokProverStrategy::share_corruptor(1)}) {
        auto r = extractability(small(), s, 1500, 17);
        EXPECT_LE(r.gap(), 0.02) << r.prover;
        EXPECT_EQ(r.exact_witness, r.extracted) << r.prover;
        EXPECT_EQ(r.forced_continues, 0u);
        EXPECT_GT(r.attempts_fit().p_value, 0.01) << r.prover;
    }
    auto ab = extractability(small(), PokProverStrategy::aborter(0.3), 1500, 18);
    EXPECT_NEAR(ab.acceptance_rate(), 0.7, 0.04);
}

TEST(extractability, bit_leaker_breaks_geometric_law) {
    PokConfig c = small();
    c.retry_cap = 10;
    auto r = extractability(c, PokProverStrategy::bit_leaker(), 50, 2);
    EXPECT_LT(r.attempts_fit().p_value, 0.01);
    EXPECT_EQ(r.extracted, 0u);
}

TEST(simulatability, deterministic_prover_is_exact) {
    auto r = simulatability_check(small(), PokProverStrategy::deterministic_honest(), 200, 1);
    EXPECT_EQ(r.tv, 0.0);
}

TEST(simulatability, randomized_and_recording_provers) {
    for (auto s : {PokProverStrategy::honest(), PokProverStrategy::beta_recorder()}) {
        auto r = simulatability_check(small(), s, 3000, 2);
        EXPECT_LE(r.tv, 2.5 * r.null_scale) << s.name();
    }
}

TEST(concurrent, threshold_adjustment_and_extraction) {
    auto p = desk_profile(32, 16, 4, 2);
    for (auto sched : {Scheduler::round_robin(), Scheduler::block_staggered(3), Scheduler::random_interleave()}) {
        auto r = pok_concurrent_harness(p, small(), PokProverStrategy::honest(), sched, 100, 4);
        EXPECT_EQ(r.adjusted.threshold, p.threshold - 2);
        EXPECT_EQ(r.extracted[0], 100u);
        EXPECT_EQ(r.extracted[1], 100u);
        EXPECT_EQ(r.accepted[0], 100u);
        EXPECT_EQ(r.length_mismatches, 0u);
    }
    auto ab = pok_concurrent_harness(p, small(), PokProverStrategy::aborter(0.3), Scheduler::random_interleave(), 400, 5);
    for (std::uint32_t s = 1; s <= 2; ++s) EXPECT_LE(std::abs(ab.extraction_rate(s) - ab.acceptance_rate(s)), 0.02);
}

TEST(pok, parse_and_record) {
    EXPECT_EQ(parse_pok_prover("Aborter(0.3)").name(), "Aborter(0.3)");
    EXPECT_EQ(parse_pok_prover("ShareCorruptor(2)").corrupt, 2u);
    EXPECT_THROW(parse_pok_prover("Nope"), ValidationError);
    EXPECT_THROW(PokProverStrategy::aborter(1.5), ValidationError);
    auto rec = extract(small(), PokProverStrategy::honest(), 1).sessions[0].to_record();
    EXPECT_EQ(rec.at("matched"), std::string(12, '1'));
    EXPECT_EQ(rec.at("accepted"), "1");
}
