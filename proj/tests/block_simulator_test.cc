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

#include "bcqzk/block_simulator.hpp"

#include <cmath>
#include <map>

#include "gtest/gtest.h"

using namespace bcqzk;

namespace {

SimResult sim(const ProtocolParams &p, const AdversarySpec &adv, std::uint64_t seed, std::uint64_t cap = 40) {
    return simulate(planted_setup(p, seed), adv, seed, cap);
}

std::size_t block_index(std::size_t pos, const ProtocolParams &p) {
    return std::min<std::size_t>(pos / p.block_len, p.blocks - 1);
}

}  // namespace

TEST(simulate, retries_are_geometric_half) {
    auto p = desk_profile(64, 32, 2, 1);
    std::map<std::uint64_t, double> hist;
    double sum = 0, blocks = 0;
    for (std::uint64_t t = 0; blocks < 10000; ++t) {
        for (auto a : sim(p, AdversarySpec::honest_like(), t).stats.rewind_attempts) {
            hist[a] += 1;
            sum += static_cast<double>(a);
            blocks += 1;
        }
    }
    double mean = sum / blocks;
    EXPECT_GE(mean, 1.9);
    EXPECT_LE(mean, 2.1);
    // Geometric(1/2) oracle, tail lumped from 8 on.
    std::vector<double> obs, probs;
    double tail_obs = blocks;
    for (std::uint64_t k = 1; k < 8; ++k) {
        obs.push_back(hist[k]);
        probs.push_back(std::ldexp(1.0, -static_cast<int>(k)));
        tail_obs -= hist[k];
    }
    obs.push_back(tail_obs);
    probs.push_back(std::ldexp(1.0, -7));
    EXPECT_GT(chi_square_gof(obs, probs).p_value, 0.001);
}

TEST(simulate, slotless_adversary_uses_dummy_coins) {
    auto p = desk_profile(64, 32, 2, 2);
    std::uint64_t decisions = 0, rewinds = 0;
    for (std::uint64_t t = 0; decisions < 10000; ++t) {
        auto r = sim(p, AdversarySpec::all_na(), t);
        EXPECT_EQ(r.stats.dummy_decisions, r.stats.decisions);
        for (auto &b : r.blocks) EXPECT_FALSE(b.chosen.has_value());
        decisions += r.stats.decisions;
        rewinds += r.stats.rewinds;
    }
    double f = static_cast<double>(rewinds) / static_cast<double>(decisions);
    EXPECT_GE(f, 0.48);
    EXPECT_LE(f, 0.52);
}

TEST(simulate, example_profile_stage2_success) {
    auto p = desk_profile(64, 16, 2, 1);
    int ok = 0, forced = 0;
    for (std::uint64_t t = 0; t < 500; ++t) {
        auto r = sim(p, AdversarySpec::honest_like(), 1000 + t);
        ok += r.stats.all_stage2_success();
        forced += static_cast<int>(r.stats.forced_continues);
    }
    EXPECT_GE(ok, 475);
    EXPECT_EQ(forced, 0);
}

TEST(simulate, no_recording_and_single_pass_length) {
    auto p = desk_profile(32, 16, 2, 2);
    auto suite = adversary_library();
    suite.push_back(AdversarySpec::all_na());
    for (auto &adv : suite) {
        for (std::uint64_t t = 0; t < 10; ++t) {
            auto r = sim(p, adv, t);
            std::size_t sum = 0;
            for (std::size_t k = 0; k < r.blocks.size(); ++k) {
                EXPECT_EQ(r.blocks[k].begin, sum);
                sum += r.blocks[k].end - r.blocks[k].begin;
            }
            EXPECT_EQ(r.transcript.order.size(), sum) << adv.name();
            auto plain = run_protocol(planted_setup(p, t), {}, adv, t);
            EXPECT_EQ(r.transcript.order.size(), plain.transcript.order.size()) << adv.name();
        }
    }
}

TEST(simulate, chosen_slots_end_matched) {
    auto p = desk_profile(64, 32, 2, 2);
    for (std::uint64_t t = 0; t < 20; ++t) {
        auto r = sim(p, AdversarySpec::slot_staggerer(), t);
        for (auto &b : r.blocks) {
            if (!b.chosen || b.forced) continue;
            auto [s, j] = *b.chosen;
            auto recs = slot_records(r.transcript.order, s, r.secrets[s - 1], p);
            EXPECT_TRUE(recs.at(j).matched());
            EXPECT_EQ(block_index(static_cast<std::size_t>(recs[j].positions[1]), p), b.block);
            EXPECT_EQ(block_index(static_cast<std::size_t>(recs[j].positions[2]), p), b.block);
        }
    }
}

TEST(simulate, coverage_recount_agrees) {
    auto p = desk_profile(64, 32, 2, 2);
    for (std::uint64_t t = 0; t < 10; ++t) {
        auto r = sim(p, AdversarySpec::honest_like(), t);
        // Direct recount from positions in the final transcript.
        for (std::uint32_t i = 1; i <= 2; ++i) {
            std::vector<bool> has(p.blocks, false);
            std::uint64_t matched = 0;
            for (auto &rec : slot_records(r.transcript.order, i, r.secrets[i - 1], p)) {
                auto bc = block_index(static_cast<std::size_t>(rec.positions[1]), p);
                if (bc == block_index(static_cast<std::size_t>(rec.positions[2]), p)) has[bc] = true;
                matched += rec.matched();
            }
            auto n = static_cast<std::uint64_t>(std::count(has.begin(), has.end(), true));
            EXPECT_EQ(r.stats.sessions[i - 1].n_blocks_with_slot, n);
            EXPECT_EQ(r.stats.sessions[i - 1].total_matched, matched);
            EXPECT_EQ(r.stats.sessions[i - 1].rigged_matches + r.stats.sessions[i - 1].lucky_matches, matched);
        }
    }
}

TEST(simulate, retry_cap_forces_continue) {
    auto p = desk_profile(64, 32, 2, 1);
    auto r = sim(p, AdversarySpec::honest_like(), 5, 1);
    EXPECT_EQ(r.stats.forced_continues, r.stats.rewinds);
    for (auto a : r.stats.rewind_attempts) EXPECT_EQ(a, 1u);
    EXPECT_GT(r.stats.forced_continues, 0u);
    EXPECT_THROW(sim(p, AdversarySpec::honest_like(), 5, 0), ValidationError);
}

TEST(simulate, determinism) {
    auto p = desk_profile(32, 16, 2, 2);
    auto a = sim(p, AdversarySpec::state_dependent(), 77);
    auto b = sim(p, AdversarySpec::state_dependent(), 77);
    EXPECT_EQ(a.transcript, b.transcript);
    EXPECT_EQ(a.stats.csv_row(), b.stats.csv_row());
}

TEST(simulate, csv_shape) {
    auto p = desk_profile(32, 16, 2, 2);
    auto r = sim(p, AdversarySpec::honest_like(), 1);
    auto cols = [](const std::string &s) { return std::count(s.begin(), s.end(), ',') + 1; };
    EXPECT_EQ(cols(SimStats::csv_header(2)), cols(r.stats.csv_row()));
    EXPECT_EQ(cols(SimStats::csv_header(2)), 17);
}

TEST(rewind_profile, aborter_one_is_fair_coin) {
    auto p = desk_profile(32, 16, 2, 2);
    auto prof = rewind_probability_profile({AdversarySpec::aborter(1.0)}, p, 10000, 3);
    EXPECT_GE(prof.entries[0].blocks, 10000u);
    EXPECT_GE(prof.entries[0].frequency(), 0.48);
    EXPECT_LE(prof.entries[0].frequency(), 0.52);
}

TEST(rewind_profile, seeds_agree_within_ci) {
    auto p = desk_profile(32, 16, 2, 2);
    auto a = rewind_probability_profile({AdversarySpec::honest_like()}, p, 4000, 1).entries[0];
    auto b = rewind_probability_profile({AdversarySpec::honest_like()}, p, 4000, 2).entries[0];
    EXPECT_LE(std::abs(a.frequency() - b.frequency()), 2 * (a.ci95() + b.ci95()));
}

TEST(claim_stats, rigging_and_luck) {
    auto p = desk_profile(64, 32, 2, 2);
    auto cs = claim_stats(p, AdversarySpec::honest_like(), 100, 9);
    for (auto &s : cs.sessions) {
        // Every block holds a complete slot of some session, and the chosen
        // one belongs to a given session with probability about 1/Q.
        double ci = 3 * std::sqrt(p.blocks * 0.25 / 100.0);
        EXPECT_GE(s.mean_rigged, static_cast<double>(p.blocks) / (2.0 * p.q) - ci);
        EXPECT_GE(s.lucky_rate(), 0.47);
        EXPECT_LE(s.lucky_rate(), 0.53);
    }
    EXPECT_EQ(cs.forced_continues, 0u);
}
