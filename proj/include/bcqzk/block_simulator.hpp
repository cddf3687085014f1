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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bcqzk/bczk.hpp"
#include "bcqzk/core/parallel.hpp"
#include "bcqzk/core/stats.hpp"

namespace bcqzk {

struct SessionSimStats {
    std::uint64_t n_blocks_with_slot = 0;
    std::uint64_t rigged_matches = 0;
    std::uint64_t lucky_matches = 0;
    std::uint64_t total_matched = 0;
    std::uint64_t unchosen_slots = 0;  // resolved slots never picked by the simulator
    bool stage2_success = false;
};

struct BlockOutcome {
    std::uint64_t block = 0;
    std::optional<std::pair<std::uint32_t, std::uint64_t>> chosen;  // (session, 0-based slot); empty = dummy coin
    std::uint64_t attempts = 0;
    bool forced = false;
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct SimStats {
    std::vector<SessionSimStats> sessions;
    std::vector<std::uint64_t> rewind_attempts;  // per block, >= 1
    std::uint64_t decisions = 0;
    std::uint64_t rewinds = 0;
    std::uint64_t dummy_decisions = 0;
    std::uint64_t dummy_rewinds = 0;
    std::uint64_t forced_continues = 0;
    std::uint64_t aborts = 0;

    double rewind_frequency() const {
        return decisions ? static_cast<double>(rewinds) / static_cast<double>(decisions) : 0.0;
    }
    bool all_stage2_success() const {
        return std::all_of(sessions.begin(), sessions.end(), [](auto &s) { return s.stage2_success; });
    }

    static std::string csv_header(std::size_t q) {
        std::string h = "blocks,decisions,rewinds,dummy_decisions,dummy_rewinds,forced_continues,aborts";
        for (std::size_t i = 1; i <= q; ++i) {
            auto s = "s" + std::to_string(i) + "_";
            h += "," + s + "n_blocks_with_slot," + s + "rigged," + s + "lucky," + s + "total_matched," + s + "stage2_success";
        }
        return h;
    }

    std::string csv_row() const {
        std::ostringstream os;
        os << rewind_attempts.size() << ',' << decisions << ',' << rewinds << ',' << dummy_decisions << ',' << dummy_rewinds << ','
           << forced_continues << ',' << aborts;
        for (auto &s : sessions) {
            os << ',' << s.n_blocks_with_slot << ',' << s.rigged_matches << ',' << s.lucky_matches << ',' << s.total_matched << ','
               << (s.stage2_success ? 1 : 0);
        }
        return os.str();
    }
};

struct SimResult {
    TranscriptSet transcript;
    SimStats stats;
    std::vector<BlockOutcome> blocks;
    std::vector<ProverSecrets> secrets;  // simulator-internal, per session
};

namespace detail {

template <typename Base>
bool run_block(BczkWorld<Base> &world, Rng &prover_rng, std::vector<TranscriptMessage> &log, std::size_t target,
               std::uint64_t budget) {
    while (log.size() < target) {
        if (world.engine().steps() > budget) throw StallError("simulator step budget exceeded");
        if (world.advance(prover_rng, log) == BczkWorld<Base>::Advance::Done) return true;
    }
    return false;
}

}  // namespace detail

/// Block-rewinding simulator. The provers run without the base witness and
/// finish stage 2 from matched slot openings.
template <typename Base>
SimResult simulate(const BczkSetup<Base> &setup, const AdversarySpec &adv, std::uint64_t seed, std::uint64_t retry_cap = 40) {
    if (retry_cap < 1) throw ValidationError("retry_cap must be >= 1");
    const ProtocolParams &p = setup.params;
    BczkSetup<Base> blind = setup;
    blind.w.reset();
    auto world = make_world(blind, {Stage2Mode::MatchedOpenings, CommitStrategy::Random}, adv, seed);
    Rng prover_rng(derive_seed(seed, 2));
    Rng sim_rng(derive_seed(seed, 3));
    const std::uint64_t budget = step_budget(p) * (retry_cap + 1);

    SimResult res;
    auto &log = res.transcript.order;
    SimStats &st = res.stats;
    for (std::uint64_t k = 0; k < p.blocks; ++k) {
        const auto checkpoint = world;
        const std::size_t begin = log.size();
        const std::size_t target = k + 1 == p.blocks ? std::numeric_limits<std::size_t>::max() : (k + 1) * p.block_len;
        BlockOutcome out;
        out.block = k;
        for (;;) {
            ++out.attempts;
            detail::run_block(world, prover_rng, log, target, budget);
            auto slots = complete_slots(log, begin, log.size(), p);
            bool rewind;
            if (!slots.empty()) {
                auto pick = slots[sim_rng.uniform(slots.size())];
                out.chosen = pick;
                const auto &prover = world.engine().party(pick.first);
                rewind = prover.secrets_handle().slots[pick.second].bit != prover.statements()[pick.second].verifier_bit;
            } else {
                out.chosen.reset();
                rewind = sim_rng.bit() == 1;
                ++st.dummy_decisions;
                st.dummy_rewinds += rewind;
            }
            ++st.decisions;
            st.rewinds += rewind;
            if (!rewind) break;
            if (out.attempts == retry_cap) {
                out.forced = true;
                ++st.forced_continues;
                break;
            }
            world = checkpoint;
            log.resize(begin);
        }
        out.begin = begin;
        out.end = log.size();
        st.rewind_attempts.push_back(out.attempts);
        res.blocks.push_back(out);
    }

    // Whatever remains (nothing, unless the adversary outlived its blocks).
    detail::run_block(world, prover_rng, log, std::numeric_limits<std::size_t>::max(), budget);
    if (!res.blocks.empty()) res.blocks.back().end = log.size();

    res.transcript.q = static_cast<std::uint32_t>(p.q);
    res.transcript.seed = seed;
    res.transcript.status = world.engine().statuses();
    res.transcript.deviations = world.engine().deviations();

    st.sessions.resize(p.q);
    auto view = block_view(log, p);
    std::vector<std::vector<bool>> chosen(p.q, std::vector<bool>(p.slots, false));
    for (std::size_t k = 0; k < view.size(); ++k) {
        std::vector<bool> has(p.q, false);
        for (auto [s, j] : complete_slots(log, view[k].begin, view[k].end, p)) has[s - 1] = true;
        for (std::uint64_t i = 0; i < p.q; ++i) st.sessions[i].n_blocks_with_slot += has[i];
        const auto &b = res.blocks[k];
        if (b.chosen) chosen[b.chosen->first - 1][b.chosen->second] = true;
    }
    for (std::uint32_t i = 1; i <= p.q; ++i) {
        auto &ss = st.sessions[i - 1];
        const auto &prover = world.engine().party(i);
        for (std::uint64_t j = 0; j < prover.resolved_slots(); ++j) {
            bool m = prover.secrets_handle().slots[j].bit == prover.statements()[j].verifier_bit;
            if (chosen[i - 1][j]) {
                ss.rigged_matches += m;
            } else {
                ss.lucky_matches += m;
                ++ss.unchosen_slots;
            }
        }
        ss.total_matched = ss.rigged_matches + ss.lucky_matches;
        ss.stage2_success = world.driver().accepted(i);
        res.secrets.push_back(prover.secrets_handle());
        if (world.engine().status(i) != SessionStatus::Completed) ++st.aborts;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Monte-Carlo summaries.

struct RewindProfileEntry {
    std::string strategy;
    std::uint64_t blocks = 0;
    std::uint64_t decisions = 0;
    std::uint64_t rewinds = 0;
    std::uint64_t forced_continues = 0;

    double frequency() const {
        return decisions ? static_cast<double>(rewinds) / static_cast<double>(decisions) : 0.0;
    }
    double ci95() const {
        return 1.96 * binomial_se(frequency(), decisions);
    }
};

struct RewindProfile {
    std::vector<RewindProfileEntry> entries;

    double max_pairwise_deviation() const {
        double m = 0;
        for (auto &a : entries)
            for (auto &b : entries) m = std::max(m, std::abs(a.frequency() - b.frequency()));
        return m;
    }
    double max_deviation_from_half() const {
        double m = 0;
        for (auto &a : entries) m = std::max(m, std::abs(a.frequency() - 0.5));
        return m;
    }
};

/// Runs simulations of each strategy until at least `min_blocks` blocks have
/// been resolved, then reports the per-decision rewind frequency.
inline RewindProfile rewind_probability_profile(const std::vector<AdversarySpec> &suite, const ProtocolParams &p,
                                                std::uint64_t min_blocks, std::uint64_t seed, unsigned workers = 1) {
    RewindProfile prof;
    const std::uint64_t trials = (min_blocks + p.blocks - 1) / p.blocks;
    for (std::size_t a = 0; a < suite.size(); ++a) {
        auto runs = parallel_trials(trials, workers, [&](std::uint64_t i) {
            auto s = derive_seed(derive_seed(seed, a), i);
            return simulate(planted_setup(p, s), suite[a], s).stats;
        });
        RewindProfileEntry e;
        e.strategy = suite[a].name();
        for (auto &r : runs) {
            e.blocks += r.rewind_attempts.size();
            e.decisions += r.decisions;
            e.rewinds += r.rewinds;
            e.forced_continues += r.forced_continues;
        }
        prof.entries.push_back(e);
    }
    return prof;
}

struct ClaimSummary {
    struct PerSession {
        double mean_n_blocks = 0, mean_rigged = 0, mean_lucky = 0;
        std::uint64_t min_n_blocks = 0, min_rigged = 0, min_lucky = 0;
        std::uint64_t lucky_total = 0, unchosen_total = 0;

        double lucky_rate() const {
            return unchosen_total ? static_cast<double>(lucky_total) / static_cast<double>(unchosen_total) : 0.0;
        }
    };
    std::uint64_t trials = 0;
    std::vector<PerSession> sessions;
    double stage2_success_rate = 0;
    std::uint64_t forced_continues = 0;
};

inline ClaimSummary claim_stats(const ProtocolParams &p, const AdversarySpec &adv, std::uint64_t trials, std::uint64_t seed,
                                unsigned workers = 1) {
    auto runs = parallel_trials(trials, workers, [&](std::uint64_t i) {
        auto s = derive_seed(seed, i);
        return simulate(planted_setup(p, s), adv, s).stats;
    });
    ClaimSummary out;
    out.trials = trials;
    out.sessions.resize(p.q);
    for (auto &ps : out.sessions) ps.min_n_blocks = ps.min_rigged = ps.min_lucky = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t success = 0;
    for (auto &r : runs) {
        success += r.all_stage2_success();
        out.forced_continues += r.forced_continues;
        for (std::size_t i = 0; i < p.q; ++i) {
            auto &ps = out.sessions[i];
            const auto &ss = r.sessions[i];
            ps.mean_n_blocks += static_cast<double>(ss.n_blocks_with_slot);
            ps.mean_rigged += static_cast<double>(ss.rigged_matches);
            ps.mean_lucky += static_cast<double>(ss.lucky_matches);
            ps.min_n_blocks = std::min(ps.min_n_blocks, ss.n_blocks_with_slot);
            ps.min_rigged = std::min(ps.min_rigged, ss.rigged_matches);
            ps.min_lucky = std::min(ps.min_lucky, ss.lucky_matches);
            ps.lucky_total += ss.lucky_matches;
            ps.unchosen_total += ss.unchosen_slots;
        }
    }
    const double t = static_cast<double>(std::max<std::uint64_t>(trials, 1));
    for (auto &ps : out.sessions) {
        ps.mean_n_blocks /= t;
        ps.mean_rigged /= t;
        ps.mean_lucky /= t;
    }
    out.stage2_success_rate = static_cast<double>(success) / t;
    return out;
}

}  // namespace bcqzk
