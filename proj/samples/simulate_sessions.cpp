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

// Runs the block-rewinding simulator against two verifier strategies and
// compares the kept transcript with a plain single-pass execution.

#include <cstdio>

#include "bcqzk/bczk.hpp"
#include "bcqzk/block_simulator.hpp"

using namespace bcqzk;

int main() {
    const auto p = desk_profile(64, 64, 7, 2, 2);
    std::printf("profile: slots=%llu blocks=%llu threshold=%llu\n", static_cast<unsigned long long>(p.slots),
                static_cast<unsigned long long>(p.blocks), static_cast<unsigned long long>(p.threshold));
    for (auto adv : {AdversarySpec::honest_like(), AdversarySpec::slot_staggerer()}) {
        const std::uint64_t seed = 7;
        auto setup = planted_setup(p, seed);
        auto sim = simulate(setup, adv, seed);
        auto plain = run_protocol(setup, {}, adv, seed);
        std::printf("\n%s\n", adv.name().c_str());
        std::printf("  rewinds %llu of %llu decisions, forced continues %llu\n", static_cast<unsigned long long>(sim.stats.rewinds),
                    static_cast<unsigned long long>(sim.stats.decisions),
                    static_cast<unsigned long long>(sim.stats.forced_continues));
        for (std::size_t i = 0; i < sim.stats.sessions.size(); ++i) {
            auto &s = sim.stats.sessions[i];
            std::printf("  session %zu: rigged %llu, lucky %llu, matched %llu, stage 2 %s\n", i + 1,
                        static_cast<unsigned long long>(s.rigged_matches), static_cast<unsigned long long>(s.lucky_matches),
                        static_cast<unsigned long long>(s.total_matched), s.stage2_success ? "ok" : "failed");
        }
        std::printf("  transcript: %zu messages kept, single pass %zu\n", sim.transcript.order.size(),
                    plain.transcript.order.size());
    }
}
