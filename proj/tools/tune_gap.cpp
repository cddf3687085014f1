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

// Brute-force Monte Carlo over the gap of a Desk profile. For each gap the
// block simulator runs `trials` times against HonestLike; the chosen gap is
// the largest whose Wilson lower bound on stage-2 success clears --target.

#include <cmath>
#include <cstdio>
#include <thread>

#include "CLI11.hpp"
#include "bcqzk/block_simulator.hpp"

using namespace bcqzk;

int main(int argc, char **argv) {
    CLI::App app{"Pick the Desk-profile gap by simulator Monte Carlo"};
    std::uint64_t slots = 64, blocks = 32, q = 1, trials = 2000, seed = 1;
    double target = 0.98;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--slots", slots);
    app.add_option("--blocks", blocks);
    app.add_option("--q", q);
    app.add_option("--trials", trials);
    app.add_option("--seed", seed);
    app.add_option("--target", target, "required Wilson lower bound on stage-2 success");
    app.add_option("--workers", workers);
    CLI11_PARSE(app, argc, argv);

    std::printf("| gap | threshold | success | wilson_lo | forced |\n|---|---|---|---|---|\n");
    std::uint64_t best = 0;
    for (std::uint64_t gap = 1; 2 * gap < slots; ++gap) {
        ProtocolParams p;
        try {
            p = desk_profile(slots, blocks, gap, q);
        } catch (const ValidationError &e) {
            std::fprintf(stderr, "%s\n", e.what());
            return 2;
        }
        auto cs = claim_stats(p, AdversarySpec::honest_like(), trials, derive_seed(seed, gap), workers);
        double ph = cs.stage2_success_rate, n = static_cast<double>(trials), z = 1.96;
        double lo = (ph + z * z / (2 * n) - z * std::sqrt(ph * (1 - ph) / n + z * z / (4 * n * n))) / (1 + z * z / n);
        std::printf("| %llu | %llu | %.4f | %.4f | %llu |\n", static_cast<unsigned long long>(gap),
                    static_cast<unsigned long long>(p.threshold), ph, lo, static_cast<unsigned long long>(cs.forced_continues));
        if (lo >= target) {
            best = gap;
        } else {
            break;
        }
    }
    std::printf("\nselected gap: %llu\n", static_cast<unsigned long long>(best));
    return best ? 0 : 1;
}
