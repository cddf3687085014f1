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

// One receiver-private transfer per choice bit, then the exact distance
// between the sender's views for the two choices.

#include <cstdio>

#include "bcqzk/ot.hpp"

using namespace bcqzk;

int main() {
    const std::uint8_t m0 = 0, m1 = 1;
    Rng rng(2026);
    for (std::uint8_t beta = 0; beta < 2; ++beta) {
        auto out = srot_run(m0, m1, beta, 8, rng);
        if (!out.output) {
            std::printf("beta=%d: sender aborted\n", beta);
            continue;
        }
        std::printf("beta=%d: received %d (m0=%d, m1=%d)\n", beta, *out.output, m0, m1);
    }
    for (std::size_t lambda : {2, 3}) {
        auto tv = receiver_privacy_tv_exact(lambda);
        std::printf("lambda=%zu: view distance %s\n", lambda, rational_str(tv).c_str());
    }
    auto est = receiver_privacy_tv_sampled(8, 20000, 11);
    std::printf("lambda=8: sampled view distance %.4f over %llu runs per bit\n", est.tv, static_cast<unsigned long long>(est.trials));
}
