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

// Witness search with a duplicating oracle on a 3-bit instance with one
// witness. Prints one trace next to the closed form, then a success rate.

#include <cstdio>

#include "bcqzk/quantum/cloning.hpp"

using namespace bcqzk;
using namespace bcqzk::quantum;

int main() {
    const std::size_t n = 3;
    const auto x = instance_with_witnesses(n, {5});
    const auto c = truth_table_oracle(x, n);
    Rng rng(3);
    auto tr = cloning_attack(c, x, n, rng, 64);
    std::printf("eps = %.4f, delta_0 = %.4f\n", tr.epsilon, tr.delta0);
    std::printf(" i   alpha     delta     closed form\n");
    for (std::size_t i = 0; i < tr.iterations.size(); ++i) {
        auto &it = tr.iterations[i];
        std::printf("%2zu   %.6f  %.6f  %.6f\n", i + 1, it.alpha, it.delta, closed_form_delta(tr.epsilon, i + 1).delta);
    }
    std::printf("outcome %s", AttackTrace::name(tr.outcome));
    if (tr.y) std::printf(", y = %llu", static_cast<unsigned long long>(*tr.y));
    std::printf("\n");

    std::uint64_t ok = 0;
    const std::uint64_t runs = 5000;
    for (std::uint64_t i = 0; i < runs; ++i) {
        Rng r(derive_seed(9, i));
        ok += cloning_attack(c, x, n, r).success();
    }
    std::printf("success %.4f over %llu runs (exact delta_3 = %s)\n", static_cast<double>(ok) / runs,
                static_cast<unsigned long long>(runs), rational_str(closed_form_delta_exact(Rational(1, 8), n).delta).c_str());
}
