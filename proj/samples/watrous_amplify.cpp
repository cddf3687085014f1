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

// Amplifies a random circuit whose success probability sits near 1/2 and
// writes the circuit in the text gate format.

#include <cstdio>
#include <fstream>

#include "bcqzk/quantum/watrous.hpp"

using namespace bcqzk;
using namespace bcqzk::quantum;

int main(int argc, char **argv) {
    const double eps = std::ldexp(1.0, -20);
    Rng rng(61);
    auto sc = random_suite_circuit(3, 3, eps, rng);
    auto amp = watrous_amplify(sc.q, sc.n, 0.49, eps);
    std::printf("circuit: %zu input + %zu ancilla qubits, %zu gates\n", sc.n, sc.k, sc.q.gates().size());
    std::printf("rounds %zu, fidelity bound %.6f\n", amp.rounds(), amp.bound());
    for (int j = 0; j < 3; ++j) {
        auto psi = StateVector::random(sc.n, rng);
        auto r = amp.run(psi);
        auto s = amp.sample(psi, rng);
        std::printf("state %d: p = %.6f, fidelity %.12f, sampled run %s after %zu rounds\n", j, r.initial_success, r.fidelity,
                    s.success ? "succeeded" : "failed", s.rounds);
    }
    if (argc > 1) {
        std::ofstream(argv[1]) << sc.q.to_text();
        std::printf("wrote %s\n", argv[1]);
    }
}
