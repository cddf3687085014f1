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

#include <cstdint>
#include <vector>

#include "bcqzk/core/bitstring.hpp"

namespace bcqzk {

/// Subset sum as the underlying NP relation: weights and a target, witness
/// a selection bit per weight.
struct SubsetSumInstance {
    std::vector<std::uint64_t> weights;
    std::uint64_t target = 0;

    std::size_t witness_bits() const {
        return weights.size();
    }
    bool operator==(const SubsetSumInstance &) const = default;
};

struct SubsetSum {
    using Instance = SubsetSumInstance;
    using Witness = BitString;

    static bool holds(const Instance &x, const Witness &w) {
        if (w.size() != x.weights.size()) return false;
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i]) sum += x.weights[i];
        }
        return sum == x.target;
    }

    static void encode(FieldWriter &f, const Instance &x) {
        f.u64(x.weights.size());
        for (auto v : x.weights) f.u64(v);
        f.u64(x.target);
    }
};

struct SubsetSumPair {
    SubsetSumInstance x;
    BitString w;
};

/// Random instance with a planted witness. Weights stay below 2^40 so sums
/// never wrap.
inline SubsetSumPair planted_subset_sum(std::size_t bits, Rng &rng) {
    SubsetSumPair p;
    p.w = BitString::random(bits, rng);
    for (std::size_t i = 0; i < bits; ++i) {
        p.x.weights.push_back(1 + rng.uniform(1ull << 40));
        if (p.w[i]) p.x.target += p.x.weights.back();
    }
    return p;
}

/// Instance outside the relation: the target exceeds the sum of all weights.
inline SubsetSumInstance unsatisfiable_subset_sum(std::size_t bits, Rng &rng) {
    SubsetSumInstance x;
    for (std::size_t i = 0; i < bits; ++i) {
        x.weights.push_back(1 + rng.uniform(1ull << 40));
        x.target += x.weights.back();
    }
    x.target += 1;
    return x;
}

}  // namespace bcqzk
