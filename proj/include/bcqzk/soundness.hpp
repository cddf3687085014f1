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

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "bcqzk/bczk.hpp"
#include "bcqzk/core/parallel.hpp"
#include "bcqzk/core/stats.hpp"
#include "bcqzk/params.hpp"

namespace bcqzk {

constexpr std::uint64_t kDirectTailLimit = 10'000'000;

struct LogTail {
    long double log_value = 0;
    bool approximate = false;
};

namespace detail {

inline long double log_rational(const Rational &r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    auto lg = [](BigInt v) {
        // log of an arbitrary-size integer: shift into long double range.
        std::size_t shift = 0;
        if (boost::multiprecision::msb(v) > 60) {
            shift = boost::multiprecision::msb(v) - 60;
            v >>= shift;
        }
        return std::log(static_cast<long double>(v)) + static_cast<long double>(shift) * std::log(2.0L);
    };
    return lg(numerator(r)) - lg(denominator(r));
}

inline long double log_choose(std::uint64_t n, std::uint64_t i) {
    return std::lgammal(static_cast<long double>(n) + 1) - std::lgammal(static_cast<long double>(i) + 1) -
           std::lgammal(static_cast<long double>(n - i) + 1);
}

}  // namespace detail

/// log P[Bin(n, p) >= k], summed in the log domain around the largest term.
/// Beyond kDirectTailLimit trials the sum stops once terms fall 10^-30
/// below the running maximum and the result is flagged approximate.
inline LogTail binom_tail_exact(std::uint64_t n, const Rational &p, std::uint64_t k) {
    if (p < 0 || p > 1) throw ValidationError("binomial probability outside [0,1]");
    if (k > n + 1) throw ValidationError("tail index beyond n+1");
    const long double ninf = -std::numeric_limits<long double>::infinity();
    if (k == 0) return {0.0L, false};
    if (k == n + 1) return {ninf, false};
    if (p == 0) return {ninf, false};
    if (p == 1) return {0.0L, false};
    const long double lp = detail::log_rational(p), lq = detail::log_rational(1 - p);
    auto term = [&](std::uint64_t i) {
        return detail::log_choose(n, i) + static_cast<long double>(i) * lp + static_cast<long double>(n - i) * lq;
    };
    // Terms are unimodal with mode near n*p; start the sum at the peak of
    // the summed range.
    const long double mode_d = std::floor(static_cast<long double>(n + 1) * std::exp(lp));
    const std::uint64_t mode = std::min<std::uint64_t>(n, static_cast<std::uint64_t>(mode_d));
    const std::uint64_t peak = std::max(k, mode);
    const long double top = term(peak);
    const bool approx = n > kDirectTailLimit;
    const long double cutoff = std::log(1e-30L);
    long double acc = 0;
    for (std::uint64_t i = peak; i <= n; ++i) {
        long double d = term(i) - top;
        if (approx && d < cutoff) break;
        acc += std::exp(d);
    }
    for (std::uint64_t i = peak; i-- > k;) {
        long double d = term(i) - top;
        if (approx && d < cutoff) break;
        acc += std::exp(d);
    }
    return {top + std::log(acc), approx};
}

struct TailResult {
    std::uint64_t q = 0, lambda = 0;
    std::uint64_t n = 0, k = 0;
    std::string p = "1/2";
    long double log_exact_tail = 0;
    long double log_chernoff = 0;
    bool satisfied = false;
    bool approximate = false;

    static std::string csv_header() {
        return "q,lambda,n,k,p,log_exact_tail,log_chernoff,satisfied,approximate";
    }
    std::string csv_row() const {
        std::ostringstream os;
        os << q << ',' << lambda << ',' << n << ',' << k << ',' << p << ',' << std::setprecision(18) << log_exact_tail << ','
           << log_chernoff << ',' << (satisfied ? 1 : 0) << ',' << (approximate ? 1 : 0);
        return os.str();
    }
};

constexpr long double kLogSlack = 1e-12L;

/// Tail of Bin(120 q^7 lambda, 1/2) at the acceptance threshold against
/// exp(-q lambda / 180).
inline std::vector<TailResult> verify_soundness_inequality(const std::vector<std::pair<std::uint64_t, std::uint64_t>> &grid) {
    std::vector<TailResult> out;
    for (auto [q, lambda] : grid) {
        auto p = derive_params(q, lambda);
        TailResult r;
        r.q = q;
        r.lambda = lambda;
        r.n = p.slots;
        r.k = p.threshold;
        auto t = binom_tail_exact(r.n, Rational(1, 2), r.k);
        r.log_exact_tail = t.log_value;
        r.approximate = t.approximate;
        r.log_chernoff = -static_cast<long double>(q) * static_cast<long double>(lambda) / 180.0L;
        r.satisfied = r.log_exact_tail < r.log_chernoff + kLogSlack;
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cheating provers against a false statement.

enum class CheatStrategy { UniformGuess, AllZeros, AdaptiveOnTranscript };

inline const char *cheat_name(CheatStrategy s) {
    switch (s) {
        case CheatStrategy::UniformGuess: return "UniformGuess";
        case CheatStrategy::AllZeros: return "AllZeros";
        case CheatStrategy::AdaptiveOnTranscript: return "AdaptiveOnTranscript";
    }
    return "?";
}

inline CheatStrategy parse_cheat(const std::string &s) {
    for (auto c : {CheatStrategy::UniformGuess, CheatStrategy::AllZeros, CheatStrategy::AdaptiveOnTranscript}) {
        if (s == cheat_name(c)) return c;
    }
    throw ValidationError("unknown cheating strategy: " + s);
}

struct CheatResult {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;

    double rate() const {
        return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    }
    double ci_half() const {
        return binomial_se(rate(), trials);
    }
};

/// One engine run with a false instance; true when the verifier accepts.
inline bool cheating_trial(const ProtocolParams &p, CheatStrategy s, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0xc4));
    BczkSetup<SubsetSum> setup{p, std::make_shared<IdealBackend>(),
                               std::make_shared<const SubsetSumInstance>(unsatisfiable_subset_sum(16, rng)), std::nullopt};
    CommitStrategy c = s == CheatStrategy::AllZeros               ? CommitStrategy::AllZeros
                       : s == CheatStrategy::AdaptiveOnTranscript ? CommitStrategy::AdaptiveOnTranscript
                                                                  : CommitStrategy::Random;
    auto run = run_protocol(setup, {Stage2Mode::MatchedOpenings, c}, AdversarySpec::honest_like(), seed);
    bool all = true;
    for (std::uint32_t i = 1; i <= p.q; ++i) all = all && run.accepted(i);
    return all;
}

inline CheatResult cheating_prover_mc(const ProtocolParams &p, CheatStrategy s, std::uint64_t trials, std::uint64_t seed,
                                      unsigned workers = 1) {
    auto wins = parallel_trials(trials, workers, [&](std::uint64_t i) { return cheating_trial(p, s, derive_seed(seed, i)) ? 1 : 0; });
    CheatResult r;
    r.trials = trials;
    for (int w : wins) r.successes += static_cast<std::uint64_t>(w);
    return r;
}

}  // namespace bcqzk
