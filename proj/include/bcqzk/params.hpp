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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bcqzk/core/errors.hpp"

namespace bcqzk {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Profile { Paper, Desk };

inline const char *profile_name(Profile p) {
    return p == Profile::Paper ? "paper" : "desk";
}

struct ProtocolParams {
    std::uint64_t q = 0;
    std::uint64_t lambda = 0;
    std::uint64_t slots = 0;
    std::uint64_t blocks = 0;
    std::uint64_t block_len = 0;
    std::uint64_t prot_len = 0;
    std::uint64_t threshold = 0;
    Profile profile = Profile::Desk;

    /// Naor seed length in bits used by experiments.
    std::uint64_t seed_bits() const {
        return 8 * lambda;
    }
    std::uint64_t gap() const {
        return threshold - slots / 2;
    }

    bool operator==(const ProtocolParams &) const = default;
};

namespace detail {

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, const char *what) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw RangeError(std::string("parameter overflow computing ") + what);
    }
    return r;
}

inline std::uint64_t add(std::uint64_t a, std::uint64_t b, const char *what) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw RangeError(std::string("parameter overflow computing ") + what);
    }
    return r;
}

inline std::uint64_t pow(std::uint64_t base, unsigned e, const char *what) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) r = mul(r, base, what);
    return r;
}

}  // namespace detail

inline ProtocolParams derive_params(std::uint64_t q, std::uint64_t lambda) {
    using namespace detail;
    if (q < 1) throw ValidationError("q must be >= 1");
    if (lambda < 1) throw ValidationError("lambda must be >= 1");
    ProtocolParams p;
    p.profile = Profile::Paper;
    p.q = q;
    p.lambda = lambda;
    p.slots = mul(mul(120, pow(q, 7, "slots"), "slots"), lambda, "slots");
    p.blocks = mul(mul(24, pow(q, 6, "blocks"), "blocks"), lambda, "blocks");
    p.prot_len = add(mul(3, p.slots, "prot_len"), 4, "prot_len");
    p.block_len = mul(p.prot_len, q, "block_len") / p.blocks;
    p.threshold = add(mul(mul(60, pow(q, 7, "threshold"), "threshold"), lambda, "threshold"),
                      mul(pow(q, 4, "threshold"), lambda, "threshold"), "threshold");
    return p;
}

/// Scaled profile. `lambda` only feeds the commitment seed length here.
inline ProtocolParams desk_profile(std::uint64_t slots, std::uint64_t blocks, std::uint64_t gap, std::uint64_t q,
                                   std::uint64_t lambda = 2) {
    if (q < 1) throw ValidationError("desk profile: q >= 1 violated");
    if (lambda < 1) throw ValidationError("desk profile: lambda >= 1 violated");
    if (slots == 0) throw ValidationError("desk profile: slots > 0 violated");
    if (slots % 2 != 0) throw ValidationError("desk profile: slots even violated");
    if (blocks < q) throw ValidationError("desk profile: blocks >= q violated");
    if (gap < 1) throw ValidationError("desk profile: gap >= 1 violated");
    // threshold = slots must stay out of reach of an honest simulation, so
    // the gap is kept strictly below slots/2.
    if (gap >= slots / 2) throw ValidationError("desk profile: gap < slots/2 violated");
    ProtocolParams p;
    p.profile = Profile::Desk;
    p.q = q;
    p.lambda = lambda;
    p.slots = slots;
    p.blocks = blocks;
    p.prot_len = detail::add(detail::mul(3, slots, "prot_len"), 4, "prot_len");
    p.block_len = detail::mul(p.prot_len, q, "block_len") / blocks;
    if (p.block_len < 4) throw ValidationError("desk profile: block_len >= 4 violated");
    p.threshold = slots / 2 + gap;
    return p;
}

/// Threshold lowered by the OT round count for the concurrent PoK.
inline ProtocolParams adjust_threshold(const ProtocolParams &p, std::uint64_t m) {
    if (m >= p.threshold) throw ValidationError("threshold adjustment leaves no matched slots to prove");
    ProtocolParams r = p;
    r.threshold = p.threshold - m;
    return r;
}

/// Flat key/value record, decimal strings throughout.
inline std::map<std::string, std::string> to_record(const ProtocolParams &p) {
    return {
        {"profile", profile_name(p.profile)},
        {"q", std::to_string(p.q)},
        {"lambda", std::to_string(p.lambda)},
        {"slots", std::to_string(p.slots)},
        {"blocks", std::to_string(p.blocks)},
        {"block_len", std::to_string(p.block_len)},
        {"prot_len", std::to_string(p.prot_len)},
        {"threshold", std::to_string(p.threshold)},
    };
}

inline ProtocolParams from_record(const std::map<std::string, std::string> &rec) {
    auto get = [&](const char *k) -> std::uint64_t {
        auto it = rec.find(k);
        if (it == rec.end()) throw ValidationError(std::string("params record missing ") + k);
        return std::stoull(it->second);
    };
    auto prof = rec.find("profile");
    if (prof == rec.end()) throw ValidationError("params record missing profile");
    if (prof->second == "paper") {
        auto p = derive_params(get("q"), get("lambda"));
        if (p != ProtocolParams{p.q, p.lambda, get("slots"), get("blocks"), get("block_len"), get("prot_len"),
                                get("threshold"), Profile::Paper}) {
            throw ValidationError("params record inconsistent with paper formulas");
        }
        return p;
    }
    if (prof->second == "desk") {
        auto slots = get("slots");
        auto thr = get("threshold");
        if (thr < slots / 2) throw ValidationError("params record threshold below slots/2");
        auto p = desk_profile(slots, get("blocks"), thr - slots / 2, get("q"), get("lambda"));
        if (p.block_len != get("block_len") || p.prot_len != get("prot_len")) {
            throw ValidationError("params record inconsistent with desk relations");
        }
        return p;
    }
    throw ValidationError("unknown profile " + prof->second);
}

// ---------------------------------------------------------------------------
// Exact bound chain for block coverage, rigging and luck.

struct ChainLink {
    std::string name;
    Rational lhs;
    Rational rhs;
    bool holds = false;
};

struct BoundPoint {
    std::uint64_t q = 0;
    std::uint64_t lambda = 0;
    ProtocolParams params;
    Rational mu_lower;
    BigInt six_q5_lambda;
    Rational rig_expectation;  // mu_lower / q, a lower bound on E[sum X]
    BigInt rig_target;         // 6 lambda q^4
    Rational luck_mean;        // (slots - 3 q^4 lambda) / 2
    BigInt luck_threshold;     // 60 q^7 lambda - 2 q^4 lambda
    bool coverage_holds = false;
    bool rigging_holds = false;
    bool luck_holds = false;
    bool identities_hold = false;
    std::vector<ChainLink> chain;

    bool holds() const {
        bool ok = coverage_holds && rigging_holds && luck_holds && identities_hold;
        for (auto &l : chain) ok = ok && l.holds;
        return ok;
    }
};

using BoundReport = std::vector<BoundPoint>;

inline std::string rational_str(const Rational &r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline BoundPoint check_bound_point(std::uint64_t q, std::uint64_t lambda) {
    BoundPoint b;
    b.q = q;
    b.lambda = lambda;
    b.params = derive_params(q, lambda);
    const auto &p = b.params;
    const BigInt Q = q, lam = lambda;
    const BigInt lp = p.prot_len, L = p.blocks, lB = p.block_len, ls = p.slots;
    const BigInt q4 = Q * Q * Q * Q, q5 = q4 * Q, q6 = q5 * Q, q7 = q6 * Q;

    b.mu_lower = Rational(lp, 2) - Rational(3 * L);
    b.mu_lower /= Rational(lB - 3);
    b.six_q5_lambda = 6 * q5 * lam;
    b.coverage_holds = b.mu_lower >= Rational(b.six_q5_lambda);

    b.rig_expectation = b.mu_lower / Rational(Q);
    b.rig_target = 6 * lam * q4;
    b.rigging_holds = b.rig_expectation >= Rational(b.rig_target);

    b.luck_mean = Rational(ls - 3 * q4 * lam, 2);
    b.luck_threshold = 60 * q7 * lam - 2 * q4 * lam;
    b.luck_holds = b.luck_mean >= Rational(b.luck_threshold);

    b.identities_hold = lp == 3 * ls + 4 && BigInt(p.threshold) == ls / 2 + q4 * lam &&
                        lB * L <= lp * Q && (lB + 1) * L > lp * Q &&
                        3 * q4 * lam + b.luck_threshold == BigInt(p.threshold);

    // Each link of the coverage chain, evaluated with the exact block length
    // lp*Q/L on the left and compared as stated.
    const Rational lp_r(lp), L_r(L), Q_r(Q), ls_r(ls);
    const Rational exact_lB = lp_r * Q_r / L_r;
    const Rational num = lp_r / 2 - 3 * L_r;
    auto link = [&](std::string name, Rational lhs, Rational rhs) {
        bool ok = lhs >= rhs;
        b.chain.push_back({std::move(name), std::move(lhs), std::move(rhs), ok});
    };
    link("message_count", Rational(2) * (lp_r - 1) / 3, lp_r / 2);
    link("floored_block_len", b.mu_lower, num / (exact_lB - 3));
    link("drop_minus_three", num / (exact_lB - 3), num / lp_r * L_r / Q_r);
    const Rational step3 = (Rational(1) - 6 * L_r / lp_r) * L_r / (2 * Q_r);
    link("factor_out", num / lp_r * L_r / Q_r, step3);
    const Rational step4 = (Rational(1) - 6 * L_r / (3 * ls_r)) * L_r / (2 * Q_r);
    link("prot_len_vs_slots", step3, step4);
    const Rational step5 = (Rational(1) - Rational(2) / (5 * Q_r)) * L_r / (2 * Q_r);
    link("substitute_slots", step4, step5);
    link("half", step5, Rational(1, 2) * 12 * Rational(lam * q5));
    return b;
}

inline BoundReport check_claim_bounds(const std::vector<std::pair<std::uint64_t, std::uint64_t>> &grid) {
    BoundReport r;
    r.reserve(grid.size());
    for (auto [q, lambda] : grid) r.push_back(check_bound_point(q, lambda));
    return r;
}

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> grid(std::uint64_t q_max, std::uint64_t lambda_max) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> g;
    for (std::uint64_t q = 1; q <= q_max; ++q)
        for (std::uint64_t l = 1; l <= lambda_max; ++l) g.emplace_back(q, l);
    return g;
}

}  // namespace bcqzk
