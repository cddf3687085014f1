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

// Witness search with a state-duplicating oracle. The candidate y sits on
// qubits 0..n-1 and the verifier writes C(x, y) into the flag, qubit n.
// Each iteration weakly measures the flag on fresh copies until one copy
// reads 0, which halves the weight of the non-witness branch.

#include <optional>
#include <vector>

#include "bcqzk/core/bitstring.hpp"
#include "bcqzk/params.hpp"
#include "bcqzk/quantum/circuit.hpp"

namespace bcqzk::quantum {

constexpr std::size_t kMaxWitnessBits = 12;

/// Weak flag measurement: M0 = |0><0|/sqrt2 + |1><1|, M1 = |0><0|/sqrt2.
inline MeasurementOp cloning_measurement(std::size_t flag) {
    const double r = 1 / std::sqrt(2.0);
    return MeasurementOp::make({r, 0, 0, 1}, {r, 0, 0, 0}, flag);
}

/// Reversible circuit flipping qubit n exactly on the y with x[y] = 1.
inline Circuit truth_table_oracle(const BitString &x, std::size_t n) {
    if (n == 0 || n > kMaxWitnessBits) throw ValidationError("witness length must be 1..12");
    if (x.size() != (std::size_t{1} << n)) throw ValidationError("truth table must have 2^n entries");
    Circuit c(n + 1);
    for (std::size_t y = 0; y < x.size(); ++y) {
        if (!x[y]) continue;
        std::vector<std::size_t> qs;
        for (std::size_t b = 0; b < n; ++b) {
            if (!((y >> b) & 1)) c.add("x", {b});
            qs.push_back(b);
        }
        qs.push_back(n);
        c.add("mcx", qs);
        for (std::size_t b = 0; b < n; ++b)
            if (!((y >> b) & 1)) c.add("x", {b});
    }
    return c;
}

/// C(x, y) read off the circuit on a basis input.
inline bool circuit_accepts(const Circuit &c, std::uint64_t y) {
    const std::size_t n = c.qubits() - 1;
    StateVector s = StateVector::basis(c.qubits(), y);
    c.apply(s);
    return s.prob_one(n) > 0.5;
}

struct ClosedForm {
    double delta = 0;
    double prod_alpha = 0;
};

/// prod alpha_j = (1 + (2^i - 1) eps) / 2^i, delta_i = (1 - eps) / (1 + (2^i - 1) eps).
inline ClosedForm closed_form_delta(double eps, std::size_t i) {
    if (!(eps >= 0 && eps <= 1)) throw ValidationError("eps must lie in [0, 1]");
    const double p = std::ldexp(1.0, static_cast<int>(i));
    const double num = 1 + (p - 1) * eps;
    return {(1 - eps) / num, num / p};
}

struct ClosedFormExact {
    Rational delta, prod_alpha;
};

inline ClosedFormExact closed_form_delta_exact(const Rational &eps, std::size_t i) {
    if (eps < 0 || eps > 1) throw ValidationError("eps must lie in [0, 1]");
    const Rational p = Rational(BigInt(1) << i);
    const Rational num = 1 + (p - 1) * eps;
    return {(1 - eps) / num, num / p};
}

struct AttackIteration {
    double alpha = 0;             // P[outcome 0] on one copy of Psi_{i-1}
    double delta = 0;             // flag-0 weight of Psi_i
    double abort_probability = 0; // (delta_{i-1} / 2)^copies
    std::size_t attempts = 0;
};

struct AttackTrace {
    enum Outcome { Witness, NotWitness, Bottom, Unsatisfiable };

    std::size_t n = 0, copies = 0;
    double epsilon = 0;  // witness fraction
    double delta0 = 0;
    std::vector<AttackIteration> iterations;
    Outcome outcome = Bottom;
    std::optional<std::uint64_t> y;

    bool success() const {
        return outcome == Witness;
    }
    double prod_alpha() const {
        double p = 1;
        for (auto &it : iterations) p *= it.alpha;
        return p;
    }
    static const char *name(Outcome o) {
        switch (o) {
            case Witness: return "witness";
            case NotWitness: return "not-witness";
            case Bottom: return "bottom";
            case Unsatisfiable: return "unsatisfiable";
        }
        return "?";
    }
};

/// Psi_0 = C (H^n x I) |0>.
inline StateVector cloning_initial_state(const Circuit &c) {
    StateVector s(c.qubits());
    for (std::size_t b = 0; b + 1 < c.qubits(); ++b) s.apply(detail::base_matrix("h", 0), b);
    c.apply(s);
    return s;
}

/// Runs the attack. `copies` is the oracle's duplication count per
/// iteration and defaults to |x|.
inline AttackTrace cloning_attack(const Circuit &c, const BitString &x, std::size_t n, Rng &rng, std::size_t copies = 0) {
    if (n == 0 || n > kMaxWitnessBits) throw ValidationError("witness length must be 1..12");
    if (c.qubits() != n + 1) throw ValidationError("verifier circuit must act on n + 1 qubits");
    if (x.size() != (std::size_t{1} << n)) throw ValidationError("instance must be the 2^n-entry truth table");
    AttackTrace tr;
    tr.n = n;
    tr.copies = copies ? copies : x.size();
    const MeasurementOp m = cloning_measurement(n);

    StateVector psi = cloning_initial_state(c);
    tr.epsilon = psi.prob_one(n);
    tr.delta0 = 1 - tr.epsilon;
    double delta = tr.delta0;
    for (std::size_t i = 1; i <= n; ++i) {
        AttackIteration it;
        it.alpha = m.probability(psi, 0);
        it.abort_probability = std::pow(delta / 2, static_cast<double>(tr.copies));
        std::optional<StateVector> next;
        for (std::size_t j = 0; j < tr.copies && !next; ++j) {
            ++it.attempts;
            auto r = apply_measure(psi, m, rng);  // a fresh copy each time
            if (r.outcome == 0) next = std::move(r.state);
        }
        if (!next) {
            it.delta = delta;
            tr.iterations.push_back(it);
            tr.outcome = AttackTrace::Bottom;
            return tr;
        }
        psi = std::move(*next);
        delta = 1 - psi.prob_one(n);
        it.delta = delta;
        tr.iterations.push_back(it);
    }
    // Measure y; the flag is traced out.
    const std::uint64_t outcome = psi.measure_all(rng) & ((std::uint64_t{1} << n) - 1);
    tr.y = outcome;
    if (tr.epsilon == 0) {
        tr.outcome = AttackTrace::Unsatisfiable;
    } else {
        tr.outcome = circuit_accepts(c, outcome) ? AttackTrace::Witness : AttackTrace::NotWitness;
    }
    return tr;
}

/// Truth table with exactly the listed witnesses.
inline BitString instance_with_witnesses(std::size_t n, const std::vector<std::uint64_t> &witnesses) {
    BitString x(std::size_t{1} << n);
    for (auto w : witnesses) {
        if (w >= x.size()) throw ValidationError("witness out of range");
        x.set(w, 1);
    }
    return x;
}

}  // namespace bcqzk::quantum
