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

// Measure-reflect amplifier for a circuit Q whose success decision is
// nearly independent of its input.
//
// Layout on n + k qubits: qubits 0..k-1 are the ancilla, starting in |0^k>,
// and qubit 0 doubles as the decision flag (0 = success). The input state
// occupies qubits k..k+n-1.

#include <cmath>
#include <vector>

#include "bcqzk/quantum/circuit.hpp"

namespace bcqzk::quantum {

struct AmplifierRun {
    double fidelity = 0;                     // <phi0| rho |phi0>
    std::vector<double> round_success;       // P[flag = 0 | reached round r]
    std::vector<double> reach;               // P[reach round r]
    double unresolved = 0;                   // mass still failing after t rounds
    double initial_success = 0;              // p(psi)
};

struct AmplifierSample {
    bool success = false;
    std::size_t rounds = 0;
    StateVector state;
};

class Amplifier {
   public:
    Amplifier(Circuit q, std::size_t n_input, double p0, double eps)
        : q_(std::move(q)), qinv_(q_.inverse()), n_(n_input), p0_(p0), eps_(eps) {
        if (!(p0 > 0 && p0 < 1)) throw ValidationError("p0 must lie in (0, 1)");
        if (!(eps > 0 && eps < 0.5)) throw ValidationError("eps must lie in (0, 1/2)");
        if (n_input == 0 || n_input >= q_.qubits()) throw ValidationError("need at least one input and one ancilla qubit");
        k_ = q_.qubits() - n_input;
        t_ = static_cast<std::size_t>(std::ceil(std::log(1 / eps) / (p0 * (1 - p0))));
    }

    std::size_t rounds() const {
        return t_;
    }
    std::size_t input_qubits() const {
        return n_;
    }
    std::size_t ancilla_qubits() const {
        return k_;
    }
    double p0() const {
        return p0_;
    }
    double eps() const {
        return eps_;
    }
    const Circuit &circuit() const {
        return q_;
    }

    /// 1 - 16 eps ln^2(1/eps) / (p0^2 (1-p0)^2)
    double bound() const {
        const double l = std::log(1 / eps_);
        const double v = p0_ * (1 - p0_);
        return 1 - 16 * eps_ * l * l / (v * v);
    }

    /// Embeds psi next to |0^k>.
    StateVector embed(const StateVector &psi) const {
        if (psi.qubits() != n_) throw ValidationError("input state has the wrong width");
        std::vector<Amp> a(std::size_t{1} << q_.qubits(), Amp{0, 0});
        for (std::size_t i = 0; i < psi.dim(); ++i) a[i << k_] = psi[i];
        return StateVector::from_amplitudes(std::move(a));
    }

    /// Normalized success branch of Q|psi, 0^k>.
    StateVector target(const StateVector &psi) const {
        StateVector s = embed(psi);
        q_.apply(s);
        StateVector t = s.project(0, 0);
        t.normalize();
        return t;
    }

    double success_probability(const StateVector &psi) const {
        StateVector s = embed(psi);
        q_.apply(s);
        return 1 - s.prob_one(0);
    }

    /// Tracks every measurement branch exactly. The success branch of round
    /// r is output as is; the failure branch is rewound and retried.
    AmplifierRun run(const StateVector &psi) const {
        AmplifierRun out;
        const StateVector tgt = target(psi);
        StateVector phi = embed(psi);
        q_.apply(phi);
        out.initial_success = 1 - phi.prob_one(0);
        for (std::size_t r = 0; r < t_; ++r) {
            const double mass = phi.norm2();
            out.reach.push_back(mass);
            StateVector good = phi.project(0, 0);
            const double g = good.norm2();
            out.round_success.push_back(mass > 0 ? g / mass : 0);
            out.fidelity += std::norm(tgt.inner(good));
            phi = phi.project(0, 1);
            if (phi.norm2() == 0) break;
            rewind(phi);
        }
        out.unresolved = phi.norm2();
        return out;
    }

    /// One sampled execution.
    AmplifierSample sample(const StateVector &psi, Rng &rng) const {
        StateVector phi = embed(psi);
        q_.apply(phi);
        for (std::size_t r = 1; r <= t_; ++r) {
            const double p = 1 - phi.prob_one(0);
            const bool ok = rng.uniform_real() < p;
            phi = phi.project(0, ok ? 0 : 1);
            phi.normalize();
            if (ok) return {true, r, phi};
            if (r < t_) rewind(phi);
        }
        return {false, t_, phi};
    }

   private:
    // Q^dag, reflect about |0^k> on the ancilla, Q.
    void rewind(StateVector &phi) const {
        qinv_.apply(phi);
        const std::uint64_t mask = (std::uint64_t{1} << k_) - 1;
        auto &a = phi.amplitudes();
        for (std::uint64_t i = 0; i < a.size(); ++i)
            if (i & mask) a[i] = -a[i];
        q_.apply(phi);
    }

    Circuit q_, qinv_;
    std::size_t n_, k_ = 0;
    double p0_, eps_;
    std::size_t t_ = 0;
};

inline Amplifier watrous_amplify(const Circuit &q, std::size_t n_input, double p0, double eps) {
    return Amplifier(q, n_input, p0, eps);
}

struct SuiteCircuit {
    Circuit q;
    std::size_t n = 0, k = 0;
    double d_low = 0, d_high = 0;  // p(psi) ranges over 1/2 + [d_low, d_high]
};

namespace detail {

inline void random_layer(Circuit &c, std::size_t lo, std::size_t hi, bool flag_controlled, Rng &rng) {
    const std::size_t span = hi - lo;
    static const char *one[] = {"h", "s", "t", "x", "sdg", "tdg", "y", "z"};
    static const char *rot[] = {"rx", "ry", "rz"};
    const std::size_t gates = 2 + rng.uniform(2 * span + 1);
    for (std::size_t g = 0; g < gates; ++g) {
        const std::size_t a = lo + rng.uniform(span);
        const auto kind = rng.uniform(span >= 2 ? 5 : 3);
        if (kind == 0) {
            c.add(one[rng.uniform(8)], {a});
        } else if (kind == 1) {
            c.add(rot[rng.uniform(3)], {a}, (rng.uniform_real() * 2 - 1) * M_PI);
        } else if (kind == 2) {
            if (flag_controlled) {
                c.add(rng.bit() ? "cry" : "crz", {0, a}, (rng.uniform_real() * 2 - 1) * M_PI);
            } else {
                c.add(one[rng.uniform(8)], {a});
            }
        } else {
            std::size_t b = lo + rng.uniform(span - 1);
            if (b >= a) ++b;
            if (kind == 3) {
                c.add(rng.bit() ? "cx" : "cz", {a, b});
            } else if (flag_controlled) {
                c.add("ccx", {0, a, b});
            } else {
                c.add("swap", {a, b});
            }
        }
    }
}

}  // namespace detail

/// Random Q on n + k qubits with p(psi) within eps/2 of 1/2 for every input.
/// Before the decision only non-flag qubits are touched; the decision is a
/// ry on the flag plus a cry from an input qubit; after it every gate
/// preserves the flag populations.
inline SuiteCircuit random_suite_circuit(std::size_t n, std::size_t k, double eps, Rng &rng) {
    if (n == 0 || k == 0 || n + k > 10) throw ValidationError("suite circuits need n, k >= 1 and n + k <= 10");
    SuiteCircuit out{Circuit(n + k), n, k, 0, 0};
    Circuit &c = out.q;
    if (n + k > 1) detail::random_layer(c, 1, n + k, false, rng);
    const double d1 = (rng.uniform_real() - 0.5) * eps, d2 = (rng.uniform_real() - 0.5) * eps;
    const double theta = std::acos(2 * d1);
    c.add("ry", {0}, theta);
    c.add("cry", {k + rng.uniform(n), 0}, std::acos(2 * d2) - theta);
    if (n + k > 1) detail::random_layer(c, 1, n + k, true, rng);
    out.d_low = std::min(d1, d2);
    out.d_high = std::max(d1, d2);
    return out;
}

/// Q whose decision never depends on the input: p(psi) = 1/2 + d exactly.
inline SuiteCircuit oblivious_circuit(std::size_t n, std::size_t k, double d, Rng &rng) {
    SuiteCircuit out{Circuit(n + k), n, k, d, d};
    Circuit &c = out.q;
    if (n + k > 1) detail::random_layer(c, 1, n + k, false, rng);
    c.add("ry", {0}, std::acos(2 * d));
    if (n + k > 1) detail::random_layer(c, 1, n + k, true, rng);
    return out;
}

}  // namespace bcqzk::quantum
