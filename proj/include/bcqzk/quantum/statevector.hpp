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

// Dense statevector. Qubit q is bit q of the basis index (little endian).

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "bcqzk/core/errors.hpp"
#include "bcqzk/core/rng.hpp"

namespace bcqzk::quantum {

using Amp = std::complex<double>;
using Mat2 = std::array<Amp, 4>;  // row major

constexpr std::size_t kMaxQubits = 20;
constexpr double kNormTol = 1e-9;

inline Mat2 mat_mul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 dagger(const Mat2 &a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

class StateVector {
   public:
    /// |0...0> on `qubits` qubits.
    explicit StateVector(std::size_t qubits) : n_(qubits) {
        if (qubits == 0 || qubits > kMaxQubits) throw ValidationError("statevector supports 1..20 qubits");
        amps_.assign(std::size_t{1} << qubits, Amp{0, 0});
        amps_[0] = 1;
    }

    static StateVector basis(std::size_t qubits, std::uint64_t index) {
        StateVector s(qubits);
        if (index >= s.dim()) throw ValidationError("basis index out of range");
        s.amps_[0] = 0;
        s.amps_[index] = 1;
        return s;
    }

    /// Haar-like random state from Gaussian amplitudes.
    static StateVector random(std::size_t qubits, Rng &rng) {
        StateVector s(qubits);
        for (auto &a : s.amps_) {
            // Box-Muller pairs.
            double u1 = std::max(rng.uniform_real(), 1e-300), u2 = rng.uniform_real();
            double r = std::sqrt(-2 * std::log(u1));
            a = Amp(r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2));
        }
        s.normalize();
        return s;
    }

    static StateVector from_amplitudes(std::vector<Amp> amps) {
        std::size_t q = 0;
        while ((std::size_t{1} << q) < amps.size()) ++q;
        if (q == 0 || (std::size_t{1} << q) != amps.size()) throw ValidationError("amplitude count must be a power of two >= 2");
        StateVector s(q);
        s.amps_ = std::move(amps);
        return s;
    }

    std::size_t qubits() const {
        return n_;
    }
    std::size_t dim() const {
        return amps_.size();
    }
    const std::vector<Amp> &amplitudes() const {
        return amps_;
    }
    std::vector<Amp> &amplitudes() {
        return amps_;
    }
    Amp operator[](std::size_t i) const {
        return amps_[i];
    }

    double norm2() const {
        double s = 0;
        for (auto &a : amps_) s += std::norm(a);
        return s;
    }
    void normalize() {
        double n = std::sqrt(norm2());
        if (n == 0) throw ValidationError("cannot normalize the zero vector");
        for (auto &a : amps_) a /= n;
    }
    StateVector &scale(double f) {
        for (auto &a : amps_) a *= f;
        return *this;
    }

    /// Applies m to `target` on the basis states where every bit in
    /// `controls` is set.
    void apply(const Mat2 &m, std::size_t target, std::uint64_t controls = 0) {
        check(target);
        const std::uint64_t tbit = std::uint64_t{1} << target;
        if (controls & tbit) throw ValidationError("target qubit listed as control");
        for (std::uint64_t i = 0; i < dim(); ++i) {
            if ((i & tbit) || (i & controls) != controls) continue;
            Amp a0 = amps_[i], a1 = amps_[i | tbit];
            amps_[i] = m[0] * a0 + m[1] * a1;
            amps_[i | tbit] = m[2] * a0 + m[3] * a1;
        }
    }

    void swap_qubits(std::size_t a, std::size_t b) {
        check(a);
        check(b);
        if (a == b) return;
        const std::uint64_t ba = std::uint64_t{1} << a, bb = std::uint64_t{1} << b;
        for (std::uint64_t i = 0; i < dim(); ++i) {
            if ((i & ba) && !(i & bb)) std::swap(amps_[i], amps_[(i & ~ba) | bb]);
        }
    }

    /// Probability that qubit q reads 1.
    double prob_one(std::size_t q) const {
        check(q);
        const std::uint64_t bit = std::uint64_t{1} << q;
        double p = 0;
        for (std::uint64_t i = 0; i < dim(); ++i)
            if (i & bit) p += std::norm(amps_[i]);
        return p;
    }

    /// Zeroes every amplitude whose bit q differs from v. Not renormalized.
    StateVector project(std::size_t q, int v) const {
        check(q);
        StateVector out = *this;
        const std::uint64_t bit = std::uint64_t{1} << q;
        for (std::uint64_t i = 0; i < dim(); ++i)
            if (((i & bit) != 0) != (v != 0)) out.amps_[i] = 0;
        return out;
    }

    Amp inner(const StateVector &o) const {
        if (o.dim() != dim()) throw ValidationError("inner product of states of different size");
        Amp s{0, 0};
        for (std::size_t i = 0; i < dim(); ++i) s += std::conj(amps_[i]) * o.amps_[i];
        return s;
    }

    /// Samples a full computational-basis measurement.
    std::uint64_t measure_all(Rng &rng) const {
        double u = rng.uniform_real() * norm2(), acc = 0;
        for (std::uint64_t i = 0; i < dim(); ++i) {
            acc += std::norm(amps_[i]);
            if (u < acc) return i;
        }
        return dim() - 1;
    }

   private:
    void check(std::size_t q) const {
        if (q >= n_) throw ValidationError("qubit index out of range");
    }

    std::size_t n_;
    std::vector<Amp> amps_;
};

/// Two-outcome measurement given by Kraus operators on one qubit.
struct MeasurementOp {
    Mat2 m0, m1;
    std::size_t qubit = 0;

    static MeasurementOp make(const Mat2 &m0, const Mat2 &m1, std::size_t qubit) {
        MeasurementOp op{m0, m1, qubit};
        if (completeness_error(m0, m1) > kNormTol) throw ValidationError("measurement operators are not complete");
        return op;
    }

    /// max |(M0^dag M0 + M1^dag M1 - I)_ij|
    static double completeness_error(const Mat2 &m0, const Mat2 &m1) {
        Mat2 a = mat_mul(dagger(m0), m0), b = mat_mul(dagger(m1), m1);
        const Mat2 id{1, 0, 0, 1};
        double e = 0;
        for (int i = 0; i < 4; ++i) e = std::max(e, std::abs(a[i] + b[i] - id[i]));
        return e;
    }

    /// Unnormalized M_b psi.
    StateVector branch(const StateVector &s, int b) const {
        StateVector out = s;
        out.apply(b == 0 ? m0 : m1, qubit);
        return out;
    }
    double probability(const StateVector &s, int b) const {
        return branch(s, b).norm2();
    }
};

struct MeasureResult {
    int outcome;
    StateVector state;
};

/// Outcome b with probability ||M_b psi||^2, post-state renormalized.
inline MeasureResult apply_measure(const StateVector &s, const MeasurementOp &op, Rng &rng) {
    StateVector b0 = op.branch(s, 0);
    const double p0 = b0.norm2();
    if (rng.uniform_real() < p0) {
        b0.normalize();
        return {0, std::move(b0)};
    }
    StateVector b1 = op.branch(s, 1);
    b1.normalize();
    return {1, std::move(b1)};
}

}  // namespace bcqzk::quantum
