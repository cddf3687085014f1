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

// Gate lists and their text form. One gate per line:
//
//   qubits N
//   h 0
//   ry 0.25 1          angle first, then qubits
//   cx 0 1             controls first, target last
//   mcx 0 1 2 3        any number of controls
//
// '#' starts a comment. docs/circuits.md lists every gate.

#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bcqzk/quantum/statevector.hpp"

namespace bcqzk::quantum {

struct Gate {
    std::string name;
    double angle = 0;
    std::vector<std::size_t> qubits;  // controls..., target
    bool operator==(const Gate &) const = default;
};

namespace detail {

struct GateInfo {
    bool has_angle;
    int controls;  // -1: any number >= 1
    int targets;
};

inline const std::map<std::string, GateInfo> &gate_table() {
    static const std::map<std::string, GateInfo> t{
        {"x", {false, 0, 1}},   {"y", {false, 0, 1}},   {"z", {false, 0, 1}},    {"h", {false, 0, 1}},
        {"s", {false, 0, 1}},   {"sdg", {false, 0, 1}}, {"t", {false, 0, 1}},    {"tdg", {false, 0, 1}},
        {"rx", {true, 0, 1}},   {"ry", {true, 0, 1}},   {"rz", {true, 0, 1}},    {"cx", {false, 1, 1}},
        {"cz", {false, 1, 1}},  {"cry", {true, 1, 1}},  {"crz", {true, 1, 1}},   {"ccx", {false, 2, 1}},
        {"mcx", {false, -1, 1}}, {"swap", {false, 0, 2}},
    };
    return t;
}

inline Mat2 base_matrix(const std::string &name, double a) {
    const Amp i(0, 1);
    const double r = 1 / std::sqrt(2.0);
    if (name == "x" || name == "cx" || name == "ccx" || name == "mcx") return {0, 1, 1, 0};
    if (name == "y") return {0, -i, i, 0};
    if (name == "z" || name == "cz") return {1, 0, 0, -1};
    if (name == "h") return {r, r, r, -r};
    if (name == "s") return {1, 0, 0, i};
    if (name == "sdg") return {1, 0, 0, -i};
    if (name == "t") return {1, 0, 0, std::exp(i * (M_PI / 4))};
    if (name == "tdg") return {1, 0, 0, std::exp(-i * (M_PI / 4))};
    const double c = std::cos(a / 2), s = std::sin(a / 2);
    if (name == "rx") return {c, -i * s, -i * s, c};
    if (name == "ry" || name == "cry") return {c, -s, s, c};
    if (name == "rz" || name == "crz") return {std::exp(-i * (a / 2)), 0, 0, std::exp(i * (a / 2))};
    throw ValidationError("no matrix for gate " + name);
}

}  // namespace detail

class Circuit {
   public:
    explicit Circuit(std::size_t qubits = 1) : n_(qubits) {
        if (qubits == 0 || qubits > kMaxQubits) throw ValidationError("circuit supports 1..20 qubits");
    }

    std::size_t qubits() const {
        return n_;
    }
    const std::vector<Gate> &gates() const {
        return gates_;
    }

    Circuit &add(const std::string &name, std::vector<std::size_t> qubits, double angle = 0) {
        auto it = detail::gate_table().find(name);
        if (it == detail::gate_table().end()) throw ValidationError("unknown gate: " + name);
        const auto &info = it->second;
        const std::size_t want = info.controls < 0 ? 0 : static_cast<std::size_t>(info.controls + info.targets);
        if (info.controls < 0 ? qubits.size() < 2 : qubits.size() != want)
            throw ValidationError("gate " + name + " has the wrong number of qubits");
        for (std::size_t a = 0; a < qubits.size(); ++a) {
            if (qubits[a] >= n_) throw ValidationError("gate " + name + " addresses qubit " + std::to_string(qubits[a]));
            for (std::size_t b = a + 1; b < qubits.size(); ++b)
                if (qubits[a] == qubits[b]) throw ValidationError("gate " + name + " repeats a qubit");
        }
        gates_.push_back({name, info.has_angle ? angle : 0, std::move(qubits)});
        return *this;
    }

    Circuit &append(const Circuit &o) {
        if (o.n_ != n_) throw ValidationError("appending a circuit of different width");
        gates_.insert(gates_.end(), o.gates_.begin(), o.gates_.end());
        return *this;
    }

    void apply(StateVector &s) const {
        if (s.qubits() != n_) throw ValidationError("circuit and state widths differ");
        for (auto &g : gates_) apply_gate(g, s);
    }

    Circuit inverse() const {
        Circuit inv(n_);
        for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
            Gate g = *it;
            if (g.name == "s") {
                g.name = "sdg";
            } else if (g.name == "sdg") {
                g.name = "s";
            } else if (g.name == "t") {
                g.name = "tdg";
            } else if (g.name == "tdg") {
                g.name = "t";
            } else if (detail::gate_table().at(g.name).has_angle) {
                g.angle = -g.angle;
            }
            inv.gates_.push_back(g);
        }
        return inv;
    }

    std::string to_text() const {
        std::ostringstream os;
        os << "qubits " << n_ << '\n';
        for (auto &g : gates_) {
            os << g.name;
            if (detail::gate_table().at(g.name).has_angle) os << ' ' << std::setprecision(17) << g.angle;
            for (auto q : g.qubits) os << ' ' << q;
            os << '\n';
        }
        return os.str();
    }

    static Circuit parse(const std::string &text) {
        std::istringstream in(text);
        std::string line;
        std::optional<Circuit> c;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
            std::istringstream ls(line);
            std::string name;
            if (!(ls >> name)) continue;
            auto fail = [&](const std::string &why) { return ValidationError("circuit line " + std::to_string(lineno) + ": " + why); };
            if (name == "qubits") {
                std::size_t n = 0;
                if (c || !(ls >> n)) throw fail("bad qubits header");
                c.emplace(n);
                continue;
            }
            if (!c) throw fail("gate before the qubits header");
            auto it = detail::gate_table().find(name);
            if (it == detail::gate_table().end()) throw fail("unknown gate " + name);
            double angle = 0;
            if (it->second.has_angle && !(ls >> angle)) throw fail("missing angle");
            std::vector<std::size_t> qs;
            long long q;
            while (ls >> q) {
                if (q < 0) throw fail("negative qubit index");
                qs.push_back(static_cast<std::size_t>(q));
            }
            if (!ls.eof()) throw fail("trailing junk");
            c->add(name, std::move(qs), angle);
        }
        if (!c) throw ValidationError("circuit text has no qubits header");
        return *c;
    }

   private:
    static void apply_gate(const Gate &g, StateVector &s) {
        if (g.name == "swap") {
            s.swap_qubits(g.qubits[0], g.qubits[1]);
            return;
        }
        std::uint64_t controls = 0;
        for (std::size_t k = 0; k + 1 < g.qubits.size(); ++k) controls |= std::uint64_t{1} << g.qubits[k];
        s.apply(detail::base_matrix(g.name, g.angle), g.qubits.back(), controls);
    }

    std::size_t n_;
    std::vector<Gate> gates_;
};

}  // namespace bcqzk::quantum
