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

// Config-driven experiment runner. A config is an INI file:
//
//   [experiment]
//   id = coinflip
//   seed = 7
//   trials = 100000
//
//   [coinflip]
//   low = 0.497
//   ...
//
// Each experiment has a fixed key set; missing and unknown keys are both
// errors. Outputs are results.jsonl (config echo first, then one record per
// line) and summary.csv (one row per criterion).

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bcqzk/block_simulator.hpp"
#include "bcqzk/coinflip.hpp"
#include "bcqzk/ot.hpp"
#include "bcqzk/params.hpp"
#include "bcqzk/pok.hpp"
#include "bcqzk/quantum/cloning.hpp"
#include "bcqzk/quantum/watrous.hpp"
#include "bcqzk/soundness.hpp"
#include "json.hpp"

namespace bcqzk {

class ConfigError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

using Json = nlohmann::json;

struct ExperimentConfig {
    std::string id;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    // section -> key -> raw value, as written
    std::map<std::string, std::map<std::string, std::string>> sections;

    const std::string &raw(const std::string &sec, const std::string &key) const {
        auto s = sections.find(sec);
        if (s == sections.end()) throw ConfigError("config: missing section [" + sec + "]");
        auto k = s->second.find(key);
        if (k == s->second.end()) throw ConfigError("config: [" + sec + "] " + key + ": missing");
        return k->second;
    }

    std::uint64_t u64(const std::string &sec, const std::string &key) const {
        const auto &v = raw(sec, key);
        std::size_t used = 0;
        std::uint64_t out = 0;
        try {
            if (!v.empty() && v[0] != '-') out = std::stoull(v, &used);
        } catch (const std::logic_error &) {
            used = 0;
        }
        if (used == 0 || used != v.size()) throw ConfigError("config: [" + sec + "] " + key + ": expected unsigned integer, got '" + v + "'");
        return out;
    }

    double real(const std::string &sec, const std::string &key) const {
        const auto &v = raw(sec, key);
        std::size_t used = 0;
        double out = 0;
        try {
            out = std::stod(v, &used);
        } catch (const std::logic_error &) {
            used = 0;
        }
        if (used == 0 || used != v.size()) throw ConfigError("config: [" + sec + "] " + key + ": expected number, got '" + v + "'");
        return out;
    }

    std::vector<std::string> list(const std::string &sec, const std::string &key) const {
        std::vector<std::string> out;
        std::string cur;
        int depth = 0;
        for (char c : raw(sec, key) + ",") {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == ',' && depth == 0) {
                auto b = cur.find_first_not_of(" \t"), e = cur.find_last_not_of(" \t");
                if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (out.empty()) throw ConfigError("config: [" + sec + "] " + key + ": empty list");
        return out;
    }

    std::vector<std::uint64_t> u64_list(const std::string &sec, const std::string &key) const {
        std::vector<std::uint64_t> out;
        for (auto &s : list(sec, key)) {
            std::size_t used = 0;
            try {
                out.push_back(std::stoull(s, &used));
            } catch (const std::logic_error &) {
                used = 0;
            }
            if (used == 0 || used != s.size()) throw ConfigError("config: [" + sec + "] " + key + ": bad entry '" + s + "'");
        }
        return out;
    }

    template <typename F>
    auto field(const std::string &sec, const std::string &key, F &&parse) const {
        try {
            return parse(raw(sec, key));
        } catch (const ConfigError &) {
            throw;
        } catch (const std::exception &e) {
            throw ConfigError("config: [" + sec + "] " + key + ": " + e.what());
        }
    }
};

struct Criterion {
    std::string name;
    double value = 0;
    std::string relation;  // "<=", ">=", "=="
    double threshold = 0;
    bool pass = false;

    static Criterion le(std::string n, double v, double t) {
        return {std::move(n), v, "<=", t, v <= t};
    }
    static Criterion ge(std::string n, double v, double t) {
        return {std::move(n), v, ">=", t, v >= t};
    }
    static Criterion eq(std::string n, double v, double t) {
        return {std::move(n), v, "==", t, v == t};
    }
};

struct ExperimentResult {
    std::string profile = "none";
    std::uint64_t trials = 0;
    std::vector<Json> records;
    std::vector<Criterion> criteria;

    bool all_pass() const {
        return std::all_of(criteria.begin(), criteria.end(), [](auto &c) { return c.pass; });
    }
};

namespace detail {

struct ExperimentSpec {
    std::set<std::string> keys;
    bool profile = false;  // requires a [profile] section
    bool trials = true;
    std::function<void(const ExperimentConfig &, unsigned, ExperimentResult &)> run;
};

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

inline std::string profile_label(const ProtocolParams &p) {
    std::ostringstream os;
    if (p.profile == Profile::Paper) {
        os << "paper(q=" << p.q << ";lambda=" << p.lambda << ")";
    } else {
        os << "desk(slots=" << p.slots << ";blocks=" << p.blocks << ";gap=" << p.gap() << ";q=" << p.q << ";lambda=" << p.lambda << ")";
    }
    return os.str();
}

inline ProtocolParams read_profile(const ExperimentConfig &c) {
    const auto kind = c.raw("profile", "kind");
    try {
        if (kind == "desk")
            return desk_profile(c.u64("profile", "slots"), c.u64("profile", "blocks"), c.u64("profile", "gap"), c.u64("profile", "q"),
                                c.u64("profile", "lambda"));
        if (kind == "paper") return derive_params(c.u64("profile", "q"), c.u64("profile", "lambda"));
    } catch (const ConfigError &) {
        throw;
    } catch (const std::exception &e) {
        throw ConfigError(std::string("config: [profile]: ") + e.what());
    }
    throw ConfigError("config: [profile] kind: expected desk or paper, got '" + kind + "'");
}

inline std::set<std::string> profile_keys(const std::string &kind) {
    if (kind == "paper") return {"kind", "q", "lambda"};
    return {"kind", "slots", "blocks", "gap", "q", "lambda"};
}

// --- bczk-sim -------------------------------------------------------------

inline void run_bczk_sim(const ExperimentConfig &c, unsigned workers, ExperimentResult &res) {
    const auto p = read_profile(c);
    res.profile = profile_label(p);
    const std::string S = "bczk-sim";
    std::vector<AdversarySpec> advs;
    for (auto &a : c.list(S, "adversaries")) advs.push_back(c.field(S, "adversaries", [&](auto &) { return parse_adversary(a); }));
    const auto retry_cap = c.u64(S, "retry_cap");
    const auto success_adv = c.raw(S, "success_adversary");
    const double min_success = c.real(S, "min_success"), tol = c.real(S, "rewind_tolerance"), pair_tol = c.real(S, "pairwise_tolerance");
    bool found = false;
    for (auto &a : advs) found = found || a.name() == success_adv;
    if (!found) throw ConfigError("config: [bczk-sim] success_adversary: '" + success_adv + "' is not in adversaries");

    struct One {
        SimStats stats;
        std::size_t kept = 0, single = 0;
    };
    RewindProfile prof;
    std::uint64_t mismatches = 0, runs = 0;
    for (std::size_t a = 0; a < advs.size(); ++a) {
        auto rows = parallel_trials(c.trials, workers, [&](std::uint64_t i) {
            const auto s = derive_seed(derive_seed(c.seed, a), i);
            auto setup = planted_setup(p, s);
            auto sim = simulate(setup, advs[a], s, retry_cap);
            auto plain = run_protocol(setup, {}, advs[a], s);
            return One{sim.stats, sim.transcript.order.size(), plain.transcript.order.size()};
        });
        RewindProfileEntry e;
        e.strategy = advs[a].name();
        std::uint64_t success = 0;
        for (std::uint64_t i = 0; i < rows.size(); ++i) {
            const auto &r = rows[i];
            e.blocks += r.stats.rewind_attempts.size();
            e.decisions += r.stats.decisions;
            e.rewinds += r.stats.rewinds;
            e.forced_continues += r.stats.forced_continues;
            success += r.stats.all_stage2_success();
            mismatches += r.kept != r.single;
            ++runs;
            res.records.push_back({{"type", "sim"},
                                   {"adversary", e.strategy},
                                   {"trial", i},
                                   {"decisions", r.stats.decisions},
                                   {"rewinds", r.stats.rewinds},
                                   {"forced_continues", r.stats.forced_continues},
                                   {"stage2_success", r.stats.all_stage2_success()},
                                   {"transcript_len", r.kept},
                                   {"single_pass_len", r.single}});
        }
        const double rate = static_cast<double>(success) / static_cast<double>(c.trials);
        res.records.push_back({{"type", "adversary_summary"},
                               {"adversary", e.strategy},
                               {"blocks", e.blocks},
                               {"rewind_frequency", e.frequency()},
                               {"stage2_success_rate", rate},
                               {"forced_continues", e.forced_continues}});
        if (e.strategy == success_adv) {
            res.criteria.push_back(Criterion::ge("stage2_success[" + e.strategy + "]", rate, min_success));
            res.criteria.push_back(Criterion::eq("forced_continues[" + e.strategy + "]", static_cast<double>(e.forced_continues), 0));
        }
        prof.entries.push_back(e);
    }
    res.trials = c.trials;
    res.criteria.push_back(Criterion::le("rewind_deviation_from_half", prof.max_deviation_from_half(), tol));
    res.criteria.push_back(Criterion::le("rewind_pairwise_deviation", prof.max_pairwise_deviation(), pair_tol));
    res.criteria.push_back(Criterion::eq("transcript_length_mismatches", static_cast<double>(mismatches), 0));
    (void)runs;
}

// --- soundness ------------------------------------------------------------

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> parse_grid(const ExperimentConfig &c, const std::string &sec,
                                                                      const std::string &key) {
    // "1x1-64, 2x1-4": q x lambda range
    std::vector<std::pair<std::uint64_t, std::uint64_t>> g;
    for (auto &item : c.list(sec, key)) {
        unsigned long long q = 0, lo = 0, hi = 0;
        char tail = 0;
        if (std::sscanf(item.c_str(), "%llux%llu-%llu%c", &q, &lo, &hi, &tail) != 3 || q == 0 || lo == 0 || hi < lo)
            throw ConfigError("config: [" + sec + "] " + key + ": bad grid entry '" + item + "' (want QxLO-HI)");
        for (auto l = lo; l <= hi; ++l) g.emplace_back(q, l);
    }
    return g;
}

inline void run_soundness(const ExperimentConfig &c, unsigned workers, ExperimentResult &res) {
    const auto p = read_profile(c);
    res.profile = profile_label(p);
    const std::string S = "soundness";
    const auto g = parse_grid(c, S, "grid");
    const auto strategy = c.field(S, "strategy", [](auto &v) { return parse_cheat(v); });
    std::uint64_t bad = 0;
    for (auto &t : verify_soundness_inequality(g)) {
        bad += !t.satisfied;
        res.records.push_back({{"type", "tail"},
                               {"q", t.q},
                               {"lambda", t.lambda},
                               {"n", t.n},
                               {"k", t.k},
                               {"log_exact_tail", static_cast<double>(t.log_exact_tail)},
                               {"log_bound", static_cast<double>(t.log_chernoff)},
                               {"satisfied", t.satisfied}});
    }
    res.criteria.push_back(Criterion::eq("tail_inequality_failures", static_cast<double>(bad), 0));
    auto mc = cheating_prover_mc(p, strategy, c.trials, c.seed, workers);
    const double tail = std::exp(static_cast<double>(binom_tail_exact(p.slots, Rational(1, 2), p.threshold).log_value));
    const double ci = std::sqrt(tail * (1 - tail) / static_cast<double>(c.trials));
    res.records.push_back({{"type", "cheating_mc"},
                           {"strategy", cheat_name(strategy)},
                           {"trials", mc.trials},
                           {"successes", mc.successes},
                           {"exact_tail", tail}});
    res.criteria.push_back(Criterion::le("cheating_success_rate", mc.rate(), tail + 3 * ci));
    res.trials = c.trials;
}

// --- pok-extract ----------------------------------------------------------

inline void run_pok_extract(const ExperimentConfig &c, unsigned workers, ExperimentResult &res) {
    const std::string S = "pok-extract";
    PokConfig cfg{c.u64(S, "witness_bits"), c.u64(S, "lambda"), c.u64(S, "retry_cap")};
    c.field(S, "witness_bits", [&](auto &) {
        cfg.validate();
        return 0;
    });
    res.profile = "pok(bits=" + std::to_string(cfg.witness_bits) + ";lambda=" + std::to_string(cfg.lambda) + ")";
    const double max_gap = c.real(S, "max_gap"), alpha = c.real(S, "fit_alpha");
    std::vector<PokProverStrategy> provers;
    for (auto &s : c.list(S, "provers")) provers.push_back(c.field(S, "provers", [&](auto &) { return parse_pok_prover(s); }));
    for (std::size_t k = 0; k < provers.size(); ++k) {
        auto r = extractability(cfg, provers[k], c.trials, derive_seed(c.seed, k), workers);
        auto fit = r.attempts_fit();
        Json hist = Json::object();
        for (auto &[a, n] : r.attempts) hist[std::to_string(a)] = n;
        res.records.push_back({{"type", "extractability"},
                               {"prover", r.prover},
                               {"trials", r.trials},
                               {"accepted", r.accepted},
                               {"extracted", r.extracted},
                               {"exact_witness", r.exact_witness},
                               {"forced_continues", r.forced_continues},
                               {"attempts", hist},
                               {"fit_chi2", fit.statistic},
                               {"fit_p", fit.p_value}});
        res.criteria.push_back(Criterion::le("extraction_gap[" + r.prover + "]", r.gap(), max_gap));
        if (provers[k].kind == PokProverStrategy::Honest)
            res.criteria.push_back(Criterion::eq("exact_witness_misses[" + r.prover + "]", static_cast<double>(r.extracted - r.exact_witness), 0));
        res.criteria.push_back(Criterion::ge("attempts_fit_p[" + r.prover + "]", fit.p_value, alpha));
    }
    res.trials = c.trials;
}

// --- ot-privacy -----------------------------------------------------------

inline void run_ot_privacy(const ExperimentConfig &c, unsigned workers, ExperimentResult &res) {
    const std::string S = "ot-privacy";
    const auto lambda = c.u64(S, "lambda");
    const auto sender_trials = c.u64(S, "sender_trials");
    const double max_tv = c.real(S, "max_tv"), max_adv = c.real(S, "max_advantage");
    res.profile = "srot(lambda=" + std::to_string(lambda) + ")";
    if (lambda < 1) throw ConfigError("config: [ot-privacy] lambda: must be >= 1");

    std::uint64_t wrong = 0, checked = 0;
    for (auto l : c.u64_list(S, "exhaustive_lambdas")) {
        for (std::uint8_t beta = 0; beta < 2; ++beta)
            for (std::uint8_t m0 = 0; m0 < 2; ++m0)
                for (std::uint8_t m1 = 0; m1 < 2; ++m1) {
                    Rng rng(derive_seed(c.seed, l * 8 + beta * 4 + m0 * 2 + m1));
                    auto out = srot_run(m0, m1, beta, l, rng);
                    ++checked;
                    wrong += !out.output || *out.output != (beta ? m1 : m0);
                }
    }
    res.records.push_back({{"type", "correctness"}, {"cases", checked}, {"wrong", wrong}});
    res.criteria.push_back(Criterion::eq("correctness_failures", static_cast<double>(wrong), 0));

    const Rational exact = receiver_privacy_tv_exact(2);
    const Rational f(1, 4);
    res.records.push_back({{"type", "exact_tv"}, {"lambda", 2}, {"tv", rational_str(exact)}});
    res.criteria.push_back(Criterion::eq("exact_tv_lambda2_matches_formula", exact == f + f / 2 - f * f / 2 ? 1 : 0, 1));

    auto e = receiver_privacy_tv_sampled(lambda, c.trials / 2, derive_seed(c.seed, 1), workers);
    Json counts = Json::array();
    for (auto &row : e.counts) counts.push_back(Json(row));
    res.records.push_back({{"type", "sampled_tv"}, {"lambda", lambda}, {"trials_per_beta", e.trials}, {"tv", e.tv}, {"counts", counts}});
    res.criteria.push_back(Criterion::le("sampled_tv", e.tv, max_tv));

    for (std::uint8_t beta = 0; beta < 2; ++beta) {
        auto sp = sender_privacy_game(SrotReceiverStrategy::honest(beta), 0, 1, lambda, sender_trials, derive_seed(c.seed, 2 + beta));
        res.records.push_back({{"type", "sender_privacy"},
                               {"beta", beta},
                               {"trials", sp.trials},
                               {"completed", sp.completed},
                               {"aborted", sp.aborted},
                               {"p0_hat", sp.p0_hat},
                               {"p1_hat", sp.p1_hat},
                               {"advantage", sp.advantage}});
        res.criteria.push_back(Criterion::le("sender_advantage[beta=" + std::to_string(beta) + "]", sp.advantage, max_adv));
    }
    res.trials = c.trials;
}

// --- coinflip -------------------------------------------------------------

inline void run_coinflip(const ExperimentConfig &c, unsigned workers, ExperimentResult &res) {
    const std::string S = "coinflip";
    const double lo = c.real(S, "low"), hi = c.real(S, "high");
    const auto forcing_runs = c.u64(S, "forcing_runs");
    res.profile = "coinflip(n=" + std::to_string(kCoinflipSeedBits) + ")";
    auto f = coinflip_frequency(CoinflipP1::honest(), CoinflipP2::honest(), c.trials, c.seed, workers);
    res.records.push_back({{"type", "honest"}, {"runs", f.runs}, {"ones", f.ones}, {"aborts", f.aborts}, {"frequency", f.frequency()}});
    res.criteria.push_back(Criterion::ge("honest_frequency_low", f.frequency(), lo));
    res.criteria.push_back(Criterion::le("honest_frequency_high", f.frequency(), hi));
    res.criteria.push_back(Criterion::eq("honest_aborts", static_cast<double>(f.aborts), 0));
    auto suite = coinflip_p2_suite();
    for (std::size_t k = 0; k < suite.size(); ++k) {
        auto r = coinflip_forcing(suite[k], forcing_runs, derive_seed(c.seed, 100 + k), workers);
        res.records.push_back({{"type", "forcing"}, {"p2", suite[k].name()}, {"runs", r.runs}, {"forced", r.forced}, {"aborts", r.aborts}});
        res.criteria.push_back(Criterion::eq("forcing_misses[" + suite[k].name() + "]", static_cast<double>(r.runs - r.forced), 0));
    }
    res.trials = c.trials;
}

// --- watrous --------------------------------------------------------------

inline void run_watrous(const ExperimentConfig &c, unsigned, ExperimentResult &res) {
    using namespace quantum;
    const std::string S = "watrous";
    const double p0 = c.real(S, "p0");
    const auto eps_log2 = c.u64(S, "eps_log2");
    const auto states = c.u64(S, "states_per_circuit");
    const auto max_qubits = c.u64(S, "max_qubits");
    if (eps_log2 < 2 || eps_log2 > 60) throw ConfigError("config: [watrous] eps_log2: must lie in 2..60");
    if (max_qubits < 2 || max_qubits > 10) throw ConfigError("config: [watrous] max_qubits: must lie in 2..10");
    const double eps = std::ldexp(1.0, -static_cast<int>(eps_log2));
    res.profile = "watrous(p0=" + fmt(p0) + ";eps=2^-" + std::to_string(eps_log2) + ")";
    Rng rng(c.seed);
    double worst = 2, bound = 0;
    for (std::uint64_t i = 0; i < c.trials; ++i) {
        std::size_t n = 1 + rng.uniform(max_qubits - 1);
        std::size_t k = 1 + rng.uniform(max_qubits - n);
        auto sc = random_suite_circuit(n, k, eps, rng);
        auto a = c.field(S, "p0", [&](auto &) { return watrous_amplify(sc.q, n, p0, eps); });
        bound = a.bound();
        for (std::uint64_t j = 0; j < states; ++j) {
            auto psi = StateVector::random(n, rng);
            auto r = a.run(psi);
            worst = std::min(worst, r.fidelity);
            res.records.push_back({{"type", "amplify"},
                                   {"circuit", i},
                                   {"state", j},
                                   {"n", n},
                                   {"k", k},
                                   {"gates", sc.q.gates().size()},
                                   {"p_psi", r.initial_success},
                                   {"rounds", a.rounds()},
                                   {"fidelity", r.fidelity},
                                   {"bound", bound}});
        }
    }
    res.criteria.push_back(Criterion::ge("min_fidelity", worst, bound));
    res.trials = c.trials;
}

// --- cloning-attack -------------------------------------------------------

inline void run_cloning(const ExperimentConfig &c, unsigned workers, ExperimentResult &res) {
    using namespace quantum;
    const std::string S = "cloning-attack";
    const auto n = c.u64(S, "n");
    const auto witnesses = c.u64(S, "witnesses");
    const auto rec_max = c.u64(S, "recurrence_max_n");
    const double min_success = c.real(S, "min_success");
    if (n < 1 || n > kMaxWitnessBits) throw ConfigError("config: [cloning-attack] n: must lie in 1..12");
    if (witnesses < 1 || witnesses > (1u << n)) throw ConfigError("config: [cloning-attack] witnesses: must lie in 1..2^n");
    if (rec_max > 8) throw ConfigError("config: [cloning-attack] recurrence_max_n: at most 8");
    res.profile = "cloning(n=" + std::to_string(n) + ";witnesses=" + std::to_string(witnesses) + ")";

    // Recurrence exactness over every witness count, witnesses at the low indices.
    double worst = 0;
    Rng rrng(derive_seed(c.seed, 1));
    for (std::uint64_t m = 1; m <= rec_max; ++m) {
        for (std::uint64_t w = 0; w <= (1u << m); ++w) {
            std::vector<std::uint64_t> ws;
            for (std::uint64_t y = 0; y < w; ++y) ws.push_back(y);
            auto x = instance_with_witnesses(m, ws);
            auto tr = cloning_attack(truth_table_oracle(x, m), x, m, rrng, 64);
            const double eps = static_cast<double>(w) / static_cast<double>(1u << m);
            for (std::size_t i = 0; i < tr.iterations.size(); ++i)
                worst = std::max(worst, std::abs(tr.iterations[i].delta - closed_form_delta(eps, i + 1).delta));
        }
    }
    res.records.push_back({{"type", "recurrence"}, {"max_n", rec_max}, {"max_abs_error", worst}});
    res.criteria.push_back(Criterion::le("recurrence_max_error", worst, 1e-9));

    std::vector<std::uint64_t> ws;
    for (std::uint64_t y = 0; y < witnesses; ++y) ws.push_back((y * 0x9e3779b1u + 3) % (1u << n));
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    for (std::uint64_t y = 0; ws.size() < witnesses; ++y)
        if (!std::binary_search(ws.begin(), ws.end(), y)) ws.insert(std::lower_bound(ws.begin(), ws.end(), y), y);
    const auto x = instance_with_witnesses(n, ws);
    const auto circuit = truth_table_oracle(x, n);
    auto outs = parallel_trials(c.trials, workers, [&](std::uint64_t i) {
        Rng rng(derive_seed(c.seed, 1000 + i));
        auto tr = cloning_attack(circuit, x, n, rng);
        return std::make_pair(static_cast<int>(tr.outcome), tr.y ? static_cast<std::int64_t>(*tr.y) : -1);
    });
    std::uint64_t ok = 0;
    std::map<std::string, std::uint64_t> by;
    for (std::uint64_t i = 0; i < outs.size(); ++i) {
        auto o = static_cast<AttackTrace::Outcome>(outs[i].first);
        ok += o == AttackTrace::Witness;
        ++by[AttackTrace::name(o)];
        res.records.push_back({{"type", "attack"}, {"run", i}, {"outcome", AttackTrace::name(o)}, {"y", outs[i].second}});
    }
    const double rate = static_cast<double>(ok) / static_cast<double>(c.trials);
    res.records.push_back({{"type", "attack_summary"}, {"runs", c.trials}, {"outcomes", by}, {"success_rate", rate}});
    res.criteria.push_back(Criterion::ge("success_rate", rate, min_success));

    const Rational eps(static_cast<long long>(witnesses), BigInt(1) << n);
    const auto cf = closed_form_delta_exact(eps, n);
    res.records.push_back({{"type", "closed_form"}, {"delta_n", rational_str(cf.delta)}, {"prod_alpha", rational_str(cf.prod_alpha)}});
    std::uint64_t over = 0;
    for (std::size_t m = 1; m <= kMaxWitnessBits; ++m)
        over += closed_form_delta_exact(Rational(1, BigInt(1) << m), m).delta > Rational(2, 3);
    res.criteria.push_back(Criterion::eq("one_witness_delta_over_two_thirds", static_cast<double>(over), 0));
    res.trials = c.trials;
}

// --- bound-check ----------------------------------------------------------

inline void run_bound_check(const ExperimentConfig &c, unsigned, ExperimentResult &res) {
    const std::string S = "bound-check";
    const auto qm = c.u64(S, "q_max"), lm = c.u64(S, "lambda_max");
    if (qm < 1 || lm < 1) throw ConfigError("config: [bound-check]: q_max and lambda_max must be >= 1");
    std::uint64_t bad = 0, n = 0;
    for (auto &b : check_claim_bounds(grid(qm, lm))) {
        ++n;
        bad += !b.holds();
        res.records.push_back({{"type", "bound"},
                               {"q", b.q},
                               {"lambda", b.lambda},
                               {"mu_lower", rational_str(b.mu_lower)},
                               {"six_q5_lambda", b.six_q5_lambda.str()},
                               {"holds", b.holds()}});
    }
    res.profile = "paper(grid=" + std::to_string(qm) + "x" + std::to_string(lm) + ")";
    res.criteria.push_back(Criterion::eq("bound_failures", static_cast<double>(bad), 0));
    res.trials = n;
}

inline const std::map<std::string, ExperimentSpec> &experiments() {
    static const std::map<std::string, ExperimentSpec> m{
        {"bczk-sim",
         {{"adversaries", "retry_cap", "success_adversary", "min_success", "rewind_tolerance", "pairwise_tolerance"}, true, true, run_bczk_sim}},
        {"soundness", {{"grid", "strategy"}, true, true, run_soundness}},
        {"pok-extract", {{"witness_bits", "lambda", "retry_cap", "provers", "max_gap", "fit_alpha"}, false, true, run_pok_extract}},
        {"ot-privacy", {{"lambda", "exhaustive_lambdas", "max_tv", "sender_trials", "max_advantage"}, false, true, run_ot_privacy}},
        {"coinflip", {{"low", "high", "forcing_runs"}, false, true, run_coinflip}},
        {"watrous", {{"p0", "eps_log2", "states_per_circuit", "max_qubits"}, false, true, run_watrous}},
        {"cloning-attack", {{"n", "witnesses", "recurrence_max_n", "min_success"}, false, true, run_cloning}},
        {"bound-check", {{"q_max", "lambda_max"}, false, false, run_bound_check}},
    };
    return m;
}

}  // namespace detail

inline std::vector<std::string> experiment_ids() {
    std::vector<std::string> out;
    for (auto &[k, v] : detail::experiments()) out.push_back(k);
    return out;
}

/// Parses and validates INI text. Overrides for seed and trials are applied
/// by the caller before running.
inline ExperimentConfig parse_experiment_config(const std::string &text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    for (auto &[sec, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ConfigError("config: key '" + sec + "' outside any section");
        for (auto &[k, v] : body) c.sections[sec][k] = v.data();
    }
    c.id = c.raw("experiment", "id");
    auto it = detail::experiments().find(c.id);
    if (it == detail::experiments().end()) throw ConfigError("config: [experiment] id: unknown experiment '" + c.id + "'");
    const auto &spec = it->second;

    std::map<std::string, std::set<std::string>> allowed;
    allowed["experiment"] = spec.trials ? std::set<std::string>{"id", "seed", "trials"} : std::set<std::string>{"id", "seed"};
    allowed[c.id] = spec.keys;
    if (spec.profile) allowed["profile"] = detail::profile_keys(c.raw("profile", "kind"));
    for (auto &[sec, keys] : c.sections) {
        auto a = allowed.find(sec);
        if (a == allowed.end()) throw ConfigError("config: unknown section [" + sec + "]");
        for (auto &[k, v] : keys)
            if (!a->second.count(k)) throw ConfigError("config: [" + sec + "] " + k + ": unknown key");
    }
    for (auto &[sec, keys] : allowed)
        for (auto &k : keys) c.raw(sec, k);

    c.seed = c.u64("experiment", "seed");
    if (spec.trials) {
        c.trials = c.u64("experiment", "trials");
        if (c.trials == 0) throw ConfigError("config: [experiment] trials: must be >= 1");
    }
    return c;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

inline ExperimentResult run_experiment(const ExperimentConfig &c, unsigned workers = 1) {
    auto it = detail::experiments().find(c.id);
    if (it == detail::experiments().end()) throw ConfigError("unknown experiment '" + c.id + "'");
    ExperimentResult res;
    Json params = Json::object();
    for (auto &[sec, keys] : c.sections)
        for (auto &[k, v] : keys) params[sec][k] = v;
    params["experiment"]["seed"] = std::to_string(c.seed);
    if (it->second.trials) params["experiment"]["trials"] = std::to_string(c.trials);
    res.records.push_back({{"type", "config"}, {"experiment", c.id}, {"seed", c.seed}, {"params", params}});
    it->second.run(c, std::max(1u, workers), res);
    return res;
}

inline std::string summary_csv(const ExperimentConfig &c, const ExperimentResult &r) {
    std::ostringstream os;
    os << "experiment,profile,seed,trials,criterion,value,relation,threshold,pass\n";
    for (auto &k : r.criteria) {
        os << c.id << ',' << r.profile << ',' << c.seed << ',' << r.trials << ',' << k.name << ',' << detail::fmt(k.value) << ','
           << k.relation << ',' << detail::fmt(k.threshold) << ',' << (k.pass ? "pass" : "fail") << '\n';
    }
    return os.str();
}

/// Writes results.jsonl and summary.csv under `dir`.
inline void write_experiment_outputs(const ExperimentConfig &c, const ExperimentResult &r, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    std::ofstream jl(dir / "results.jsonl", std::ios::binary);
    for (auto &rec : r.records) jl << rec.dump() << '\n';
    std::ofstream cs(dir / "summary.csv", std::ios::binary);
    cs << summary_csv(c, r);
    if (!jl || !cs) throw std::runtime_error("cannot write outputs under " + dir.string());
}

}  // namespace bcqzk
