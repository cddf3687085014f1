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

// Proof of knowledge by secret-shared witness bits. Each witness bit w_i is
// split into lambda shares; cell (i,j) is one SSOT where the prover sends
// (share, mask) or (mask, share) by a location bit b it then reveals. The
// honest verifier always asks for position 0. A proof token for RZkPok
// closes the session.
//
// Rounds per session with L = bits * lambda cells, k = 0..L-1:
//   2k+1  V  ot1 (32 bytes)
//   2k+2  P  ot2 || b (33 bytes)
//   2L+1  V  16-byte filler
//   2L+2  P  token (34 bytes)
//
// The extractor asks for a uniform position instead and rewinds the whole
// world to the checkpoint before a cell until the position matches b.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bcqzk/base_relation.hpp"
#include "bcqzk/core/parallel.hpp"
#include "bcqzk/core/stats.hpp"
#include "bcqzk/params.hpp"
#include "bcqzk/proof_backends.hpp"
#include "bcqzk/session_engine.hpp"
#include "bcqzk/ssot.hpp"

namespace bcqzk {

/// Rounds of one OT inside the PoK, the M of the threshold adjustment.
constexpr std::uint64_t kPokOtRounds = 2;

struct PokConfig {
    std::size_t witness_bits = 8;
    std::size_t lambda = 4;
    std::uint64_t retry_cap = 40;

    std::size_t cells() const {
        return witness_bits * lambda;
    }
    std::uint32_t prot_len() const {
        return static_cast<std::uint32_t>(2 * cells() + 2);
    }
    void validate() const {
        if (witness_bits < 1) throw ValidationError("pok: witness_bits >= 1 violated");
        if (lambda < 1) throw ValidationError("pok: lambda >= 1 violated");
        if (retry_cap < 1) throw ValidationError("pok: retry_cap >= 1 violated");
    }
};

struct PokProverStrategy {
    enum Kind { Honest, DeterministicHonest, Aborter, ShareCorruptor, ZeroWitness, BitLeaker, BetaRecorder } kind = Honest;
    double p_abort = 0;
    std::size_t corrupt = 0;

    static PokProverStrategy honest() {
        return {};
    }
    /// Fixed coin tape and fixed instance.
    static PokProverStrategy deterministic_honest() {
        return {DeterministicHonest, 0, 0};
    }
    static PokProverStrategy aborter(double p) {
        if (p < 0 || p > 1) throw ValidationError("abort probability outside [0,1]");
        return {Aborter, p, 0};
    }
    /// Flips the first share of rows 0..k-1.
    static PokProverStrategy share_corruptor(std::size_t k) {
        if (k < 1) throw ValidationError("share corruptor needs k >= 1");
        return {ShareCorruptor, 0, k};
    }
    static PokProverStrategy zero_witness() {
        return {ZeroWitness, 0, 0};
    }
    /// Chooses b after seeing the receiver bit (through the harness tap).
    static PokProverStrategy bit_leaker() {
        return {BitLeaker, 0, 0};
    }
    /// Keeps every first message it saw in its state.
    static PokProverStrategy beta_recorder() {
        return {BetaRecorder, 0, 0};
    }

    std::string name() const {
        switch (kind) {
            case Honest: return "Honest";
            case DeterministicHonest: return "DeterministicHonest";
            case Aborter: return "Aborter(" + format_double(p_abort) + ")";
            case ShareCorruptor: return "ShareCorruptor(" + std::to_string(corrupt) + ")";
            case ZeroWitness: return "ZeroWitness";
            case BitLeaker: return "BitLeaker";
            case BetaRecorder: return "BetaRecorder";
        }
        return "?";
    }

   private:
    static std::string format_double(double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    }
};

inline PokProverStrategy parse_pok_prover(const std::string &s) {
    if (s == "Honest") return PokProverStrategy::honest();
    if (s == "DeterministicHonest") return PokProverStrategy::deterministic_honest();
    if (s == "ZeroWitness") return PokProverStrategy::zero_witness();
    if (s == "BitLeaker") return PokProverStrategy::bit_leaker();
    if (s == "BetaRecorder") return PokProverStrategy::beta_recorder();
    auto arg = [&](const std::string &head) -> std::optional<std::string> {
        if (s.rfind(head + "(", 0) != 0 || s.back() != ')') return std::nullopt;
        return s.substr(head.size() + 1, s.size() - head.size() - 2);
    };
    try {
        if (auto a = arg("Aborter")) return PokProverStrategy::aborter(std::stod(*a));
        if (auto a = arg("ShareCorruptor")) return PokProverStrategy::share_corruptor(std::stoul(*a));
    } catch (const std::logic_error &) {
        throw ValidationError("bad prover argument: " + s);
    }
    throw ValidationError("unknown prover strategy: " + s);
}

/// Resources shared by both sides of one trial.
struct PokSetup {
    PokConfig cfg;
    std::vector<std::shared_ptr<const SubsetSumPair>> statements;  // one per session
    std::shared_ptr<SsotFunctionality> ssot = std::make_shared<SsotFunctionality>();
    std::shared_ptr<IdealBackend> backend = std::make_shared<IdealBackend>();
};

namespace detail {

constexpr std::uint64_t kDeterministicTape = 0x5eed;

inline std::uint64_t pok_tape_seed(const PokProverStrategy &s, std::uint64_t seed, std::uint32_t session) {
    return s.kind == PokProverStrategy::DeterministicHonest ? kDeterministicTape : derive_seed(seed, 100 + session);
}

inline bool pok_cell_round(std::uint32_t round, const PokConfig &c) {
    return round % 2 == 1 && round < 2 * c.cells();
}

}  // namespace detail

/// Prover for one session. All of its randomness lives on its own tape, so
/// a copy is a complete checkpoint.
class PokProver {
   public:
    PokProver(const PokSetup &setup, std::uint32_t session, PokProverStrategy strategy, std::uint64_t tape_seed)
        : cfg_(setup.cfg),
          stmt_(setup.statements.at(session - 1)),
          ssot_(setup.ssot),
          backend_(setup.backend),
          strategy_(strategy),
          tape_(tape_seed),
          acc_(cfg_.witness_bits, 0) {
    }

    bool replies_to(std::uint32_t round) const {
        return round % 2 == 1 && round <= 2 * cfg_.cells() + 1;
    }
    bool finished() const {
        return done_;
    }

    PartyReply receive(std::uint32_t round, const Bytes &body, Rng &) {
        if (round == 2 * cfg_.cells() + 1) return prove();
        const std::size_t k = (round - 1) / 2;
        if (body.size() != 32) throw LengthError("pok: ot1 must be 32 bytes");
        Digest ot1{};
        std::copy(body.begin(), body.end(), ot1.begin());
        const std::size_t i = k / cfg_.lambda, j = k % cfg_.lambda;
        const std::uint8_t wbit = strategy_.kind == PokProverStrategy::ZeroWitness ? 0 : stmt_->w[i];

        CellWitness cw;
        cw.share = j + 1 == cfg_.lambda ? static_cast<std::uint8_t>(acc_[i] ^ wbit) : tape_.bit();
        acc_[i] ^= cw.share;
        if (strategy_.kind == PokProverStrategy::ShareCorruptor && j == 0 && i < strategy_.corrupt) cw.share ^= 1;
        cw.mask = tape_.bit();
        std::uint8_t b = tape_.bit();
        cw.sender_coins = BitString::random(16, tape_);
        if (strategy_.kind == PokProverStrategy::BitLeaker) b = ssot_->extract_receiver_bit(ot1) ^ 1;
        if (strategy_.kind == PokProverStrategy::BetaRecorder) recorded_.push_back(ot1[0]);

        CellStatement st;
        st.location = b;
        st.transcript.ot1 = ot1;
        const std::uint8_t m0 = b ? cw.mask : cw.share;
        const std::uint8_t m1 = b ? cw.share : cw.mask;
        st.transcript.ot2 = ssot_->second_message(ot1, m0, m1, cw.sender_coins);
        if (grid_.size() <= i) {
            grid_.emplace_back();
            wgrid_.emplace_back();
        }
        grid_[i].push_back(st);
        wgrid_[i].push_back(cw);

        Bytes out(st.transcript.ot2.begin(), st.transcript.ot2.end());
        out.push_back(b);
        return PartyReply::reply(std::move(out));
    }

    const CellGrid &grid() const {
        return grid_;
    }
    const CellWitnessGrid &witness_grid() const {
        return wgrid_;
    }
    bool aborted() const {
        return aborted_;
    }

    /// Bytes standing for the prover's whole classical state: cell choices,
    /// flags, recorded values and the position of its tape.
    Bytes state_bytes() const {
        FieldWriter f;
        for (auto &row : wgrid_)
            for (auto &c : row) f.byte(c.share).byte(c.mask).field(c.sender_coins.bytes());
        for (auto &row : grid_)
            for (auto &c : row) f.byte(c.location);
        f.byte(aborted_ ? 1 : 0).byte(done_ ? 1 : 0);
        f.u64(recorded_.size());
        for (auto v : recorded_) f.byte(v);
        Rng probe = tape_;
        f.u64(probe.next_u64());
        auto d = f.digest();
        return Bytes(d.begin(), d.end());
    }

   private:
    PartyReply prove() {
        done_ = true;
        if (strategy_.kind == PokProverStrategy::Aborter && tape_.bernoulli(strategy_.p_abort)) {
            aborted_ = true;
            return PartyReply::abort();
        }
        ZkPokInstance x{stmt_->x, grid_};
        ZkPokWitness w;
        w.w = strategy_.kind == PokProverStrategy::ZeroWitness ? BitString(cfg_.witness_bits) : stmt_->w;
        w.cells = wgrid_;
        auto t = backend_->prove<ZkPok>(x, w).serialize();
        return PartyReply::reply(std::move(t));
    }

    PokConfig cfg_;
    std::shared_ptr<const SubsetSumPair> stmt_;
    std::shared_ptr<SsotFunctionality> ssot_;
    std::shared_ptr<IdealBackend> backend_;
    PokProverStrategy strategy_;
    Rng tape_;
    std::vector<std::uint8_t> acc_;
    CellGrid grid_;
    CellWitnessGrid wgrid_;
    std::vector<std::uint8_t> recorded_;
    bool aborted_ = false;
    bool done_ = false;
};

static_assert(SessionParty<PokProver>);

/// What the driver saw in the reply to one cell request.
struct CellOutcome {
    std::uint32_t session = 0;
    std::size_t cell = 0;
    std::uint8_t beta = 0;
    std::uint8_t b = 0;
    std::uint8_t received = 0;
};

/// Q-session verifier. With a beta source it is the extractor's front end;
/// the source is shared across copies so a rewind still draws fresh bits.
class PokDriver {
   public:
    struct Session {
        std::uint32_t next_round = 1;
        bool awaiting = false;
        bool done = false;
        bool accepted = false;
        bool aborted = false;
        std::uint8_t beta = 0;
        Digest ot1{};
        CellGrid grid;
        std::vector<std::uint8_t> received;
    };

    PokDriver(const PokSetup &setup, Scheduler sched, std::uint64_t seed, std::shared_ptr<Rng> beta_source = nullptr)
        : cfg_(setup.cfg),
          statements_(setup.statements),
          ssot_(setup.ssot),
          backend_(setup.backend),
          beta_source_(std::move(beta_source)),
          sched_(sched),
          msgs_(seed),
          sessions_(setup.statements.size()) {
    }

    std::optional<BundledMessage> next() {
        std::vector<std::uint32_t> ready;
        for (std::uint32_t s = 1; s <= sessions_.size(); ++s) {
            auto &v = sessions_[s - 1];
            if (!v.done && !v.awaiting) ready.push_back(s);
        }
        if (ready.empty()) return std::nullopt;
        const std::uint32_t s = sched_.pick(ready).session;
        auto &v = sessions_[s - 1];
        Bytes body;
        if (detail::pok_cell_round(v.next_round, cfg_)) {
            v.beta = beta_source_ ? beta_source_->bit() : 0;
            v.ot1 = ssot_->first_message(v.beta, msgs_);
            body.assign(v.ot1.begin(), v.ot1.end());
        } else {
            body.resize(16);
            for (auto &x : body) x = static_cast<std::uint8_t>(msgs_.next_u64());
        }
        v.awaiting = true;
        const std::uint32_t round = v.next_round;
        return BundledMessage::single(static_cast<std::uint32_t>(sessions_.size()), s, round, std::move(body));
    }

    void observe(const BundledMessage &reply) {
        for (auto &e : reply.entries) {
            auto &v = sessions_[e.session - 1];
            if (std::holds_alternative<Bottom>(e.payload)) {
                v.aborted = v.done = true;
                v.awaiting = false;
                continue;
            }
            if (!std::holds_alternative<Live>(e.payload)) continue;
            const auto &m = std::get<Live>(e.payload);
            v.awaiting = false;
            v.next_round = m.round + 1;
            if (m.round == cfg_.prot_len()) {
                v.done = true;
                auto t = ProofToken::parse(m.body);
                ZkPokInstance x{statements_[e.session - 1]->x, v.grid};
                v.accepted = backend_->verify<ZkPok>(x, t);
                continue;
            }
            if (m.body.size() != 33) throw LengthError("pok: cell reply must be 33 bytes");
            CellStatement st;
            st.transcript.ot1 = v.ot1;
            std::copy(m.body.begin(), m.body.begin() + 32, st.transcript.ot2.begin());
            st.location = m.body[32] & 1;
            const std::size_t k = (m.round - 2) / 2;
            if (k % cfg_.lambda == 0) v.grid.emplace_back();
            v.grid.back().push_back(st);
            v.received.push_back(ssot_->output(v.ot1));
            last_ = CellOutcome{e.session, k, v.beta, st.location, v.received.back()};
        }
    }

    void on_message(const TranscriptMessage &) {
    }

    const Session &session(std::uint32_t id) const {
        return sessions_.at(id - 1);
    }
    std::optional<CellOutcome> take_last() {
        auto r = last_;
        last_.reset();
        return r;
    }

   private:
    PokConfig cfg_;
    std::vector<std::shared_ptr<const SubsetSumPair>> statements_;
    std::shared_ptr<SsotFunctionality> ssot_;
    std::shared_ptr<IdealBackend> backend_;
    std::shared_ptr<Rng> beta_source_;
    SchedulerState sched_;
    Rng msgs_;
    std::vector<Session> sessions_;
    std::optional<CellOutcome> last_;
};

static_assert(ConcurrentDriver<PokDriver>);

using PokWorld = World<PokProver, PokDriver>;

/// Statements for `q` sessions. Each is a planted subset-sum instance
/// drawn from the session's prover tape seed, so a fixed-tape prover also
/// has a fixed instance. Planted witnesses are nonzero.
inline PokSetup pok_setup(const PokConfig &cfg, const PokProverStrategy &s, std::uint32_t q, std::uint64_t seed) {
    cfg.validate();
    PokSetup setup;
    setup.cfg = cfg;
    for (std::uint32_t i = 1; i <= q; ++i) {
        Rng rng(derive_seed(detail::pok_tape_seed(s, seed, i), 7));
        // A zero witness would make the 0-sharing prover honest.
        auto pair = planted_subset_sum(cfg.witness_bits, rng);
        while (pair.w.popcount() == 0) pair = planted_subset_sum(cfg.witness_bits, rng);
        setup.statements.push_back(std::make_shared<const SubsetSumPair>(std::move(pair)));
    }
    return setup;
}

inline PokWorld make_pok_world(const PokSetup &setup, const PokProverStrategy &s, Scheduler sched, std::uint64_t seed,
                               std::shared_ptr<Rng> beta_source = nullptr) {
    std::vector<PokProver> provers;
    for (std::uint32_t i = 1; i <= setup.statements.size(); ++i)
        provers.emplace_back(setup, i, s, detail::pok_tape_seed(s, seed, i));
    return PokWorld(Engine<PokProver>(std::move(provers)), PokDriver(setup, sched, derive_seed(seed, 3), std::move(beta_source)));
}

struct PokRunResult {
    TranscriptSet transcript;
    std::vector<bool> accepted;  // per session
    PokWorld world;

    bool accept() const {
        return std::all_of(accepted.begin(), accepted.end(), [](bool a) { return a; });
    }
};

/// Honest-verifier execution of q sessions.
inline PokRunResult pok_run(const PokConfig &cfg, const PokProverStrategy &s, std::uint64_t seed, std::uint32_t q = 1,
                            Scheduler sched = Scheduler::round_robin()) {
    auto setup = pok_setup(cfg, s, q, seed);
    auto world = make_pok_world(setup, s, sched, seed);
    Rng unused(0);
    auto t = run(world, unused, static_cast<std::uint64_t>(cfg.prot_len()) * q * 2, seed);
    std::vector<bool> acc;
    for (std::uint32_t i = 1; i <= q; ++i) acc.push_back(world.driver().session(i).accepted);
    return {std::move(t), std::move(acc), std::move(world)};
}

struct CellExtraction {
    std::uint8_t beta = 0;  // extractor bit on the kept attempt
    std::uint64_t attempts = 0;
    bool matched = false;
    std::uint8_t share = 0;
};

struct ExtractionRecord {
    std::size_t witness_bits = 0, lambda = 0;
    std::vector<CellExtraction> cells;  // row-major
    bool accepted = false;
    std::uint64_t forced_continues = 0;
    std::optional<BitString> witness;  // recovered and in the relation

    bool all_matched() const {
        return std::all_of(cells.begin(), cells.end(), [](const CellExtraction &c) { return c.matched; });
    }
    /// XOR of each row of recovered shares.
    BitString reconstructed() const {
        BitString w(witness_bits);
        for (std::size_t i = 0; i < witness_bits; ++i) {
            std::uint8_t acc = 0;
            for (std::size_t j = 0; j < lambda; ++j) acc ^= cells[i * lambda + j].share;
            w.set(i, acc);
        }
        return w;
    }
    bool success() const {
        return witness.has_value();
    }

    std::map<std::string, std::string> to_record() const {
        std::map<std::string, std::string> r;
        std::string betas, attempts, matched;
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) attempts += ' ';
            betas += static_cast<char>('0' + cells[k].beta);
            attempts += std::to_string(cells[k].attempts);
            matched += cells[k].matched ? '1' : '0';
        }
        r["betas"] = betas;
        r["attempts"] = attempts;
        r["matched"] = matched;
        r["accepted"] = accepted ? "1" : "0";
        r["forced_continues"] = std::to_string(forced_continues);
        r["witness"] = witness ? witness->hex() : "-";
        return r;
    }
};

struct ExtractionResult {
    std::vector<ExtractionRecord> sessions;
    TranscriptSet transcript;  // the kept pass only
    PokWorld world;
};

/// Runs the rewinding extractor against q sessions at once.
inline ExtractionResult extract(const PokConfig &cfg, const PokProverStrategy &s, std::uint64_t seed, std::uint32_t q = 1,
                                Scheduler sched = Scheduler::round_robin()) {
    auto setup = pok_setup(cfg, s, q, seed);
    auto betas = std::make_shared<Rng>(derive_seed(seed, 4));
    PokWorld world = make_pok_world(setup, s, sched, seed, betas);
    std::vector<ExtractionRecord> recs(q);
    for (auto &r : recs) {
        r.witness_bits = cfg.witness_bits;
        r.lambda = cfg.lambda;
        r.cells.resize(cfg.cells());
    }
    TranscriptSet t;
    t.q = q;
    t.seed = seed;
    Rng unused(0);
    const std::uint64_t budget = static_cast<std::uint64_t>(cfg.prot_len()) * q * 2;
    for (;;) {
        if (world.engine().steps() > budget) throw StallError("pok extraction step budget exceeded");
        PokWorld checkpoint = world;
        const std::size_t mark = t.order.size();
        auto a = world.advance(unused, t.order);
        if (a == PokWorld::Advance::Done) break;
        if (!world.engine().has_pending()) continue;
        const bool cell = t.order.size() > mark && detail::pok_cell_round(t.order.back().round, cfg);
        world.advance(unused, t.order);
        auto out = world.driver().take_last();
        if (!cell || !out) continue;
        auto &c = recs[out->session - 1].cells[out->cell];
        ++c.attempts;
        c.beta = out->beta;
        if (out->beta == out->b) {
            c.matched = true;
            c.share = out->received;
        } else if (c.attempts < cfg.retry_cap) {
            world = std::move(checkpoint);
            t.order.resize(mark);
        } else {
            ++recs[out->session - 1].forced_continues;
        }
    }
    t.status = world.engine().statuses();
    t.deviations = world.engine().deviations();
    for (std::uint32_t i = 1; i <= q; ++i) {
        auto &r = recs[i - 1];
        r.accepted = world.driver().session(i).accepted;
        if (r.accepted && r.all_matched()) {
            BitString w = r.reconstructed();
            if (SubsetSum::holds(setup.statements[i - 1]->x, w)) r.witness = w;
        }
    }
    return {std::move(recs), std::move(t), std::move(world)};
}

// ---------------------------------------------------------------------------
// Monte Carlo harnesses.

struct ExtractabilityReport {
    std::string prover;
    std::uint64_t trials = 0;
    std::uint64_t accepted = 0;       // honest-verifier runs
    std::uint64_t extracted = 0;      // extraction runs with a witness
    std::uint64_t exact_witness = 0;  // extracted witness equals the planted one
    std::uint64_t forced_continues = 0;
    std::map<std::uint64_t, std::uint64_t> attempts;  // per-cell histogram

    double acceptance_rate() const {
        return trials ? static_cast<double>(accepted) / static_cast<double>(trials) : 0;
    }
    double extraction_rate() const {
        return trials ? static_cast<double>(extracted) / static_cast<double>(trials) : 0;
    }
    double gap() const {
        return std::abs(extraction_rate() - acceptance_rate());
    }
    /// Chi-square of per-cell attempts against Geometric(1/2), lumping the
    /// tail from `lump` on.
    ChiSquare attempts_fit(std::uint64_t lump = 8) const {
        std::vector<double> obs, probs;
        double total = 0;
        for (auto &[k, n] : attempts) total += static_cast<double>(n);
        double tail = total;
        for (std::uint64_t k = 1; k < lump; ++k) {
            auto it = attempts.find(k);
            double n = it == attempts.end() ? 0 : static_cast<double>(it->second);
            obs.push_back(n);
            probs.push_back(std::ldexp(1.0, -static_cast<int>(k)));
            tail -= n;
        }
        obs.push_back(tail);
        probs.push_back(std::ldexp(1.0, -static_cast<int>(lump - 1)));
        return chi_square_gof(obs, probs);
    }
};

/// Acceptance and extraction measured on the same seeds: trial i runs the
/// honest verifier and the extractor against provers with identical tapes.
inline ExtractabilityReport extractability(const PokConfig &cfg, const PokProverStrategy &s, std::uint64_t trials, std::uint64_t seed,
                                           unsigned workers = 1) {
    struct One {
        bool accepted, extracted, exact;
        std::uint64_t forced;
        std::vector<std::uint64_t> attempts;
    };
    auto rows = parallel_trials(trials, workers, [&](std::uint64_t i) {
        const std::uint64_t ts = derive_seed(seed, i);
        auto run = pok_run(cfg, s, ts);
        auto ex = extract(cfg, s, ts);
        auto &rec = ex.sessions[0];
        One o{run.accept(), rec.success(), false, rec.forced_continues, {}};
        if (rec.witness) o.exact = *rec.witness == pok_setup(cfg, s, 1, ts).statements[0]->w;
        for (auto &c : rec.cells) o.attempts.push_back(c.attempts);
        return o;
    });
    ExtractabilityReport r;
    r.prover = s.name();
    r.trials = trials;
    for (auto &o : rows) {
        r.accepted += o.accepted;
        r.extracted += o.extracted;
        r.exact_witness += o.exact;
        r.forced_continues += o.forced;
        for (auto a : o.attempts) ++r.attempts[a];
    }
    return r;
}

struct SimulatabilityReport {
    std::uint64_t trials = 0;
    double tv = 0;
    double null_scale = 0;  // expected TV between two samples of one law
    std::array<std::array<std::uint64_t, 16>, 2> counts{};
};

/// Compares the prover's final state after an honest-verifier run with its
/// final state after extraction, on independent seeds. States are reduced
/// to a 4-bit fingerprint before the empirical TV is taken.
inline SimulatabilityReport simulatability_check(const PokConfig &cfg, const PokProverStrategy &s, std::uint64_t trials,
                                                 std::uint64_t seed, unsigned workers = 1) {
    SimulatabilityReport r;
    r.trials = trials;
    for (int world = 0; world < 2; ++world) {
        auto fps = parallel_trials(trials, workers, [&](std::uint64_t i) {
            const std::uint64_t ts = derive_seed(derive_seed(seed, world), i);
            Bytes st = world == 0 ? pok_run(cfg, s, ts).world.engine().party(1).state_bytes()
                                  : extract(cfg, s, ts).world.engine().party(1).state_bytes();
            return static_cast<std::uint8_t>(st[0] & 0x0f);
        });
        for (auto v : fps) ++r.counts[world][v];
    }
    const double n = static_cast<double>(trials);
    for (int v = 0; v < 16; ++v) r.tv += std::abs(static_cast<double>(r.counts[0][v]) - static_cast<double>(r.counts[1][v]));
    r.tv /= 2 * n;
    r.null_scale = std::sqrt(16.0 / (3.14159265358979323846 * n));
    return r;
}

struct ConcurrentPokReport {
    ProtocolParams base;
    ProtocolParams adjusted;  // threshold lowered by the OT round count
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> accepted, extracted;  // per session
    std::uint64_t forced_continues = 0;
    std::uint64_t length_mismatches = 0;  // kept transcript vs single pass

    double extraction_rate(std::uint32_t s) const {
        return static_cast<double>(extracted.at(s - 1)) / static_cast<double>(trials);
    }
    double acceptance_rate(std::uint32_t s) const {
        return static_cast<double>(accepted.at(s - 1)) / static_cast<double>(trials);
    }
};

/// Q interleaved PoK sessions under `sched`, one extractor over all of them.
inline ConcurrentPokReport pok_concurrent_harness(const ProtocolParams &p, const PokConfig &cfg, const PokProverStrategy &s,
                                                  Scheduler sched, std::uint64_t trials, std::uint64_t seed, unsigned workers = 1) {
    ConcurrentPokReport r;
    r.base = p;
    r.adjusted = adjust_threshold(p, kPokOtRounds);
    r.trials = trials;
    const auto q = static_cast<std::uint32_t>(p.q);
    struct One {
        std::vector<bool> acc, ext;
        std::uint64_t forced;
        bool length_ok;
    };
    auto rows = parallel_trials(trials, workers, [&](std::uint64_t i) {
        const std::uint64_t ts = derive_seed(seed, i);
        Scheduler sc = sched;
        sc.seed = derive_seed(ts, 5);
        auto run = pok_run(cfg, s, ts, q, sc);
        auto ex = extract(cfg, s, ts, q, sc);
        One o{run.accepted, {}, 0, ex.transcript.order.size() == run.transcript.order.size()};
        for (auto &rec : ex.sessions) {
            o.ext.push_back(rec.success());
            o.forced += rec.forced_continues;
        }
        return o;
    });
    r.accepted.assign(q, 0);
    r.extracted.assign(q, 0);
    for (auto &o : rows) {
        for (std::uint32_t k = 0; k < q; ++k) {
            r.accepted[k] += o.acc[k];
            r.extracted[k] += o.ext[k];
        }
        r.forced_continues += o.forced;
        r.length_mismatches += !o.length_ok;
    }
    return r;
}

}  // namespace bcqzk
