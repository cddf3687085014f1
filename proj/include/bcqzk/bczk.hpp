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

// Bounded-concurrent ZK: slot commitments in stage 1, an RWI proof in
// stage 2. Round layout for s slots:
//   slot j (1-based): V rstring 3j-2, P commitment 3j-1, V bit 3j
//   stage 2: V 3s+1, P 3s+2, V 3s+3, P token 3s+4

#include <algorithm>
#include <array>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bcqzk/base_relation.hpp"
#include "bcqzk/commitment.hpp"
#include "bcqzk/proof_backends.hpp"
#include "bcqzk/session_engine.hpp"

namespace bcqzk {

constexpr std::size_t kWiFillerBytes = 16;

inline std::uint32_t slot_of_round(std::uint32_t round) {
    return (round - 1) / 3;  // 0-based
}

enum class SlotMsg { Rstring, Commitment, VerifierBit, Stage2 };

inline SlotMsg classify_round(std::uint32_t round, std::uint64_t slots) {
    if (round > 3 * slots) return SlotMsg::Stage2;
    switch ((round - 1) % 3) {
        case 0: return SlotMsg::Rstring;
        case 1: return SlotMsg::Commitment;
        default: return SlotMsg::VerifierBit;
    }
}

// ---------------------------------------------------------------------------
// Prover.

enum class Stage2Mode { BaseWitness, MatchedOpenings };
enum class CommitStrategy { Random, AllZeros, AllOnes, AdaptiveOnTranscript };

struct SlotSecret {
    std::uint8_t bit = 0;
    BitString seed;
    bool operator==(const SlotSecret &) const = default;
};

/// What the simulator and extractor harnesses may see of a prover. Never
/// written into transcripts.
struct ProverSecrets {
    std::vector<SlotSecret> slots;
};

enum class BczkPhase { Stage1, Stage2, Done, Aborted };

template <typename Base = SubsetSum>
class BczkProver {
   public:
    using Instance = typename Base::Instance;
    using Witness = typename Base::Witness;

    BczkProver(const ProtocolParams &p, std::shared_ptr<IdealBackend> backend, std::shared_ptr<const Instance> x,
               std::optional<Witness> w, Stage2Mode mode = Stage2Mode::BaseWitness, CommitStrategy commit = CommitStrategy::Random)
        : slots_(p.slots), threshold_(p.threshold), n_(p.seed_bits()), backend_(std::move(backend)), x_(std::move(x)),
          w_(std::move(w)), mode_(mode), commit_(commit) {
    }

    bool replies_to(std::uint32_t round) const {
        if (round <= 3 * slots_) return (round - 1) % 3 == 0;
        return round == 3 * slots_ + 1 || round == 3 * slots_ + 3;
    }

    bool finished() const {
        return phase_ == BczkPhase::Done;
    }

    PartyReply receive(std::uint32_t round, const Bytes &body, Rng &rng) {
        if (phase_ == BczkPhase::Done || phase_ == BczkPhase::Aborted || round == 0) return abort();
        if (round <= 3 * slots_) {
            std::uint32_t j = slot_of_round(round);
            if (phase_ != BczkPhase::Stage1 || j != cursor_) return abort();
            switch (classify_round(round, slots_)) {
                case SlotMsg::Rstring: return on_rstring(body, rng);
                case SlotMsg::VerifierBit: return on_verifier_bit(body);
                default: return abort();
            }
        }
        if (phase_ != BczkPhase::Stage2) return abort();
        if (round == 3 * slots_ + 1 && !wi_open_) {
            wi_open_ = true;
            Bytes filler(kWiFillerBytes);
            for (auto &b : filler) b = static_cast<std::uint8_t>(rng.next_u64());
            return PartyReply::reply(std::move(filler));
        }
        if (round == 3 * slots_ + 3 && wi_open_) {
            phase_ = BczkPhase::Done;
            return PartyReply::reply(stage2_token().serialize());
        }
        return abort();
    }

    BczkPhase phase() const {
        return phase_;
    }
    const std::vector<SlotStatement> &statements() const {
        return stmts_;
    }
    const ProverSecrets &secrets_handle() const {
        return secrets_;
    }
    std::uint64_t resolved_slots() const {
        return cursor_;
    }

    /// Matched slot openings among resolved slots, in slot order.
    std::vector<std::uint64_t> matched_slots() const {
        std::vector<std::uint64_t> out;
        for (std::uint64_t j = 0; j < cursor_; ++j) {
            if (secrets_.slots[j].bit == stmts_[j].verifier_bit) out.push_back(j);
        }
        return out;
    }

    RwiInstance<Base> rwi_instance() const {
        return {*x_, stmts_, threshold_};
    }

   private:
    PartyReply abort() {
        phase_ = BczkPhase::Aborted;
        return PartyReply::abort();
    }

    PartyReply on_rstring(const Bytes &body, Rng &rng) {
        if (stmts_.size() != cursor_ || body.size() != (3 * n_ + 7) / 8) return abort();
        auto r = BitString::from_bytes(body, 3 * n_);
        std::uint8_t bit = 0;
        switch (commit_) {
            case CommitStrategy::Random: bit = rng.bit(); break;
            case CommitStrategy::AllZeros: bit = 0; break;
            case CommitStrategy::AllOnes: bit = 1; break;
            case CommitStrategy::AdaptiveOnTranscript: bit = cursor_ == 0 ? r[0] : stmts_[cursor_ - 1].verifier_bit; break;
        }
        auto seed = BitString::random(n_, rng);
        auto com = commit(r, bit, seed);
        stmts_.push_back({r, com, 0});
        secrets_.slots.push_back({bit, seed});
        return PartyReply::reply(com.value.bytes());
    }

    PartyReply on_verifier_bit(const Bytes &body) {
        if (stmts_.size() != cursor_ + 1 || body.size() != 1 || body[0] > 1) return abort();
        stmts_[cursor_].verifier_bit = body[0];
        if (++cursor_ == slots_) phase_ = BczkPhase::Stage2;
        return PartyReply::silent();
    }

    ProofToken stage2_token() {
        RwiWitness<Base> wit;
        wit.openings.resize(stmts_.size());
        if (mode_ == Stage2Mode::BaseWitness) {
            wit.base = w_;
        } else {
            std::uint64_t used = 0;
            for (auto j : matched_slots()) {
                if (used == threshold_) break;
                wit.openings[j] = Opening{secrets_.slots[j].bit, secrets_.slots[j].seed};
                ++used;
            }
        }
        return backend_->template prove<Rwi<Base>>(rwi_instance(), wit);
    }

    std::uint64_t slots_;
    std::uint64_t threshold_;
    std::size_t n_;
    std::shared_ptr<IdealBackend> backend_;
    std::shared_ptr<const Instance> x_;
    std::optional<Witness> w_;
    Stage2Mode mode_;
    CommitStrategy commit_;

    BczkPhase phase_ = BczkPhase::Stage1;
    std::uint64_t cursor_ = 0;
    bool wi_open_ = false;
    std::vector<SlotStatement> stmts_;
    ProverSecrets secrets_;
};

// ---------------------------------------------------------------------------
// Q-session verifiers.

enum class VerifierStrategy { HonestLike, FixedBits, StateDependentScheduling, SlotStaggerer, Aborter, AllAbortInBlock, AllNA };

struct AdversarySpec {
    VerifierStrategy kind = VerifierStrategy::HonestLike;
    std::uint8_t fixed_bit = 0;
    double p_abort = 0;
    std::uint64_t abort_block = 1;  // 1-based
    Scheduler scheduler = Scheduler::random_interleave();

    static AdversarySpec honest_like(Scheduler s = Scheduler::random_interleave()) {
        AdversarySpec a;
        a.scheduler = s;
        return a;
    }
    static AdversarySpec fixed_bits(std::uint8_t b) {
        AdversarySpec a;
        a.kind = VerifierStrategy::FixedBits;
        a.fixed_bit = b & 1;
        return a;
    }
    static AdversarySpec state_dependent() {
        AdversarySpec a;
        a.kind = VerifierStrategy::StateDependentScheduling;
        return a;
    }
    static AdversarySpec slot_staggerer() {
        AdversarySpec a;
        a.kind = VerifierStrategy::SlotStaggerer;
        return a;
    }
    static AdversarySpec aborter(double p) {
        if (p < 0 || p > 1) throw ValidationError("abort probability outside [0,1]");
        AdversarySpec a;
        a.kind = VerifierStrategy::Aborter;
        a.p_abort = p;
        return a;
    }
    static AdversarySpec all_abort_in_block(std::uint64_t k) {
        if (k < 1) throw ValidationError("abort block is 1-based");
        AdversarySpec a;
        a.kind = VerifierStrategy::AllAbortInBlock;
        a.abort_block = k;
        return a;
    }
    static AdversarySpec all_na() {
        AdversarySpec a;
        a.kind = VerifierStrategy::AllNA;
        return a;
    }

    std::string name() const {
        switch (kind) {
            case VerifierStrategy::HonestLike: return "HonestLike";
            case VerifierStrategy::FixedBits: return "FixedBits(" + std::to_string(fixed_bit) + ")";
            case VerifierStrategy::StateDependentScheduling: return "StateDependentScheduling";
            case VerifierStrategy::SlotStaggerer: return "SlotStaggerer";
            case VerifierStrategy::Aborter: {
                std::ostringstream os;
                os << "Aborter(" << p_abort << ")";
                return os.str();
            }
            case VerifierStrategy::AllAbortInBlock: return "AllAbortInBlock(" + std::to_string(abort_block) + ")";
            case VerifierStrategy::AllNA: return "AllNA";
        }
        return "?";
    }
};

/// HonestLike, FixedBits(0), StateDependentScheduling, SlotStaggerer,
/// Aborter(0.3), AllAbortInBlock(2).
inline std::vector<AdversarySpec> adversary_library() {
    return {AdversarySpec::honest_like(), AdversarySpec::fixed_bits(0), AdversarySpec::state_dependent(),
            AdversarySpec::slot_staggerer(), AdversarySpec::aborter(0.3), AdversarySpec::all_abort_in_block(2)};
}

inline AdversarySpec parse_adversary(const std::string &s) {
    auto arg = [&](std::size_t open) { return s.substr(open + 1, s.size() - open - 2); };
    try {
        if (s == "HonestLike") return AdversarySpec::honest_like();
        if (s == "RoundRobin") return AdversarySpec::honest_like(Scheduler::round_robin());
        if (s == "StateDependentScheduling") return AdversarySpec::state_dependent();
        if (s == "SlotStaggerer") return AdversarySpec::slot_staggerer();
        if (s == "AllNA") return AdversarySpec::all_na();
        if (s.rfind("FixedBits(", 0) == 0 && s.back() == ')') {
            auto v = arg(9);
            if (v != "0" && v != "1") throw ValidationError("FixedBits takes 0 or 1");
            return AdversarySpec::fixed_bits(static_cast<std::uint8_t>(v[0] - '0'));
        }
        if (s.rfind("Aborter(", 0) == 0 && s.back() == ')') return AdversarySpec::aborter(std::stod(arg(7)));
        if (s.rfind("AllAbortInBlock(", 0) == 0 && s.back() == ')') {
            return AdversarySpec::all_abort_in_block(std::stoull(arg(15)));
        }
    } catch (const std::logic_error &) {
        throw ValidationError("bad adversary argument: " + s);
    }
    throw ValidationError("unknown adversary: " + s);
}

struct VerifierSession {
    enum class Phase { Stage1, Stage2, Accepted, Rejected, Aborted, Dead };
    Phase phase = Phase::Stage1;
    std::uint32_t next_round = 1;
    bool awaiting = false;
    std::vector<SlotStatement> stmts;
    std::vector<std::array<std::int64_t, 3>> positions;  // r, c, b' in global order

    bool active() const {
        return phase == Phase::Stage1 || phase == Phase::Stage2;
    }
};

template <typename Base = SubsetSum>
class BczkAdversary {
   public:
    using Instance = typename Base::Instance;

    BczkAdversary(const ProtocolParams &p, AdversarySpec spec, std::shared_ptr<const Instance> x,
                  std::shared_ptr<IdealBackend> backend, std::uint64_t seed)
        : params_(p), spec_(spec), x_(std::move(x)), backend_(std::move(backend)), sessions_(p.q),
          msgs_(derive_seed(seed, 11)), tape_(derive_seed(seed, 12)), abort_(derive_seed(seed, 13)) {
        Scheduler s = spec.scheduler;
        s.seed = derive_seed(seed, 14);
        sched_ = SchedulerState(s);
        if (spec.kind == VerifierStrategy::AllNA) na_left_ = p.prot_len * p.q;
    }

    std::optional<BundledMessage> next() {
        const auto q = static_cast<std::uint32_t>(params_.q);
        if (spec_.kind == VerifierStrategy::AllNA) {
            if (na_left_ == 0) {
                abort_all();
                return std::nullopt;
            }
            --na_left_;
            return BundledMessage::all_na(q);
        }
        if (spec_.kind == VerifierStrategy::AllAbortInBlock && block_of(position_, params_) + 1 >= spec_.abort_block) {
            abort_all();
            return std::nullopt;
        }
        for (;;) {
            auto ready = ready_sessions();
            if (ready.empty()) return std::nullopt;
            auto [id, abort_now] = choose(ready);
            if (spec_.kind == VerifierStrategy::Aborter && abort_.bernoulli(spec_.p_abort)) abort_now = true;
            if (abort_now) {
                sessions_[id - 1].phase = VerifierSession::Phase::Aborted;
                continue;
            }
            const std::uint32_t round = sessions_[id - 1].next_round;
            return BundledMessage::single(q, id, round, message_for(id));
        }
    }

    void observe(const BundledMessage &reply) {
        if (!last_) return;
        const std::uint32_t id = *last_;
        last_.reset();
        VerifierSession &v = sessions_[id - 1];
        const Payload &pl = reply.at(id);
        if (std::holds_alternative<Bottom>(pl)) {
            v.phase = VerifierSession::Phase::Dead;
            return;
        }
        if (!v.awaiting) return;
        v.awaiting = false;
        if (!std::holds_alternative<Live>(pl)) {
            v.phase = VerifierSession::Phase::Dead;
            return;
        }
        const Live &m = std::get<Live>(pl);
        if (m.round != v.next_round + 1) {
            v.phase = VerifierSession::Phase::Rejected;
            return;
        }
        const std::uint64_t s = params_.slots;
        if (m.round <= 3 * s) {
            const std::size_t n = params_.seed_bits();
            if (m.body.size() != (3 * n + 7) / 8) {
                v.phase = VerifierSession::Phase::Rejected;
                return;
            }
            v.stmts.back().commitment = Commitment{BitString::from_bytes(m.body, 3 * n)};
            last_prover_word_ = word_of(m.body);
        } else if (m.round == 3 * s + 4) {
            bool ok = false;
            try {
                ok = backend_->template verify<Rwi<Base>>(RwiInstance<Base>{*x_, v.stmts, params_.threshold}, ProofToken::parse(m.body));
            } catch (const std::exception &) {
                ok = false;
            }
            v.phase = ok ? VerifierSession::Phase::Accepted : VerifierSession::Phase::Rejected;
            return;
        } else {
            last_prover_word_ = word_of(m.body);
        }
        v.next_round = m.round + 1;
    }

    void on_message(const TranscriptMessage &m) {
        VerifierSession &v = sessions_[m.session - 1];
        if (m.round <= 3 * params_.slots) {
            auto j = slot_of_round(m.round);
            if (v.positions.size() <= j) v.positions.resize(j + 1, {-1, -1, -1});
            v.positions[j][(m.round - 1) % 3] = static_cast<std::int64_t>(position_);
        }
        ++position_;
    }

    const VerifierSession &session(std::uint32_t id) const {
        return sessions_.at(id - 1);
    }
    bool accepted(std::uint32_t id) const {
        return session(id).phase == VerifierSession::Phase::Accepted;
    }
    std::uint64_t position() const {
        return position_;
    }
    const AdversarySpec &spec() const {
        return spec_;
    }

   private:
    static std::uint64_t word_of(const Bytes &b) {
        std::uint64_t w = 0;
        for (std::size_t i = 0; i < b.size() && i < 8; ++i) w = (w << 8) | b[i];
        return w;
    }

    void abort_all() {
        for (auto &v : sessions_)
            if (v.active()) v.phase = VerifierSession::Phase::Aborted;
    }

    std::vector<std::uint32_t> ready_sessions() const {
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 0; i < sessions_.size(); ++i) {
            if (sessions_[i].active() && !sessions_[i].awaiting) out.push_back(i + 1);
        }
        return out;
    }

    bool pending_bit(std::uint32_t id) const {
        const auto &v = sessions_[id - 1];
        return v.next_round <= 3 * params_.slots && classify_round(v.next_round, params_.slots) == SlotMsg::VerifierBit;
    }

    SchedulerState::Choice choose(const std::vector<std::uint32_t> &ready) {
        switch (spec_.kind) {
            case VerifierStrategy::StateDependentScheduling: {
                auto i = (tape_.next_u64() ^ last_prover_word_) % ready.size();
                return {ready[i], false};
            }
            case VerifierStrategy::SlotStaggerer: return {stagger(ready), false};
            default: return sched_.pick(ready);
        }
    }

    // Greedy: close slots whose commitment sits in an earlier block, then
    // open new slots or run stage 2, and only close a same-block slot when
    // nothing else is left.
    std::uint32_t stagger(const std::vector<std::uint32_t> &ready) {
        const auto cur = block_of(position_, params_);
        std::vector<std::uint32_t> carry, fresh, forced;
        for (auto id : ready) {
            if (!pending_bit(id)) {
                fresh.push_back(id);
                continue;
            }
            const auto &v = sessions_[id - 1];
            auto pc = v.positions[slot_of_round(v.next_round)][1];
            (pc >= 0 && block_of(static_cast<std::size_t>(pc), params_) < cur ? carry : forced).push_back(id);
        }
        for (auto *set : {&carry, &fresh, &forced}) {
            if (!set->empty()) return (*set)[tape_.uniform(set->size())];
        }
        throw ProtocolError("staggerer found no candidate");
    }

    Bytes message_for(std::uint32_t id) {
        VerifierSession &v = sessions_[id - 1];
        last_ = id;
        const std::uint64_t s = params_.slots;
        const std::uint32_t round = v.next_round;
        if (round <= 3 * s) {
            if (classify_round(round, s) == SlotMsg::Rstring) {
                auto r = random_receiver_string(params_.seed_bits(), msgs_);
                v.stmts.push_back({r, Commitment{}, 0});
                v.awaiting = true;
                return r.bytes();
            }
            std::uint8_t b = 0;
            switch (spec_.kind) {
                case VerifierStrategy::FixedBits: b = spec_.fixed_bit; break;
                case VerifierStrategy::StateDependentScheduling:
                    b = static_cast<std::uint8_t>(msgs_.bit() ^ v.stmts.back().commitment.value[0]);
                    break;
                default: b = msgs_.bit(); break;
            }
            v.stmts.back().verifier_bit = b;
            v.next_round = round + 1;
            if (round == 3 * s) v.phase = VerifierSession::Phase::Stage2;
            return Bytes{b};
        }
        Bytes filler(kWiFillerBytes);
        for (auto &x : filler) x = static_cast<std::uint8_t>(msgs_.next_u64());
        v.awaiting = true;
        return filler;
    }

    ProtocolParams params_;
    AdversarySpec spec_;
    std::shared_ptr<const Instance> x_;
    std::shared_ptr<IdealBackend> backend_;
    std::vector<VerifierSession> sessions_;
    Rng msgs_;
    Rng tape_;
    Rng abort_;
    SchedulerState sched_;
    std::optional<std::uint32_t> last_;
    std::uint64_t position_ = 0;
    std::uint64_t last_prover_word_ = 0;
    std::uint64_t na_left_ = 0;
};

// ---------------------------------------------------------------------------
// Setup and whole runs.

template <typename Base = SubsetSum>
struct BczkSetup {
    ProtocolParams params;
    std::shared_ptr<IdealBackend> backend;
    std::shared_ptr<const typename Base::Instance> x;
    std::optional<typename Base::Witness> w;
};

/// Planted subset-sum instance with its witness and a fresh backend.
inline BczkSetup<SubsetSum> planted_setup(const ProtocolParams &p, std::uint64_t seed, std::size_t bits = 16) {
    Rng rng(derive_seed(seed, 0x5e7));
    auto pair = planted_subset_sum(bits, rng);
    return {p, std::make_shared<IdealBackend>(), std::make_shared<const SubsetSumInstance>(pair.x), pair.w};
}

struct ProverOptions {
    Stage2Mode mode = Stage2Mode::BaseWitness;
    CommitStrategy commit = CommitStrategy::Random;
};

template <typename Base = SubsetSum>
using BczkWorld = World<BczkProver<Base>, BczkAdversary<Base>>;

template <typename Base>
BczkWorld<Base> make_world(const BczkSetup<Base> &s, ProverOptions po, const AdversarySpec &adv, std::uint64_t seed) {
    std::vector<BczkProver<Base>> provers;
    for (std::uint64_t i = 0; i < s.params.q; ++i) provers.emplace_back(s.params, s.backend, s.x, s.w, po.mode, po.commit);
    return BczkWorld<Base>(Engine<BczkProver<Base>>(std::move(provers)),
                           BczkAdversary<Base>(s.params, adv, s.x, s.backend, derive_seed(seed, 1)));
}

inline std::uint64_t step_budget(const ProtocolParams &p) {
    return p.prot_len * p.q * 2;
}

template <typename Base = SubsetSum>
struct BczkRun {
    TranscriptSet transcript;
    BczkWorld<Base> world;

    bool accepted(std::uint32_t id) const {
        return world.driver().accepted(id);
    }
};

template <typename Base>
BczkRun<Base> run_protocol(const BczkSetup<Base> &s, ProverOptions po, const AdversarySpec &adv, std::uint64_t seed) {
    auto world = make_world(s, po, adv, seed);
    Rng prover_rng(derive_seed(seed, 2));
    auto t = run(world, prover_rng, step_budget(s.params), seed);
    return {std::move(t), std::move(world)};
}

// ---------------------------------------------------------------------------
// Slot bookkeeping from transcripts.

struct SlotRecord {
    std::uint64_t index = 0;  // 1-based
    ReceiverString rstring;
    Commitment commitment;
    std::uint8_t committed_bit = 0;
    BitString seed;
    std::optional<std::uint8_t> verifier_bit;
    std::array<std::int64_t, 3> positions{-1, -1, -1};

    bool matched() const {
        return verifier_bit && *verifier_bit == committed_bit;
    }
};

/// Slot table for one session, joining the transcript with prover secrets.
inline std::vector<SlotRecord> slot_records(const std::vector<TranscriptMessage> &order, std::uint32_t session,
                                            const ProverSecrets &secrets, const ProtocolParams &p) {
    std::vector<SlotRecord> out;
    const std::size_t n = p.seed_bits();
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto &m = order[pos];
        if (m.session != session || m.round > 3 * p.slots) continue;
        auto j = slot_of_round(m.round);
        if (out.size() <= j) out.resize(j + 1);
        auto &rec = out[j];
        rec.index = j + 1;
        auto kind = classify_round(m.round, p.slots);
        rec.positions[(m.round - 1) % 3] = static_cast<std::int64_t>(pos);
        if (kind == SlotMsg::Rstring) rec.rstring = BitString::from_bytes(m.body, 3 * n);
        if (kind == SlotMsg::Commitment) rec.commitment = Commitment{BitString::from_bytes(m.body, 3 * n)};
        if (kind == SlotMsg::VerifierBit) rec.verifier_bit = m.body.at(0);
    }
    for (std::size_t j = 0; j < out.size() && j < secrets.slots.size(); ++j) {
        out[j].committed_bit = secrets.slots[j].bit;
        out[j].seed = secrets.slots[j].seed;
    }
    return out;
}

/// Slots whose committed bit equals the verifier's reply. Every slot with a
/// commitment must also have its reply.
inline std::uint64_t matched_count(const std::vector<TranscriptMessage> &order, std::uint32_t session,
                                   const ProverSecrets &secrets, const ProtocolParams &p) {
    std::uint64_t c = 0;
    for (auto &rec : slot_records(order, session, secrets, p)) {
        if (rec.positions[1] >= 0 && !rec.verifier_bit) throw ProtocolError("matched_count: slot still pending");
        if (rec.index > secrets.slots.size()) throw ProtocolError("matched_count: secrets missing for slot");
        c += rec.matched() ? 1 : 0;
    }
    return c;
}

/// (session, 0-based slot) pairs whose commitment and verifier bit both lie
/// in [begin, end).
inline std::vector<std::pair<std::uint32_t, std::uint64_t>> complete_slots(const std::vector<TranscriptMessage> &order,
                                                                          std::size_t begin, std::size_t end,
                                                                          const ProtocolParams &p) {
    std::vector<std::pair<std::uint32_t, std::uint64_t>> out;
    std::vector<std::vector<std::int64_t>> c_pos(p.q);
    for (std::size_t pos = begin; pos < end; ++pos) {
        const auto &m = order[pos];
        if (m.round > 3 * p.slots) continue;
        auto kind = classify_round(m.round, p.slots);
        auto j = slot_of_round(m.round);
        auto &cp = c_pos[m.session - 1];
        if (kind == SlotMsg::Commitment) {
            if (cp.size() <= j) cp.resize(j + 1, -1);
            cp[j] = static_cast<std::int64_t>(pos);
        } else if (kind == SlotMsg::VerifierBit && j < cp.size() && cp[j] >= 0) {
            out.emplace_back(m.session, j);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace bcqzk
