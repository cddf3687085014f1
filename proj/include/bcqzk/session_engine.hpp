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

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "bcqzk/core/bytes.hpp"
#include "bcqzk/core/rng.hpp"
#include "bcqzk/params.hpp"

namespace bcqzk {

// ---------------------------------------------------------------------------
// Bundled messages. Session ids are 1-based on the wire.

struct NA {
    bool operator==(const NA &) const = default;
};
struct Bottom {
    bool operator==(const Bottom &) const = default;
};
struct Live {
    std::uint32_t round = 0;
    Bytes body;
    bool operator==(const Live &) const = default;
};
using Payload = std::variant<NA, Live, Bottom>;

struct BundleEntry {
    std::uint32_t session = 0;
    Payload payload;
    bool operator==(const BundleEntry &) const = default;
};

struct BundledMessage {
    std::vector<BundleEntry> entries;

    static BundledMessage all_na(std::uint32_t q) {
        BundledMessage b;
        for (std::uint32_t i = 1; i <= q; ++i) b.entries.push_back({i, NA{}});
        return b;
    }
    static BundledMessage single(std::uint32_t q, std::uint32_t session, std::uint32_t round, Bytes body) {
        BundledMessage b = all_na(q);
        b.entries.at(session - 1).payload = Live{round, std::move(body)};
        return b;
    }
    const Payload &at(std::uint32_t session) const {
        return entries.at(session - 1).payload;
    }
    bool operator==(const BundledMessage &) const = default;
};

// ---------------------------------------------------------------------------
// Transcripts.

enum class Direction : std::uint8_t { V, P };

struct TranscriptMessage {
    std::uint64_t step = 0;
    std::uint32_t session = 0;
    std::uint32_t round = 0;
    Direction dir = Direction::V;
    Bytes body;
    bool operator==(const TranscriptMessage &) const = default;
};

enum class SessionStatus : std::uint8_t { Running, Completed, Dead, VerifierAborted };

struct DeviationEvent {
    std::uint64_t step = 0;
    std::string what;
    bool operator==(const DeviationEvent &) const = default;
};

struct TranscriptSet {
    std::uint32_t q = 0;
    std::uint64_t seed = 0;
    std::vector<TranscriptMessage> order;
    std::vector<SessionStatus> status;
    std::vector<DeviationEvent> deviations;

    std::vector<TranscriptMessage> session(std::uint32_t id) const {
        std::vector<TranscriptMessage> out;
        for (auto &m : order)
            if (m.session == id) out.push_back(m);
        return out;
    }

    /// One line per message: "<index> <session> <round> <V|P> <hex>".
    std::string serialize() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < order.size(); ++i) {
            const auto &m = order[i];
            os << i << ' ' << m.session << ' ' << m.round << ' ' << (m.dir == Direction::V ? 'V' : 'P') << ' '
               << (m.body.empty() ? std::string("-") : to_hex(m.body)) << '\n';
        }
        return os.str();
    }

    bool operator==(const TranscriptSet &) const = default;
};

/// Contiguous partition of the global order into `blocks` blocks of
/// `block_len` messages, the last block absorbing the remainder.
struct Block {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const {
        return end - begin;
    }
};

inline std::vector<Block> block_view(std::size_t total_messages, std::uint64_t blocks, std::uint64_t block_len) {
    std::vector<Block> out(blocks);
    for (std::uint64_t k = 0; k < blocks; ++k) {
        std::size_t b = std::min<std::size_t>(total_messages, k * block_len);
        std::size_t e = k + 1 == blocks ? total_messages : std::min<std::size_t>(total_messages, (k + 1) * block_len);
        out[k] = {b, e};
    }
    return out;
}

inline std::vector<Block> block_view(const std::vector<TranscriptMessage> &order, const ProtocolParams &p) {
    return block_view(order.size(), p.blocks, p.block_len);
}

/// Block index holding global position `pos`.
inline std::uint64_t block_of(std::size_t pos, const ProtocolParams &p) {
    return std::min<std::uint64_t>(pos / p.block_len, p.blocks - 1);
}

// ---------------------------------------------------------------------------
// Parties and the engine.

struct PartyReply {
    enum Kind { Silent, Reply, Abort } kind = Silent;
    Bytes body;

    static PartyReply silent() {
        return {};
    }
    static PartyReply reply(Bytes b) {
        return {Reply, std::move(b)};
    }
    static PartyReply abort() {
        return {Abort, {}};
    }
};

/// A responder state machine hosted by the engine. replies_to(t) says
/// whether round t+1 is this party's message; receive() consumes round t
/// and produces that reply when there is one.
template <typename P>
concept SessionParty = std::copyable<P> && requires(P p, const P cp, std::uint32_t round, const Bytes &body, Rng &rng) {
    { cp.replies_to(round) } -> std::convertible_to<bool>;
    { p.receive(round, body, rng) } -> std::same_as<PartyReply>;
    { cp.finished() } -> std::convertible_to<bool>;
};

template <SessionParty P>
class Engine {
   public:
    struct Delivery {
        std::optional<TranscriptMessage> message;  // accepted live message
        bool reply_pending = false;
        BundledMessage reply;  // valid when !reply_pending
    };

    explicit Engine(std::vector<P> parties)
        : parties_(std::move(parties)), expected_(parties_.size(), 1), status_(parties_.size(), SessionStatus::Running) {
    }

    std::uint32_t sessions() const {
        return static_cast<std::uint32_t>(parties_.size());
    }
    const P &party(std::uint32_t id) const {
        return parties_.at(id - 1);
    }
    P &party(std::uint32_t id) {
        return parties_.at(id - 1);
    }
    SessionStatus status(std::uint32_t id) const {
        return status_.at(id - 1);
    }
    void mark_verifier_aborted(std::uint32_t id) {
        if (status_.at(id - 1) == SessionStatus::Running) status_[id - 1] = SessionStatus::VerifierAborted;
    }
    const std::vector<SessionStatus> &statuses() const {
        return status_;
    }
    std::uint32_t expected_round(std::uint32_t id) const {
        return expected_.at(id - 1);
    }
    std::uint64_t steps() const {
        return steps_;
    }
    bool has_pending() const {
        return pending_.has_value();
    }
    const std::vector<DeviationEvent> &deviations() const {
        return deviations_;
    }

    /// First half of a step: validate the bundle and accept its live entry.
    /// A reply owed by the party is left pending until complete().
    Delivery deliver(const BundledMessage &in, Rng &rng) {
        if (pending_) throw ProtocolError("deliver called with a reply still pending");
        const std::uint32_t q = sessions();
        if (in.entries.size() != q) throw ProtocolError("bundle arity differs from session count");
        for (std::uint32_t i = 0; i < q; ++i) {
            if (in.entries[i].session != i + 1) throw ProtocolError("bundle session ids out of place");
        }
        ++steps_;
        Delivery d;
        d.reply = BundledMessage::all_na(q);
        std::optional<std::uint32_t> live;
        for (std::uint32_t i = 0; i < q; ++i) {
            if (!std::holds_alternative<Live>(in.entries[i].payload)) continue;
            if (!live) {
                live = i + 1;
            } else {
                deviations_.push_back({steps_, "extra live entry for session " + std::to_string(i + 1) + " ignored"});
            }
        }
        if (!live) return d;
        const std::uint32_t id = *live;
        const auto &msg = std::get<Live>(in.entries[id - 1].payload);
        SessionStatus &st = status_[id - 1];
        if (st == SessionStatus::Dead) return d;
        if (st != SessionStatus::Running || msg.round != expected_[id - 1]) {
            deviations_.push_back({steps_, "session " + std::to_string(id) + " out-of-order round " + std::to_string(msg.round)});
            st = SessionStatus::Dead;
            d.reply.entries[id - 1].payload = Bottom{};
            return d;
        }
        d.message = TranscriptMessage{steps_, id, msg.round, Direction::V, msg.body};
        P &party = parties_[id - 1];
        if (party.replies_to(msg.round)) {
            pending_ = Pending{id, msg.round, msg.body};
            d.reply_pending = true;
            return d;
        }
        PartyReply r = party.receive(msg.round, msg.body, rng);
        settle(id, msg.round, r, d.reply);
        return d;
    }

    /// Second half: the pending party computes its reply now, with `rng`.
    std::pair<BundledMessage, std::optional<TranscriptMessage>> complete(Rng &rng) {
        if (!pending_) throw ProtocolError("no pending reply");
        Pending pend = std::move(*pending_);
        pending_.reset();
        BundledMessage out = BundledMessage::all_na(sessions());
        PartyReply r = parties_[pend.session - 1].receive(pend.round, pend.body, rng);
        std::optional<TranscriptMessage> m;
        if (r.kind == PartyReply::Reply) m = TranscriptMessage{steps_, pend.session, pend.round + 1, Direction::P, r.body};
        settle(pend.session, pend.round, r, out);
        return {out, m};
    }

    /// Whole step: deliver then complete.
    BundledMessage step(const BundledMessage &in, Rng &rng) {
        Delivery d = deliver(in, rng);
        if (!d.reply_pending) return d.reply;
        return complete(rng).first;
    }

   private:
    struct Pending {
        std::uint32_t session;
        std::uint32_t round;
        Bytes body;
    };

    void settle(std::uint32_t id, std::uint32_t round, PartyReply &r, BundledMessage &out) {
        SessionStatus &st = status_[id - 1];
        switch (r.kind) {
            case PartyReply::Abort:
                st = SessionStatus::Dead;
                out.entries[id - 1].payload = Bottom{};
                return;
            case PartyReply::Reply:
                out.entries[id - 1].payload = Live{round + 1, std::move(r.body)};
                expected_[id - 1] = round + 2;
                break;
            case PartyReply::Silent:
                expected_[id - 1] = round + 1;
                break;
        }
        if (parties_[id - 1].finished()) st = SessionStatus::Completed;
    }

    std::vector<P> parties_;
    std::vector<std::uint32_t> expected_;
    std::vector<SessionStatus> status_;
    std::optional<Pending> pending_;
    std::vector<DeviationEvent> deviations_;
    std::uint64_t steps_ = 0;
};

/// The side that writes bundles: a Q-session verifier or an extractor.
/// It keeps its own randomness so that copying it snapshots its tape.
template <typename D>
concept ConcurrentDriver = std::copyable<D> && requires(D d, const BundledMessage &reply, const TranscriptMessage &m) {
    { d.next() } -> std::same_as<std::optional<BundledMessage>>;
    { d.observe(reply) };
    { d.on_message(m) };
};

/// Engine plus driver, advanced one transcript message at a time. Copyable
/// so that a simulator can checkpoint the whole world.
template <SessionParty P, ConcurrentDriver D>
class World {
   public:
    enum class Advance { Message, Silent, Done };

    World(Engine<P> engine, D driver) : engine_(std::move(engine)), driver_(std::move(driver)) {
    }

    Engine<P> &engine() {
        return engine_;
    }
    const Engine<P> &engine() const {
        return engine_;
    }
    D &driver() {
        return driver_;
    }
    const D &driver() const {
        return driver_;
    }

    /// Emits at most one message into `log`. Prover randomness comes from
    /// `prover_rng` and is consumed only when a reply is actually computed.
    Advance advance(Rng &prover_rng, std::vector<TranscriptMessage> &log) {
        if (engine_.has_pending()) {
            auto [reply, msg] = engine_.complete(prover_rng);
            if (msg) push(*msg, log);
            driver_.observe(reply);
            return msg ? Advance::Message : Advance::Silent;
        }
        auto bundle = driver_.next();
        if (!bundle) return Advance::Done;
        auto d = engine_.deliver(*bundle, prover_rng);
        if (d.message) push(*d.message, log);
        if (!d.reply_pending) driver_.observe(d.reply);
        return d.message ? Advance::Message : Advance::Silent;
    }

   private:
    void push(const TranscriptMessage &m, std::vector<TranscriptMessage> &log) {
        log.push_back(m);
        driver_.on_message(m);
    }

    Engine<P> engine_;
    D driver_;
};

/// Drives a world to completion. Throws StallError past `step_budget`.
template <SessionParty P, ConcurrentDriver D>
TranscriptSet run(World<P, D> &world, Rng &prover_rng, std::uint64_t step_budget, std::uint64_t seed = 0) {
    TranscriptSet t;
    t.q = world.engine().sessions();
    t.seed = seed;
    for (;;) {
        if (world.engine().steps() > step_budget) throw StallError("engine step budget exceeded");
        if (world.advance(prover_rng, t.order) == World<P, D>::Advance::Done) break;
    }
    t.status = world.engine().statuses();
    t.deviations = world.engine().deviations();
    return t;
}

// ---------------------------------------------------------------------------
// Schedulers: which session's verifier speaks next.

struct Scheduler {
    enum Kind { RoundRobin, RandomInterleave, BlockStaggered, Abortive } kind = RoundRobin;
    std::uint64_t span = 1;
    double p_abort = 0;
    std::uint64_t seed = 0;

    static Scheduler round_robin(std::uint64_t seed = 0) {
        return {RoundRobin, 1, 0, seed};
    }
    static Scheduler random_interleave(std::uint64_t seed = 0) {
        return {RandomInterleave, 1, 0, seed};
    }
    static Scheduler block_staggered(std::uint64_t span, std::uint64_t seed = 0) {
        if (span < 1) throw ValidationError("staggered span must be >= 1");
        return {BlockStaggered, span, 0, seed};
    }
    static Scheduler abortive(double p, std::uint64_t seed = 0) {
        if (p < 0 || p > 1) throw ValidationError("abort probability outside [0,1]");
        return {Abortive, 1, p, seed};
    }
};

class SchedulerState {
   public:
    struct Choice {
        std::uint32_t session;
        bool abort;
    };

    explicit SchedulerState(Scheduler cfg = {}) : cfg_(cfg), pick_(derive_seed(cfg.seed, 1)), abort_(derive_seed(cfg.seed, 2)) {
    }

    /// `ready` is the sorted list of session ids whose verifier may speak.
    Choice pick(const std::vector<std::uint32_t> &ready) {
        if (ready.empty()) throw ProtocolError("scheduler called with no ready session");
        std::uint32_t s = 0;
        switch (cfg_.kind) {
            case Scheduler::RoundRobin: s = after(ready, last_); break;
            case Scheduler::RandomInterleave:
            case Scheduler::Abortive: s = ready[pick_.uniform(ready.size())]; break;
            case Scheduler::BlockStaggered:
                if (run_left_ > 0 && contains(ready, last_)) {
                    s = last_;
                } else {
                    s = after(ready, last_);
                    run_left_ = cfg_.span;
                }
                --run_left_;
                break;
        }
        last_ = s;
        bool ab = cfg_.kind == Scheduler::Abortive && abort_.bernoulli(cfg_.p_abort);
        return {s, ab};
    }

    const Scheduler &config() const {
        return cfg_;
    }
    bool operator==(const SchedulerState &) const = default;

   private:
    static bool contains(const std::vector<std::uint32_t> &v, std::uint32_t x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    }
    static std::uint32_t after(const std::vector<std::uint32_t> &ready, std::uint32_t last) {
        for (auto s : ready)
            if (s > last) return s;
        return ready.front();
    }

    Scheduler cfg_;
    Rng pick_;
    Rng abort_;
    std::uint32_t last_ = 0;
    std::uint64_t run_left_ = 0;
};

}  // namespace bcqzk
