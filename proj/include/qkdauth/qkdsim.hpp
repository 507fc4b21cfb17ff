// Copyright 2026 The qkdauth Authors.
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

#ifndef QKDAUTH_QKDSIM_HPP
#define QKDAUTH_QKDSIM_HPP

// Deterministic two-party session simulator. The quantum phase is stubbed:
// raw keys and protocol extracts are seeded-random bit strings, standing for
// the sifting discussion and error-correction results that the public
// channel must authenticate. What is exercised is the authentication layer:
// per-extract tagging, verification against a pool replica, abort on reject,
// and the key-growing bookkeeping. An in-line adversary can tamper with the
// channel; its per-message success rate is what the security bound caps.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qkdauth/bitstring.hpp"
#include "qkdauth/errors.hpp"
#include "qkdauth/keypool.hpp"
#include "qkdauth/sha256.hpp"
#include "qkdauth/twostep.hpp"
#include "qkdauth/wcauth.hpp"

namespace qkdauth {

/// Deterministic byte source: SHA-256 in counter mode over a 256-bit seed.
/// Bit-exact across platforms, so campaign results are reproducible from the
/// seed alone.
class CtrRng {
public:
    explicit CtrRng(const std::array<std::uint8_t, 32>& seed) : seed_(seed) {}

    static std::array<std::uint8_t, 32> seed_from_u64(std::uint64_t v) {
        std::array<std::uint8_t, 32> s{};
        const auto be = be64(v);
        std::copy(be.begin(), be.end(), s.begin() + 24);
        return s;
    }

    std::array<std::uint8_t, 32> fork_seed(std::uint64_t index) const {
        Sha256 h;
        h.update(seed_.data(), seed_.size());
        h.update("fork", 4);
        const auto be = be64(index);
        h.update(be.data(), be.size());
        return h.finish();
    }

    CtrRng fork(std::uint64_t index) const { return CtrRng(fork_seed(index)); }

    std::uint8_t next_byte() {
        if (pos_ == buf_.size()) {
            Sha256 h;
            h.update(seed_.data(), seed_.size());
            const auto be = be64(counter_++);
            h.update(be.data(), be.size());
            buf_ = h.finish();
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    BitString next_bits(std::size_t count) {
        std::vector<std::uint8_t> bytes((count + 7) / 8);
        for (auto& b : bytes) b = next_byte();
        return BitString::from_bytes(bytes, count);
    }

    std::uint64_t next_u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | next_byte();
        return v;
    }

private:
    std::array<std::uint8_t, 32> seed_;
    std::uint64_t counter_ = 0;
    std::array<std::uint8_t, 32> buf_{};
    std::size_t pos_ = buf_.size();
};

enum class Scheme { wegman_carter, two_step };

inline const char* to_string(Scheme s) {
    return s == Scheme::wegman_carter ? "wc" : "twostep";
}

/// Channel adversary. inject replaces every message with fresh random bits
/// and a random tag; replay resends a previously accepted message and tag in
/// a later slot; mitm_split cuts the channel and runs two independent
/// half-sessions, with the adversary lacking any pool bits of its own.
enum class AdversaryKind { none, inject, replay, mitm_split };

inline const char* to_string(AdversaryKind a) {
    switch (a) {
    case AdversaryKind::none: return "none";
    case AdversaryKind::inject: return "inject";
    case AdversaryKind::replay: return "replay";
    case AdversaryKind::mitm_split: return "mitm-split";
    }
    return "?";
}

struct SessionConfig {
    std::uint64_t raw_key_len = 1024;           // fresh key produced on success
    std::vector<std::uint64_t> extract_lens = {96, 80}; // per-phase message lengths
    Scheme scheme = Scheme::two_step;
    std::uint64_t wc_tag_bits = 64;             // used when scheme == wegman_carter
    TwoStepParams two_step{};                   // used when scheme == two_step
    double reserve_fraction = 0.5;              // share of fresh key deposited back
    /// Authenticate each extract as it is produced (default), or exchange
    /// everything unauthenticated and have each party tag its view of the
    /// full transcript at the end. The latter is the inefficient extreme:
    /// its one-time cost scales with the transcript length.
    bool whole_transcript = false;
    std::array<std::uint8_t, 32> rng_seed{};

    void validate() const {
        if (raw_key_len < 1) throw DimensionError("raw key length must be at least 1");
        if (extract_lens.empty()) throw DimensionError("at least one protocol extract");
        for (std::uint64_t len : extract_lens)
            if (len < 1) throw DimensionError("extract lengths must be at least 1");
        if (!(reserve_fraction >= 0.0 && reserve_fraction <= 1.0))
            throw DimensionError("reserve fraction must lie in [0, 1]");
        if (scheme == Scheme::two_step) two_step.validate();
        if (scheme == Scheme::wegman_carter) {
            if (whole_transcript) {
                (void)wc_params(transcript_bits(), wc_tag_bits);
            } else {
                for (std::uint64_t len : extract_lens) (void)wc_params(len, wc_tag_bits);
            }
        }
    }

    std::uint64_t tag_bits() const {
        return scheme == Scheme::wegman_carter ? wc_tag_bits : two_step.n;
    }

    std::uint64_t transcript_bits() const {
        std::uint64_t total = 0;
        for (std::uint64_t len : extract_lens) total += len;
        return total;
    }

    std::uint64_t reserve_bits() const {
        const double exact = reserve_fraction * static_cast<double>(raw_key_len);
        const auto rounded = static_cast<std::uint64_t>(std::llround(exact));
        return rounded > raw_key_len ? raw_key_len : rounded;
    }

    /// Analytic one-time cost of authenticating one message of this length.
    std::uint64_t message_key_cost(std::uint64_t message_bits) const {
        if (scheme == Scheme::wegman_carter)
            return wc_params(message_bits, wc_tag_bits).key_bits_actual;
        return key_cost(two_step);
    }

    /// Analytic per-replica cost of one clean session: one tag per extract,
    /// or two transcript tags (one per direction) in whole-transcript mode.
    std::uint64_t session_key_cost() const {
        if (whole_transcript) return 2 * message_key_cost(transcript_bits());
        std::uint64_t total = 0;
        for (std::uint64_t len : extract_lens) total += message_key_cost(len);
        return total;
    }

    /// Pool bits one replica needs for a full session, with slack for a
    /// verification of an off-length (replayed or spliced) message.
    std::uint64_t pool_bits_required() const {
        std::uint64_t worst_len = 0;
        for (std::uint64_t len : extract_lens) worst_len = std::max(worst_len, len);
        if (whole_transcript)
            return 3 * message_key_cost(extract_lens.size() * worst_len);
        return session_key_cost() + message_key_cost(worst_len);
    }
};

struct TranscriptRecord {
    std::string direction; // "A->B", "B->A", "E->A", ...
    std::string phase;
    std::uint64_t length = 0;
    std::string tag_hex;   // empty for unauthenticated extracts
    std::string verdict;   // "accept", "reject", "desync-abort", "exhausted-abort",
                           // "observed", "unauthenticated"
};

using TranscriptSink = std::function<void(const TranscriptRecord&)>;

/// Outcome of one simulated session. key_consumed / key_deposited are taken
/// from the replica with the most activity; outside mitm-split the two
/// replicas move in lockstep and the numbers are exact for either.
struct SessionReport {
    std::uint64_t messages_sent = 0;
    std::vector<bool> verifications;
    bool aborted = false;
    bool adversary_succeeded = false;
    std::uint64_t forgery_attempts = 0;
    std::uint64_t forgery_accepts = 0;
    std::uint64_t key_consumed = 0;
    std::uint64_t key_deposited = 0;
};

namespace detail {

inline std::string phase_label(std::size_t slot) {
    if (slot == 0) return "sifting";
    if (slot == 1) return "error-correction";
    return "extract-" + std::to_string(slot);
}

inline BitString scheme_tag(const SessionConfig& cfg, const BitString& msg, KeyPool& pool) {
    if (cfg.scheme == Scheme::wegman_carter) return wc_tag(msg, pool, cfg.wc_tag_bits);
    return twostep_tag(msg, pool, cfg.two_step);
}

inline bool scheme_verify(const SessionConfig& cfg, const BitString& msg, const BitString& tag,
                          KeyPool& pool, std::optional<std::uint64_t> expected_cursor) {
    if (cfg.scheme == Scheme::wegman_carter)
        return wc_verify(msg, tag, pool, cfg.wc_tag_bits, expected_cursor);
    return twostep_verify(msg, tag, pool, cfg.two_step, expected_cursor);
}

inline void emit(const TranscriptSink& sink, std::string direction, std::string phase,
                 std::uint64_t length, std::string tag_hex, std::string verdict) {
    if (!sink) return;
    sink(TranscriptRecord{std::move(direction), std::move(phase), length, std::move(tag_hex),
                          std::move(verdict)});
}

// One half of a split man-in-the-middle attack: the adversary impersonates
// the absent peer. Messages from the legitimate party are absorbed without
// verification (the adversary has nothing to check them against and no need
// to); messages toward the party carry adversary-chosen bits and a blind
// random tag, which is all an adversary without pool bits can do. Returns
// true when the party saw nothing wrong and would complete the session.
inline bool run_mitm_leg(const SessionConfig& cfg, KeyPool& party_pool, bool party_sends_even,
                         CtrRng& rng, SessionReport& rep, const TranscriptSink& sink,
                         const std::string& party_name) {
    BitString party_view; // transcript as this party sees it (whole-transcript mode)
    for (std::size_t slot = 0; slot < cfg.extract_lens.size(); ++slot) {
        const std::uint64_t len = cfg.extract_lens[slot];
        const bool party_sends = (slot % 2 == 0) == party_sends_even;
        const BitString msg = rng.next_bits(len);
        if (cfg.whole_transcript) {
            party_view.append(msg);
            emit(sink, party_sends ? party_name + "->E" : "E->" + party_name,
                 phase_label(slot), len, "", "unauthenticated");
            if (party_sends) ++rep.messages_sent;
            continue;
        }
        if (party_sends) {
            try {
                const BitString tag = scheme_tag(cfg, msg, party_pool);
                ++rep.messages_sent;
                emit(sink, party_name + "->E", phase_label(slot), len, tag.to_hex(), "observed");
            } catch (const PoolExhaustedError&) {
                return false;
            }
        } else {
            const BitString forged_tag = rng.next_bits(cfg.tag_bits());
            ++rep.forgery_attempts;
            bool accept = false;
            std::string verdict;
            try {
                accept = scheme_verify(cfg, msg, forged_tag, party_pool, std::nullopt);
                verdict = accept ? "accept" : "reject";
            } catch (const PoolExhaustedError&) {
                verdict = "exhausted-abort";
            }
            emit(sink, "E->" + party_name, phase_label(slot), len, forged_tag.to_hex(), verdict);
            rep.verifications.push_back(accept);
            if (!accept) return false;
            ++rep.forgery_accepts;
            rep.adversary_succeeded = true;
        }
    }
    if (cfg.whole_transcript) {
        // The party authenticates its transcript view toward the adversary,
        // then verifies the (blindly forged) transcript tag coming back.
        try {
            const BitString tag = scheme_tag(cfg, party_view, party_pool);
            ++rep.messages_sent;
            emit(sink, party_name + "->E", "transcript", party_view.size(), tag.to_hex(),
                 "observed");
        } catch (const PoolExhaustedError&) {
            return false;
        }
        const BitString forged_tag = rng.next_bits(cfg.tag_bits());
        ++rep.forgery_attempts;
        bool accept = false;
        std::string verdict;
        try {
            accept = scheme_verify(cfg, party_view, forged_tag, party_pool, std::nullopt);
            verdict = accept ? "accept" : "reject";
        } catch (const PoolExhaustedError&) {
            verdict = "exhausted-abort";
        }
        emit(sink, "E->" + party_name, "transcript", party_view.size(), forged_tag.to_hex(),
             verdict);
        rep.verifications.push_back(accept);
        if (!accept) return false;
        ++rep.forgery_accepts;
        rep.adversary_succeeded = true;
    }
    return true;
}

} // namespace detail

/// Run one session between deterministic state machines for the two parties,
/// with the configured adversary in the channel. Preconditions: the two pools
/// are synchronized replicas (bit-identical, equal cursors); a mismatch is a
/// configuration error. Each extract is tagged and verified as it is
/// produced (or the transcript views are mutually authenticated at the end,
/// in whole-transcript mode); any reject aborts the session and nothing is
/// deposited.
inline SessionReport run_session(const SessionConfig& cfg, KeyPool& alice, KeyPool& bob,
                                 AdversaryKind adversary, const TranscriptSink& sink = {}) {
    cfg.validate();
    SessionReport rep;
    CtrRng rng(cfg.rng_seed);
    const std::uint64_t start_a = alice.cursor();
    const std::uint64_t start_b = bob.cursor();
    const std::uint64_t dep_a0 = alice.total_deposited();
    const std::uint64_t dep_b0 = bob.total_deposited();

    if (adversary == AdversaryKind::mitm_split) {
        // The channel is cut: Alice talks to the adversary, and so does Bob,
        // in two independent half-sessions.
        const bool alice_clean = detail::run_mitm_leg(cfg, alice, true, rng, rep, sink, "A");
        const bool bob_clean = detail::run_mitm_leg(cfg, bob, false, rng, rep, sink, "B");
        rep.aborted = !(alice_clean && bob_clean);
        if (!rep.aborted) {
            // Every blind forgery was accepted: both parties complete their
            // hijacked sessions and bank key they now share with the
            // adversary.
            alice.deposit(rng.next_bits(cfg.raw_key_len).slice(0, cfg.reserve_bits()),
                          "session-reserve");
            bob.deposit(rng.next_bits(cfg.raw_key_len).slice(0, cfg.reserve_bits()),
                        "session-reserve");
        }
    } else {
        if (alice.cursor() != bob.cursor() || !(alice.contents() == bob.contents()))
            throw PoolDesyncError("party pools are not synchronized replicas");
        if (cfg.whole_transcript) {
            std::optional<BitString> wiretap_extract;
            std::uint64_t tampered = 0;
            BitString alice_view, bob_view;
            for (std::size_t slot = 0; slot < cfg.extract_lens.size(); ++slot) {
                const std::uint64_t len = cfg.extract_lens[slot];
                const bool alice_sends = (slot % 2 == 0);
                const BitString msg = rng.next_bits(len);
                BitString delivered = msg;
                if (adversary == AdversaryKind::inject) {
                    delivered = rng.next_bits(len);
                    ++tampered;
                } else if (adversary == AdversaryKind::replay && wiretap_extract) {
                    delivered = *wiretap_extract;
                    ++tampered;
                }
                if (!wiretap_extract) wiretap_extract = delivered;
                (alice_sends ? alice_view : bob_view).append(msg);
                (alice_sends ? bob_view : alice_view).append(delivered);
                ++rep.messages_sent;
                detail::emit(sink, alice_sends ? "A->B" : "B->A", detail::phase_label(slot),
                             delivered.size(), "", "unauthenticated");
            }
            rep.forgery_attempts = tampered;
            // Mutual transcript authentication: a tampered extract leaves the
            // two views different, so the recomputed tag cannot match.
            struct Leg {
                KeyPool& tagger;
                KeyPool& verifier;
                const BitString& tag_view;
                const BitString& verify_view;
                const char* direction;
            };
            const Leg legs[2] = {{alice, bob, alice_view, bob_view, "A->B"},
                                 {bob, alice, bob_view, alice_view, "B->A"}};
            for (const Leg& leg : legs) {
                const std::uint64_t cursor_before = leg.tagger.cursor();
                BitString tag;
                try {
                    tag = detail::scheme_tag(cfg, leg.tag_view, leg.tagger);
                } catch (const PoolExhaustedError&) {
                    rep.aborted = true;
                    break;
                }
                ++rep.messages_sent;
                bool accept = false;
                std::string verdict;
                try {
                    accept = detail::scheme_verify(cfg, leg.verify_view, tag, leg.verifier,
                                                   cursor_before);
                    verdict = accept ? "accept" : "reject";
                } catch (const PoolDesyncError&) {
                    verdict = "desync-abort";
                } catch (const PoolExhaustedError&) {
                    verdict = "exhausted-abort";
                }
                detail::emit(sink, leg.direction, "transcript", leg.tag_view.size(),
                             tag.to_hex(), verdict);
                rep.verifications.push_back(accept);
                if (!accept) {
                    rep.aborted = true;
                    break;
                }
            }
            if (!rep.aborted && tampered > 0) {
                // Tampering slipped through both transcript checks.
                rep.forgery_accepts = tampered;
                rep.adversary_succeeded = true;
            }
        } else {
            std::optional<std::pair<BitString, BitString>> wiretap; // replay material
            for (std::size_t slot = 0; slot < cfg.extract_lens.size(); ++slot) {
                const std::uint64_t len = cfg.extract_lens[slot];
                const bool alice_sends = (slot % 2 == 0);
                KeyPool& sender = alice_sends ? alice : bob;
                KeyPool& receiver = alice_sends ? bob : alice;
                const std::string direction = alice_sends ? "A->B" : "B->A";

                const BitString msg = rng.next_bits(len);
                const std::uint64_t cursor_before = sender.cursor();
                BitString tag;
                try {
                    tag = detail::scheme_tag(cfg, msg, sender);
                } catch (const PoolExhaustedError&) {
                    rep.aborted = true;
                    break;
                }
                ++rep.messages_sent;

                BitString delivered_msg = msg;
                BitString delivered_tag = tag;
                bool forged = false;
                if (adversary == AdversaryKind::inject) {
                    delivered_msg = rng.next_bits(len);
                    delivered_tag = rng.next_bits(cfg.tag_bits());
                    forged = true;
                } else if (adversary == AdversaryKind::replay && wiretap) {
                    delivered_msg = wiretap->first;
                    delivered_tag = wiretap->second;
                    forged = true;
                }

                bool accept = false;
                std::string verdict;
                try {
                    accept = detail::scheme_verify(cfg, delivered_msg, delivered_tag, receiver,
                                                   cursor_before);
                    verdict = accept ? "accept" : "reject";
                } catch (const PoolDesyncError&) {
                    verdict = "desync-abort";
                } catch (const PoolExhaustedError&) {
                    verdict = "exhausted-abort";
                }
                detail::emit(sink, direction, detail::phase_label(slot), delivered_msg.size(),
                             delivered_tag.to_hex(), verdict);
                rep.verifications.push_back(accept);
                if (forged) {
                    ++rep.forgery_attempts;
                    if (accept) {
                        ++rep.forgery_accepts;
                        rep.adversary_succeeded = true;
                    }
                }
                if (!forged && accept && !wiretap) wiretap = std::make_pair(msg, tag);
                if (!accept) {
                    rep.aborted = true;
                    break;
                }
            }
        }
        if (!rep.aborted) {
            const BitString fresh = rng.next_bits(cfg.raw_key_len);
            const BitString slice = fresh.slice(0, cfg.reserve_bits());
            alice.deposit(slice, "session-reserve");
            bob.deposit(slice, "session-reserve");
        }
    }

    rep.key_consumed = std::max(alice.cursor() - start_a, bob.cursor() - start_b);
    rep.key_deposited =
        std::max(alice.total_deposited() - dep_a0, bob.total_deposited() - dep_b0);
    return rep;
}

/// Aggregate statistics over independently seeded sessions.
struct CampaignStats {
    std::uint64_t trials = 0;
    std::uint64_t sessions_aborted = 0;
    std::uint64_t messages_total = 0;
    std::uint64_t forgery_attempts = 0;
    std::uint64_t forgery_accepts = 0;
    std::uint64_t key_consumed_total = 0;
    std::uint64_t key_deposited_total = 0;
    double forgery_acceptance_rate = 0.0; // accepts / attempts (0 when no attempts)
    double abort_rate = 0.0;
    std::optional<double> mean_growth_ratio; // total deposited / total consumed
};

/// Run `trials` sessions with per-trial derived seeds and fresh synchronized
/// pool replicas sized for the session. Deterministic: identical (cfg,
/// adversary, trials, seed) yield identical statistics.
inline CampaignStats run_campaign(const SessionConfig& cfg, AdversaryKind adversary,
                                  std::uint64_t trials, const std::array<std::uint8_t, 32>& seed) {
    if (trials < 1) throw DimensionError("campaign needs at least one trial");
    cfg.validate();
    const std::uint64_t pool_need = cfg.pool_bits_required();
    const CtrRng root(seed);
    CampaignStats stats;
    stats.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        CtrRng pool_rng = root.fork(2 * t);
        SessionConfig c = cfg;
        c.rng_seed = root.fork_seed(2 * t + 1);
        const BitString material = pool_rng.next_bits(pool_need);
        KeyPool alice(material);
        KeyPool bob(material);
        const SessionReport rep = run_session(c, alice, bob, adversary);
        stats.sessions_aborted += rep.aborted ? 1 : 0;
        stats.messages_total += rep.messages_sent;
        stats.forgery_attempts += rep.forgery_attempts;
        stats.forgery_accepts += rep.forgery_accepts;
        stats.key_consumed_total += rep.key_consumed;
        stats.key_deposited_total += rep.key_deposited;
    }
    if (stats.forgery_attempts > 0)
        stats.forgery_acceptance_rate = static_cast<double>(stats.forgery_accepts) /
                                        static_cast<double>(stats.forgery_attempts);
    stats.abort_rate =
        static_cast<double>(stats.sessions_aborted) / static_cast<double>(trials);
    if (stats.key_consumed_total > 0)
        stats.mean_growth_ratio = static_cast<double>(stats.key_deposited_total) /
                                  static_cast<double>(stats.key_consumed_total);
    return stats;
}

} // namespace qkdauth

#endif // QKDAUTH_QKDSIM_HPP
