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

#ifndef QKDAUTH_TWOSTEP_HPP
#define QKDAUTH_TWOSTEP_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "qkdauth/bitstring.hpp"
#include "qkdauth/errors.hpp"
#include "qkdauth/hashfam.hpp"
#include "qkdauth/keypool.hpp"
#include "qkdauth/sha256.hpp"

namespace qkdauth {

/// The fixed public first-step hash, chosen per configuration:
///  - sha_truncate: one SHA-256 digest over the length-framed message,
///    truncated to r bits (r <= 256 only);
///  - sha_expand: counter-mode SHA-256 blocks over the length-framed
///    message, truncated to r bits (any r);
///  - linear_fold: XOR of the zero-padded r-bit blocks of the message, a
///    GF(2)-linear surjection with uniform preimage sizes. Its collision
///    behavior is exactly enumerable, unlike SHA's.
enum class F0Kind { sha_truncate, sha_expand, linear_fold };

inline const char* to_string(F0Kind k) {
    switch (k) {
    case F0Kind::sha_truncate: return "sha-truncate";
    case F0Kind::sha_expand: return "sha-expand";
    case F0Kind::linear_fold: return "linear-fold";
    }
    return "?";
}

/// Two-step tagging configuration. The intended regime is m > r > n; r >= m
/// is permitted but degenerate (the first step then expands rather than
/// compresses, and the efficiency argument no longer applies).
struct TwoStepParams {
    std::size_t r = 256;       // intermediate width
    std::size_t n = 64;        // tag width
    F0Kind f0 = F0Kind::sha_truncate;
    bool randomize = false;    // XOR the message with a seeded keystream first
    std::size_t seed_bits = 128;

    void validate() const {
        if (r == 0 || n == 0) throw DimensionError("widths must be at least 1");
        if (f0 == F0Kind::sha_truncate && r > 256)
            throw DimensionError("sha-truncate supports at most 256 intermediate bits");
        if (randomize && seed_bits == 0)
            throw DimensionError("randomizer needs a nonempty seed");
    }

    bool degenerate_for(std::size_t message_bits) const { return r >= message_bits; }
};

namespace detail {

inline BitString sha_truncate_bits(const BitString& l, std::size_t r) {
    Sha256 h;
    h.update(l.bytes().data(), l.bytes().size());
    const auto len = be64(l.size());
    h.update(len.data(), len.size());
    const auto digest = h.finish();
    return BitString::from_bytes(digest, 256).slice(0, r);
}

inline BitString sha_expand_bits(const BitString& l, std::size_t r) {
    BitString out;
    std::uint32_t counter = 0;
    while (out.size() < r) {
        Sha256 h;
        h.update(l.bytes().data(), l.bytes().size());
        const auto len = be64(l.size());
        h.update(len.data(), len.size());
        const auto ctr = be32(counter++);
        h.update(ctr.data(), ctr.size());
        out.append(BitString::from_bytes(h.finish(), 256));
    }
    return out.slice(0, r);
}

} // namespace detail

/// First-step hash into r bits using SHA-256 as a black box. The message is
/// framed with its bit length (8-byte big-endian) so a zero-extension of the
/// payload hashes differently; r > 256 switches to counter-mode blocks with
/// a 32-bit big-endian block index appended after the length.
inline BitString f0_sha(const BitString& l, std::size_t r) {
    if (r == 0) throw DimensionError("intermediate width must be at least 1");
    return r <= 256 ? detail::sha_truncate_bits(l, r) : detail::sha_expand_bits(l, r);
}

/// First-step hash as a homomorphism onto r bits: zero-pad and XOR the r-bit
/// blocks. Every z has exactly 2^(m-r) preimages when the message length m is
/// a multiple of r, which makes the first-step collision probability exactly
/// computable. An empty message folds to the all-zero string.
inline BitString f0_linear_fold(const BitString& l, std::size_t r) {
    if (r == 0) throw DimensionError("intermediate width must be at least 1");
    BitString acc = BitString::zeros(r);
    if (l.empty()) return acc;
    const BitString padded = l.padded_to_multiple(r);
    for (std::size_t off = 0; off < padded.size(); off += r)
        acc ^= padded.slice(off, r);
    return acc;
}

inline BitString apply_f0(const BitString& l, const TwoStepParams& params) {
    params.validate();
    switch (params.f0) {
    case F0Kind::sha_truncate: return detail::sha_truncate_bits(l, params.r);
    case F0Kind::sha_expand: return detail::sha_expand_bits(l, params.r);
    case F0Kind::linear_fold: return f0_linear_fold(l, params.r);
    }
    throw DimensionError("unknown first-step hash kind");
}

/// Uniform randomizer: XOR the message with a deterministic keystream
/// expanded from a pool-drawn seed. Involutory, so the verifier undoes (or
/// rather re-applies) it with the same seed bits.
inline BitString randomize_message(const BitString& l, const BitString& seed) {
    const auto stream = sha256_counter_stream(seed.bytes(), (l.size() + 7) / 8);
    return l ^ BitString::from_bytes(stream, l.size());
}

/// One-time key cost of a single two-step tag. Constant in the message
/// length: the secret indexes only the second-step family (plus the
/// randomizer seed when enabled).
inline std::size_t key_cost(const TwoStepParams& params) {
    params.validate();
    return affine_key_length(params.r, params.n) + (params.randomize ? params.seed_bits : 0);
}

/// Forgery bound of the two-step primitive: the second step contributes
/// 2^-n, the first step at most 2^-r under uniformly distributed messages.
struct SecurityBound {
    double p1_bound = 0.0; // first-step collision term, 2^-r
    double p2 = 0.0;       // universal-family term, 2^-n
    double p_total = 0.0;
};

inline SecurityBound security_bound(std::size_t r, std::size_t n) {
    if (r == 0 || n == 0) throw DimensionError("widths must be at least 1");
    SecurityBound b;
    b.p1_bound = std::ldexp(1.0, -static_cast<int>(r));
    b.p2 = std::ldexp(1.0, -static_cast<int>(n));
    b.p_total = b.p1_bound + b.p2;
    return b;
}

/// Two-step tag: optionally randomize, compress with the fixed public hash,
/// then apply one freshly drawn secret affine function. Consumes exactly
/// key_cost(params) pool bits (seed first, then the affine key) or aborts
/// without emitting a tag.
inline BitString twostep_tag(const BitString& l, KeyPool& pool, const TwoStepParams& params) {
    params.validate();
    if (pool.remaining() < key_cost(params))
        throw PoolExhaustedError("key pool exhausted: two-step tag needs " +
                                 std::to_string(key_cost(params)) + " bits, " +
                                 std::to_string(pool.remaining()) + " left");
    BitString prepared = l;
    if (params.randomize) {
        const BitString seed = pool.draw(params.seed_bits, "randomizer-seed");
        prepared = randomize_message(l, seed);
    }
    const BitString z = apply_f0(prepared, params);
    const ToeplitzAffineKey key = draw_affine_key(pool, params.r, params.n, "twostep-key");
    return eval_affine(key, z);
}

/// Symmetric recomputation against the verifier's pool replica; consumes the
/// same bits whether or not the tag matches. See wc_verify for the cursor
/// synchronization contract.
inline bool twostep_verify(const BitString& l, const BitString& tag, KeyPool& pool,
                           const TwoStepParams& params,
                           std::optional<std::uint64_t> expected_cursor = std::nullopt) {
    if (expected_cursor) ensure_synchronized(pool, *expected_cursor);
    const BitString recomputed = twostep_tag(l, pool, params);
    return recomputed == tag;
}

} // namespace qkdauth

#endif // QKDAUTH_TWOSTEP_HPP
