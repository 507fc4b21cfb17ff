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

#ifndef QKDAUTH_WCAUTH_HPP
#define QKDAUTH_WCAUTH_HPP

#include <cmath>
#include <cstdint>
#include <optional>

#include "qkdauth/bitstring.hpp"
#include "qkdauth/errors.hpp"
#include "qkdauth/hashfam.hpp"
#include "qkdauth/keypool.hpp"

namespace qkdauth {

/// Dimensions and key budget of the iterated-kernel authentication of one
/// m-bit message with an n-bit tag.
///
/// The intermediate width is s = n + log2(log2(m)). The classical budget
/// k = 4 * s * log2(m) is real-valued and is reported as key_bits_formula for
/// reproducing crossover comparisons; actual hashing needs an integer width,
/// s_int = n + ceil(log2(ceil(log2(m)))), and consumes key_bits_actual =
/// levels * (4 * s_int - 1) bits, one kernel function per reduction level.
struct WcParams {
    std::uint64_t message_bits = 0;
    std::uint64_t tag_bits = 0;
    double s_real = 0.0;
    std::uint64_t s_int = 0;
    std::uint64_t levels = 0;
    double key_bits_formula = 0.0;
    std::uint64_t key_bits_actual = 0;
};

namespace detail {

inline std::uint64_t ceil_log2_u64(std::uint64_t v) {
    std::uint64_t bits = 0;
    std::uint64_t pow = 1;
    while (pow < v) {
        pow <<= 1;
        ++bits;
    }
    return bits;
}

/// Reduction rounds until a single kernel output block remains, starting
/// from a b-bit string and halving 2s-bit blocks to s bits each round.
inline std::uint64_t wc_level_count(std::uint64_t message_bits, std::uint64_t s) {
    std::uint64_t levels = 0;
    std::uint64_t b = message_bits;
    for (;;) {
        const std::uint64_t blocks = (b + 2 * s - 1) / (2 * s);
        ++levels;
        b = blocks * s;
        if (blocks == 1) break;
    }
    return levels;
}

} // namespace detail

inline WcParams wc_params(std::uint64_t message_bits, std::uint64_t tag_bits) {
    if (tag_bits < 1 || message_bits <= tag_bits)
        throw DimensionError("message must be longer than the tag");
    if (message_bits < 4)
        throw DimensionError("message must be at least 4 bits");
    WcParams p;
    p.message_bits = message_bits;
    p.tag_bits = tag_bits;
    const double log2m = std::log2(static_cast<double>(message_bits));
    p.s_real = static_cast<double>(tag_bits) + std::log2(log2m);
    p.key_bits_formula = 4.0 * p.s_real * log2m;
    p.s_int = tag_bits + detail::ceil_log2_u64(detail::ceil_log2_u64(message_bits));
    p.levels = detail::wc_level_count(message_bits, p.s_int);
    p.key_bits_actual = p.levels * (4 * p.s_int - 1);
    return p;
}

/// Iterated-kernel tag: zero-pad to a multiple of 2s bits, hash every
/// 2s-bit block to s bits with ONE freshly drawn kernel function (same key
/// for all blocks of a level, a fresh key per level), concatenate, and
/// repeat until a single s-bit block remains. The tag is its low-order
/// tag_bits bits.
///
/// Pool exhaustion mid-computation aborts with no partial tag; bits drawn
/// for completed levels stay spent.
inline BitString wc_tag(const BitString& message, KeyPool& pool, std::uint64_t tag_bits) {
    const WcParams p = wc_params(message.size(), tag_bits);
    const std::size_t s = p.s_int;
    BitString current = message;
    for (;;) {
        const BitString padded = current.padded_to_multiple(2 * s);
        const std::size_t blocks = padded.size() / (2 * s);
        const ToeplitzAffineKey key = draw_affine_key(pool, 2 * s, s, "wc-level-key");
        BitString next;
        for (std::size_t b = 0; b < blocks; ++b)
            next.append(eval_affine(key, padded.slice(b * 2 * s, 2 * s)));
        current = next;
        if (blocks == 1) break;
    }
    return current.slice(0, tag_bits);
}

/// Recompute the tag from the verifier's pool replica and compare. Pool bits
/// are consumed whether or not the tag matches. When the tagger's cursor
/// (taken before it drew) is supplied, a mismatch against this replica
/// raises PoolDesyncError before anything is consumed: a protocol abort
/// distinct from a reject.
inline bool wc_verify(const BitString& message, const BitString& tag, KeyPool& pool,
                      std::uint64_t tag_bits,
                      std::optional<std::uint64_t> expected_cursor = std::nullopt) {
    if (expected_cursor) ensure_synchronized(pool, *expected_cursor);
    const BitString recomputed = wc_tag(message, pool, tag_bits);
    return recomputed == tag;
}

} // namespace qkdauth

#endif // QKDAUTH_WCAUTH_HPP
