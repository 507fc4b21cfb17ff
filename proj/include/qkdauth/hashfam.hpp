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

#ifndef QKDAUTH_HASHFAM_HPP
#define QKDAUTH_HASHFAM_HPP

#include <cstddef>
#include <string>

#include "qkdauth/bitstring.hpp"
#include "qkdauth/errors.hpp"
#include "qkdauth/keypool.hpp"
#include "qkdauth/toeplitz.hpp"

namespace qkdauth {

/// Secret bits required to index one function of the Toeplitz-affine family
/// mapping r-bit inputs to n-bit tags: r + n - 1 diagonal bits plus n offset
/// bits, r + 2n - 1 in total.
inline std::size_t affine_key_length(std::size_t r, std::size_t n) {
    if (r == 0 || n == 0)
        throw DimensionError("affine_key_length: dimensions must be at least 1");
    return r + 2 * n - 1;
}

/// The secret index of one function f(z) = Mz + b from the Toeplitz-affine
/// strongly universal_2 family. Serialized form is the diagonal vector first
/// (r + n - 1 bits) followed by the offset (n bits), packed in BitString
/// layout; both sides of a channel must deserialize pool bits identically.
struct ToeplitzAffineKey {
    ToeplitzDiagonals diag;
    BitString beta;

    ToeplitzAffineKey(ToeplitzDiagonals d, BitString b)
        : diag(std::move(d)), beta(std::move(b)) {
        if (beta.size() != diag.output_bits)
            throw DimensionError("affine offset must be n bits");
    }

    std::size_t input_bits() const noexcept { return diag.input_bits; }
    std::size_t output_bits() const noexcept { return diag.output_bits; }
    std::size_t key_bits() const { return affine_key_length(diag.input_bits, diag.output_bits); }

    BitString serialize() const { return concat(diag.diagonals, beta); }

    static ToeplitzAffineKey deserialize(const BitString& raw, std::size_t r, std::size_t n) {
        if (raw.size() != affine_key_length(r, n))
            throw DimensionError("serialized affine key must hold r + 2n - 1 bits");
        const std::size_t diag_bits = r + n - 1;
        return ToeplitzAffineKey(ToeplitzDiagonals(r, n, raw.slice(0, diag_bits)),
                                 raw.slice(diag_bits, n));
    }
};

/// f(z) = Mz + b over GF(2).
inline BitString eval_affine(const ToeplitzAffineKey& key, const BitString& z) {
    BitString out = toeplitz_mul(key.diag, z);
    out ^= key.beta;
    return out;
}

/// Consume exactly r + 2n - 1 bits from the pool, in order, and interpret
/// them as one fresh affine key. Aborts (without a key) when the pool cannot
/// cover the full draw.
inline ToeplitzAffineKey draw_affine_key(KeyPool& pool, std::size_t r, std::size_t n,
                                         std::string label = "affine-key") {
    const BitString raw = pool.draw(affine_key_length(r, n), std::move(label));
    return ToeplitzAffineKey::deserialize(raw, r, n);
}

/// Shape of one strongly universal_2 family used as a compression kernel.
struct KernelFamily {
    std::size_t input_bits = 0;
    std::size_t output_bits = 0;
    std::size_t key_bits = 0;
};

/// The 2s -> s kernel used by the iterated tree construction: the
/// Toeplitz-affine family with r = 2s, n = s, costing 4s - 1 key bits per
/// drawn function.
inline KernelFamily wc_kernel(std::size_t s) {
    if (s == 0) throw DimensionError("kernel width must be at least 1");
    return KernelFamily{2 * s, s, affine_key_length(2 * s, s)};
}

} // namespace qkdauth

#endif // QKDAUTH_HASHFAM_HPP
