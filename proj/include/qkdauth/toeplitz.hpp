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

#ifndef QKDAUTH_TOEPLITZ_HPP
#define QKDAUTH_TOEPLITZ_HPP

#include <cstddef>

#include "qkdauth/bitstring.hpp"
#include "qkdauth/errors.hpp"

namespace qkdauth {

/// Diagonal parameters of an n x r binary Toeplitz matrix. The matrix is
/// constant along each diagonal and fully determined by r + n - 1 bits t via
///
///     M[i][j] = t[i - j + r - 1],   0 <= i < n, 0 <= j < r.
///
/// The indexing convention is part of the wire contract: tags depend on it.
struct ToeplitzDiagonals {
    std::size_t input_bits = 0;  // r, matrix columns
    std::size_t output_bits = 0; // n, matrix rows
    BitString diagonals;         // r + n - 1 bits

    ToeplitzDiagonals() = default;

    ToeplitzDiagonals(std::size_t r, std::size_t n, BitString t)
        : input_bits(r), output_bits(n), diagonals(std::move(t)) {
        if (diagonals.size() != diagonal_bits(r, n))
            throw DimensionError("Toeplitz diagonal vector must hold r + n - 1 bits");
    }

    static std::size_t diagonal_bits(std::size_t r, std::size_t n) {
        if (r == 0 || n == 0)
            throw DimensionError("Toeplitz dimensions must be at least 1x1");
        return r + n - 1;
    }

    bool entry(std::size_t i, std::size_t j) const {
        assert(i < output_bits && j < input_bits);
        return diagonals.bit(i - j + input_bits - 1);
    }
};

/// GF(2) matrix-vector product M z for the matrix described by d. Dense
/// evaluation; a word-sliced product would have to match this bit-exactly.
inline BitString toeplitz_mul(const ToeplitzDiagonals& d, const BitString& z) {
    if (z.size() != d.input_bits)
        throw DimensionError("toeplitz_mul: input width mismatch");
    const std::size_t r = d.input_bits;
    const std::size_t n = d.output_bits;
    BitString out = BitString::zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool acc = false;
        for (std::size_t j = 0; j < r; ++j) {
            if (z.bit(j)) acc ^= d.diagonals.bit(i - j + r - 1);
        }
        if (acc) out.set_bit(i, true);
    }
    return out;
}

} // namespace qkdauth

#endif // QKDAUTH_TOEPLITZ_HPP
