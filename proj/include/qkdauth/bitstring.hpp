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

#ifndef QKDAUTH_BITSTRING_HPP
#define QKDAUTH_BITSTRING_HPP

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qkdauth/errors.hpp"

namespace qkdauth {

/// An ordered sequence of bits with a fixed byte layout: bit i of the string
/// is bit (i % 8), least-significant first, of byte floor(i / 8). Unused
/// trailing bits of the final byte are always zero, so byte-wise equality of
/// payloads is bit-string equality. Messages, keys and tags are all carried
/// in this representation; tags are bit-exact across implementations that
/// honor the same layout.
class BitString {
public:
    BitString() = default;

    static BitString zeros(std::size_t bit_count) {
        BitString s;
        s.len_ = bit_count;
        s.payload_.assign((bit_count + 7) / 8, 0);
        return s;
    }

    /// Parse a literal such as "1011". Character k of the literal is bit k.
    static BitString from_bits(std::string_view bits) {
        BitString s = zeros(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') {
                s.set_bit(i, true);
            } else if (bits[i] != '0') {
                throw FormatError("bit literal may contain only '0' and '1'");
            }
        }
        return s;
    }

    static BitString from_bytes(std::span<const std::uint8_t> bytes, std::size_t bit_count) {
        if (bytes.size() != (bit_count + 7) / 8)
            throw DimensionError("byte buffer does not match bit count");
        BitString s;
        s.len_ = bit_count;
        s.payload_.assign(bytes.begin(), bytes.end());
        s.mask_tail();
        return s;
    }

    /// Two lowercase hex digits per byte, bytes in order; the bit length is
    /// carried separately. Uppercase digits are accepted on input.
    static BitString from_hex(std::string_view hex, std::size_t bit_count) {
        if (hex.size() != 2 * ((bit_count + 7) / 8))
            throw FormatError("hex length does not match bit count");
        BitString s;
        s.len_ = bit_count;
        s.payload_.reserve(hex.size() / 2);
        for (std::size_t i = 0; i < hex.size(); i += 2) {
            s.payload_.push_back(static_cast<std::uint8_t>(
                (hex_nibble(hex[i]) << 4) | hex_nibble(hex[i + 1])));
        }
        s.mask_tail();
        return s;
    }

    std::size_t size() const noexcept { return len_; }
    bool empty() const noexcept { return len_ == 0; }
    const std::vector<std::uint8_t>& bytes() const noexcept { return payload_; }

    bool bit(std::size_t i) const {
        assert(i < len_);
        return (payload_[i >> 3] >> (i & 7)) & 1u;
    }

    void set_bit(std::size_t i, bool value) {
        assert(i < len_);
        const std::uint8_t mask = static_cast<std::uint8_t>(1u << (i & 7));
        if (value)
            payload_[i >> 3] |= mask;
        else
            payload_[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }

    BitString slice(std::size_t offset, std::size_t count) const {
        if (offset + count > len_)
            throw DimensionError("slice out of range");
        BitString out = zeros(count);
        if ((offset & 7) == 0) {
            const std::size_t first = offset >> 3;
            for (std::size_t b = 0; b < out.payload_.size(); ++b)
                out.payload_[b] = payload_[first + b];
            out.mask_tail();
        } else {
            for (std::size_t i = 0; i < count; ++i)
                if (bit(offset + i)) out.set_bit(i, true);
        }
        return out;
    }

    void append(const BitString& tail) {
        if ((len_ & 7) == 0) {
            payload_.insert(payload_.end(), tail.payload_.begin(), tail.payload_.end());
            len_ += tail.len_;
            return;
        }
        const std::size_t base = len_;
        len_ += tail.len_;
        payload_.resize((len_ + 7) / 8, 0);
        for (std::size_t i = 0; i < tail.len_; ++i)
            if (tail.bit(i)) set_bit(base + i, true);
    }

    /// Zero-extend to the next multiple of block_bits. A length that is
    /// already a multiple (including zero) is returned unchanged.
    BitString padded_to_multiple(std::size_t block_bits) const {
        if (block_bits == 0) throw DimensionError("block size must be positive");
        const std::size_t rem = len_ % block_bits;
        if (rem == 0) return *this;
        BitString out = *this;
        out.len_ += block_bits - rem;
        out.payload_.resize((out.len_ + 7) / 8, 0);
        return out;
    }

    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out;
        out.reserve(payload_.size() * 2);
        for (std::uint8_t b : payload_) {
            out.push_back(digits[b >> 4]);
            out.push_back(digits[b & 0xf]);
        }
        return out;
    }

    std::string to_bit_string() const {
        std::string out;
        out.reserve(len_);
        for (std::size_t i = 0; i < len_; ++i) out.push_back(bit(i) ? '1' : '0');
        return out;
    }

    BitString& operator^=(const BitString& rhs) {
        if (len_ != rhs.len_)
            throw DimensionError("xor requires equal bit lengths");
        for (std::size_t i = 0; i < payload_.size(); ++i)
            payload_[i] ^= rhs.payload_[i];
        return *this; // tail stays zero: both operands had zero tails
    }

    friend BitString operator^(BitString lhs, const BitString& rhs) {
        lhs ^= rhs;
        return lhs;
    }

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    static std::uint8_t hex_nibble(char c) {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw FormatError("invalid hex digit");
    }

    void mask_tail() noexcept {
        if (len_ & 7) payload_.back() &= static_cast<std::uint8_t>((1u << (len_ & 7)) - 1);
    }

    std::size_t len_ = 0;
    std::vector<std::uint8_t> payload_;
};

inline BitString concat(const BitString& a, const BitString& b) {
    BitString out = a;
    out.append(b);
    return out;
}

} // namespace qkdauth

#endif // QKDAUTH_BITSTRING_HPP
