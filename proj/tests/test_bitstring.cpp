#include "doctest.h"

#include <random>

#include "qkdauth/bitstring.hpp"
#include "support/testutil.hpp"

using qkdauth::BitString;

TEST_CASE("bit layout: bit i is bit (i % 8) of byte i / 8, LSB first") {
    const BitString s = BitString::from_bits("101101");
    REQUIRE(s.size() == 6);
    CHECK(s.bytes().size() == 1);
    CHECK(s.bytes()[0] == 0x2d); // 1 + 4 + 8 + 32
    CHECK(s.to_hex() == "2d");
    CHECK(s.to_bit_string() == "101101");
}

TEST_CASE("xor truth table and identities") {
    const BitString a = BitString::from_bits("1010");
    const BitString zero = BitString::from_bits("0000");
    CHECK((a ^ zero) == a);
    CHECK((a ^ a) == zero);
    CHECK((BitString::from_bits("1100") ^ a) == BitString::from_bits("0110"));
    CHECK_THROWS_AS(a ^ BitString::from_bits("101"), qkdauth::DimensionError);
}

TEST_CASE("xor is length preserving and self-inverse on random inputs") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t len = rng() % 130;
        const BitString x = testutil::random_bits(rng, len);
        const BitString y = testutil::random_bits(rng, len);
        const BitString z = x ^ y;
        CHECK(z.size() == len);
        CHECK((z ^ y) == x);
        CHECK((x ^ x) == BitString::zeros(len));
    }
}

TEST_CASE("serialization round-trip for all lengths 0..64") {
    std::mt19937_64 rng(11);
    for (std::size_t len = 0; len <= 64; ++len) {
        const BitString s = testutil::random_bits(rng, len);
        CHECK(BitString::from_bytes(s.bytes(), len) == s);
        CHECK(BitString::from_hex(s.to_hex(), len) == s);
        CHECK(BitString::from_bits(s.to_bit_string()) == s);
    }
}

TEST_CASE("unused tail bits stay zero through mutation") {
    BitString s = BitString::from_hex("ff", 5); // tail of the byte must be masked
    CHECK(s.bytes()[0] == 0x1f);
    s.set_bit(4, false);
    CHECK(s.bytes()[0] == 0x0f);
    const BitString t = s.padded_to_multiple(16);
    CHECK(t.size() == 16);
    CHECK(t.slice(0, 5) == s);
    CHECK(t.slice(5, 11) == BitString::zeros(11));
}

TEST_CASE("slice and append at unaligned offsets") {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 100; ++iter) {
        const BitString s = testutil::random_bits(rng, 40 + rng() % 40);
        const std::size_t off = rng() % (s.size() / 2);
        const std::size_t cnt = rng() % (s.size() - off);
        const BitString part = s.slice(off, cnt);
        for (std::size_t i = 0; i < cnt; ++i) CHECK(part.bit(i) == s.bit(off + i));
        BitString joined = s.slice(0, off);
        joined.append(part);
        joined.append(s.slice(off + cnt, s.size() - off - cnt));
        CHECK(joined == s);
    }
}

TEST_CASE("slice out of range throws") {
    const BitString s = BitString::zeros(8);
    CHECK_THROWS_AS(s.slice(4, 5), qkdauth::DimensionError);
}

TEST_CASE("hex parsing validates digits and length") {
    CHECK_THROWS_AS(BitString::from_hex("zz", 8), qkdauth::FormatError);
    CHECK_THROWS_AS(BitString::from_hex("ab", 17), qkdauth::FormatError);
    CHECK(BitString::from_hex("AB", 8) == BitString::from_hex("ab", 8));
}
