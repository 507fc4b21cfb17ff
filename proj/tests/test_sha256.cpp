#include "doctest.h"

#include <string>

#include "qkdauth/bitstring.hpp"
#include "qkdauth/sha256.hpp"

using qkdauth::BitString;
using qkdauth::Sha256;

namespace {

std::string hex_of(const std::array<std::uint8_t, 32>& d) {
    return BitString::from_bytes(d, 256).to_hex();
}

} // namespace

// FIPS 180-4 test vectors.
TEST_CASE("sha256 standard vectors") {
    Sha256 h;
    CHECK(hex_of(h.finish()) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

    Sha256 h2;
    h2.update("abc", 3);
    CHECK(hex_of(h2.finish()) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    Sha256 h3;
    const std::string msg = "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq";
    h3.update(msg.data(), msg.size());
    CHECK(hex_of(h3.finish()) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 incremental update matches one-shot") {
    const std::string msg(1000, 'x');
    Sha256 one;
    one.update(msg.data(), msg.size());
    Sha256 many;
    for (char c : msg) many.update(&c, 1);
    CHECK(hex_of(one.finish()) == hex_of(many.finish()));
}

TEST_CASE("counter stream is a prefix-stable expansion") {
    const std::vector<std::uint8_t> seed{0x01, 0x02, 0x03};
    const auto a = qkdauth::sha256_counter_stream(seed, 100);
    const auto b = qkdauth::sha256_counter_stream(seed, 40);
    REQUIRE(a.size() == 100);
    REQUIRE(b.size() == 40);
    CHECK(std::equal(b.begin(), b.end(), a.begin()));
}
