#include "doctest.h"

#include <random>
#include <string>

#include "qkdauth/twostep.hpp"
#include "support/dense_oracle.hpp"
#include "support/testutil.hpp"

using namespace qkdauth;

// Golden digests computed with an independent SHA-256 implementation.
TEST_CASE("first-step SHA hash: pinned digests and truncation") {
    const BitString empty;
    const BitString full = f0_sha(empty, 256);
    CHECK(full.to_hex() == "af5570f5a1810b7af78caf4bc70a660f0df51e42baf91d4de5b2328de0e83dfc");
    // low-order 8 bits = first byte of the 256-bit output
    CHECK(f0_sha(empty, 8) == full.slice(0, 8));
    CHECK(f0_sha(empty, 8).to_hex() == "af");
    CHECK(f0_sha(empty, 100) == full.slice(0, 100));
}

TEST_CASE("length framing breaks zero-extension aliasing") {
    const BitString l = BitString::from_bits("1010");
    const BitString l_ext = BitString::from_bits("10100");
    REQUIRE(l.bytes() == l_ext.bytes()); // identical payload bytes, different lengths
    const BitString da = f0_sha(l, 256);
    const BitString db = f0_sha(l_ext, 256);
    CHECK(da.to_hex() == "e13448633408742f63fb2c12f75474cff263e1897ccb6e908c30876488f8847e");
    CHECK(db.to_hex() == "e802803d9121dedd544432108e985e1acb00722815513430e9134c80f7ad83e2");
    CHECK_FALSE(da == db);
}

TEST_CASE("expanded SHA first step covers r > 256") {
    std::mt19937_64 rng(61);
    const BitString l = testutil::random_bits(rng, 50);
    const BitString wide = f0_sha(l, 600);
    CHECK(wide.size() == 600);
    // counter-mode blocks are prefix-stable
    CHECK(detail::sha_expand_bits(l, 300) == wide.slice(0, 300));
    // the no-counter truncation path is a different framing by design
    CHECK_FALSE(f0_sha(l, 256) == wide.slice(0, 256));
}

TEST_CASE("linear fold") {
    std::mt19937_64 rng(67);
    SUBCASE("single block is the identity") {
        const BitString l = testutil::random_bits(rng, 7);
        CHECK(f0_linear_fold(l, 7) == l);
    }
    SUBCASE("two identical blocks cancel") {
        const BitString b = testutil::random_bits(rng, 5);
        CHECK(f0_linear_fold(concat(b, b), 5) == BitString::zeros(5));
    }
    SUBCASE("worked example: 10 ^ 11 = 01") {
        CHECK(f0_linear_fold(BitString::from_bits("1011"), 2) == BitString::from_bits("01"));
    }
    SUBCASE("short and empty messages are zero padded") {
        CHECK(f0_linear_fold(BitString(), 4) == BitString::zeros(4));
        CHECK(f0_linear_fold(BitString::from_bits("11"), 4) ==
              BitString::from_bits("1100"));
    }
}

TEST_CASE("randomizer is an involution and matches the pinned keystream") {
    std::mt19937_64 rng(71);
    const BitString seed = testutil::random_bits(rng, 128);
    const BitString l = testutil::random_bits(rng, 300);
    CHECK(randomize_message(randomize_message(l, seed), seed) == l);

    // all-zero message exposes the keystream itself
    const BitString fixed_seed = BitString::from_hex(std::string(30, '0') + "01", 128);
    const BitString stream = randomize_message(BitString::zeros(128), fixed_seed);
    CHECK(stream.to_hex() == "71faa70e1da00be5a10e651cdb1921c5");
}

TEST_CASE("two-step tag: worked example and zero map") {
    TwoStepParams params{3, 2, F0Kind::linear_fold, false, 0};
    SUBCASE("message of length r folds to itself; pool 101101 tags it 11") {
        KeyPool pool(BitString::from_bits("101101"));
        CHECK(twostep_tag(BitString::from_bits("110"), pool, params) ==
              BitString::from_bits("11"));
        CHECK(pool.cursor() == 6);
    }
    SUBCASE("all-zero key is the zero map") {
        KeyPool pool(BitString::zeros(6));
        std::mt19937_64 rng(73);
        CHECK(twostep_tag(testutil::random_bits(rng, 9), pool, params) == BitString::zeros(2));
    }
}

TEST_CASE("successive tags draw disjoint one-time keys") {
    TwoStepParams params{4, 2, F0Kind::linear_fold, false, 0};
    std::mt19937_64 rng(79);
    const BitString material = testutil::random_bits(rng, 2 * key_cost(params));
    KeyPool pool(material);
    const BitString l = testutil::random_bits(rng, 10);
    twostep_tag(l, pool, params);
    CHECK(pool.cursor() == key_cost(params));
    twostep_tag(l, pool, params);
    CHECK(pool.cursor() == 2 * key_cost(params));
    CHECK(pool.ledger()[0].offset + pool.ledger()[0].length == pool.ledger()[1].offset);
}

TEST_CASE("key cost is r + 2n - 1 plus the optional seed, independent of m") {
    TwoStepParams plain{256, 64, F0Kind::sha_truncate, false, 0};
    CHECK(key_cost(plain) == 383);
    TwoStepParams randomized{256, 64, F0Kind::sha_truncate, true, 128};
    CHECK(key_cost(randomized) == 511);

    // cost is a function of the parameters only; tags of very different
    // message lengths consume identical budgets
    std::mt19937_64 rng(83);
    for (std::size_t m : {std::size_t{8}, std::size_t{1000}, std::size_t{100000}}) {
        KeyPool pool(testutil::random_bits(rng, 600));
        twostep_tag(testutil::random_bits(rng, m), pool, plain);
        CHECK(pool.cursor() == 383);
    }
}

TEST_CASE("security bound") {
    const SecurityBound b = security_bound(256, 64);
    CHECK(b.p2 == std::ldexp(1.0, -64));
    CHECK(b.p1_bound == std::ldexp(1.0, -256));
    CHECK(b.p_total == std::ldexp(1.0, -64) + std::ldexp(1.0, -256));
    CHECK(security_bound(2, 2).p_total == 0.5);
    CHECK_THROWS_AS(security_bound(0, 2), DimensionError);
}

TEST_CASE("tag decomposes into randomize, f0, affine") {
    std::mt19937_64 rng(89);
    for (F0Kind kind : {F0Kind::linear_fold, F0Kind::sha_truncate}) {
        TwoStepParams params{16, 8, kind, true, 32};
        const BitString material = testutil::random_bits(rng, key_cost(params));
        const BitString l = testutil::random_bits(rng, 100);

        KeyPool pool(material);
        const BitString tag = twostep_tag(l, pool, params);

        KeyPool replica(material);
        const BitString seed = replica.draw(params.seed_bits, "seed");
        const ToeplitzAffineKey key = draw_affine_key(replica, params.r, params.n);
        CHECK(tag == eval_affine(key, apply_f0(randomize_message(l, seed), params)));
    }
}

TEST_CASE("matches the dense replay oracle on random instances") {
    std::mt19937_64 rng(97);
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t r = 1 + rng() % 12;
        const std::size_t n = 1 + rng() % 8;
        TwoStepParams params{r, n, F0Kind::linear_fold, false, 0};
        const std::size_t m = 1 + rng() % 60;
        const BitString l = testutil::random_bits(rng, m);
        const BitString material = testutil::random_bits(rng, key_cost(params));
        KeyPool pool(material);
        const BitString tag = twostep_tag(l, pool, params);
        denseoracle::BitTape tape(denseoracle::to_vec(material));
        CHECK(denseoracle::to_vec(tag) ==
              denseoracle::twostep_tag_replay(denseoracle::to_vec(l), tape, r, n));
    }
}

TEST_CASE("verification round-trip, rejects, desync and exhaustion") {
    TwoStepParams params{16, 8, F0Kind::linear_fold, false, 0};
    std::mt19937_64 rng(101);
    const BitString material = testutil::random_bits(rng, 4 * key_cost(params));
    const BitString l = testutil::random_bits(rng, 48);
    KeyPool tagger(material);
    KeyPool verifier(material);
    const std::uint64_t cursor_before = tagger.cursor();
    const BitString tag = twostep_tag(l, tagger, params);

    SUBCASE("round-trip accepts") {
        CHECK(twostep_verify(l, tag, verifier, params, cursor_before));
        CHECK(verifier.cursor() == tagger.cursor());
    }
    SUBCASE("flipped message bit rejects under this key") {
        BitString altered = l;
        altered.set_bit(5, !altered.bit(5));
        CHECK_FALSE(twostep_verify(altered, tag, verifier, params, cursor_before));
    }
    SUBCASE("flipped tag bit always rejects") {
        BitString bad = tag;
        bad.set_bit(3, !bad.bit(3));
        CHECK_FALSE(twostep_verify(l, bad, verifier, params, cursor_before));
    }
    SUBCASE("cursor mismatch aborts before consuming") {
        verifier.draw(2, "skew");
        const std::uint64_t at = verifier.cursor();
        CHECK_THROWS_AS(twostep_verify(l, tag, verifier, params, cursor_before),
                        PoolDesyncError);
        CHECK(verifier.cursor() == at);
    }
    SUBCASE("exhausted pool aborts without emitting a tag") {
        KeyPool tiny(BitString::zeros(key_cost(params) - 1));
        CHECK_THROWS_AS(twostep_tag(l, tiny, params), PoolExhaustedError);
        CHECK(tiny.cursor() == 0);
    }
}

TEST_CASE("single-bit flips within one fold block always change z") {
    // The fold is injective on single-bit differences, so a one-bit forgery
    // must break the second step; exhaustively, flipping any bit of l changes
    // the folded image.
    const std::size_t r = 4;
    std::mt19937_64 rng(103);
    for (int iter = 0; iter < 50; ++iter) {
        const std::size_t m = 1 + rng() % 16;
        const BitString l = testutil::random_bits(rng, m);
        const BitString z = f0_linear_fold(l, r);
        for (std::size_t i = 0; i < m; ++i) {
            BitString alt = l;
            alt.set_bit(i, !alt.bit(i));
            CHECK_FALSE(f0_linear_fold(alt, r) == z);
        }
    }
}

TEST_CASE("parameter validation") {
    TwoStepParams bad{300, 64, F0Kind::sha_truncate, false, 0};
    CHECK_THROWS_AS(bad.validate(), DimensionError);
    TwoStepParams ok_expand{300, 64, F0Kind::sha_expand, false, 0};
    CHECK_NOTHROW(ok_expand.validate());
    TwoStepParams no_seed{16, 8, F0Kind::linear_fold, true, 0};
    CHECK_THROWS_AS(no_seed.validate(), DimensionError);
    // degenerate r >= m is permitted but flagged
    TwoStepParams wide{64, 8, F0Kind::linear_fold, false, 0};
    CHECK(wide.degenerate_for(32));
    CHECK_FALSE(wide.degenerate_for(100));
}
