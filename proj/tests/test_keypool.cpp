#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include "qkdauth/keypool.hpp"
#include "support/testutil.hpp"

using qkdauth::BitString;
using qkdauth::KeyPool;

TEST_CASE("draws return consecutive disjoint ranges") {
    KeyPool pool(BitString::from_bits("10110010"));
    const BitString a = pool.draw(5, "first");
    const BitString b = pool.draw(3, "second");
    CHECK(a == BitString::from_bits("10110"));
    CHECK(b == BitString::from_bits("010"));
    CHECK(pool.cursor() == 8);
    REQUIRE(pool.ledger().size() == 2);
    CHECK(pool.ledger()[0].offset == 0);
    CHECK(pool.ledger()[0].length == 5);
    CHECK(pool.ledger()[1].offset == 5);
    CHECK(pool.ledger()[1].length == 3);
}

TEST_CASE("exhaustion fails atomically") {
    KeyPool pool(BitString::zeros(8));
    CHECK_THROWS_AS(pool.draw(9, "too much"), qkdauth::PoolExhaustedError);
    CHECK(pool.cursor() == 0);
    CHECK(pool.ledger().empty());
    pool.draw(8, "all");
    CHECK_THROWS_AS(pool.draw(1, "one more"), qkdauth::PoolExhaustedError);
}

TEST_CASE("zero-length draw is recorded but consumes nothing") {
    KeyPool pool(BitString::zeros(4));
    const BitString empty = pool.draw(0, "nothing");
    CHECK(empty.size() == 0);
    CHECK(pool.cursor() == 0);
    REQUIRE(pool.ledger().size() == 1);
    CHECK(pool.ledger()[0].length == 0);
}

TEST_CASE("deposit appends without touching drawn material") {
    KeyPool pool;
    pool.deposit(BitString::zeros(100));
    CHECK(pool.size_bits() == 100);
    CHECK(pool.cursor() == 0);
    const BitString head = pool.draw(10, "head");
    pool.deposit(BitString::from_bits("1111"));
    CHECK(pool.size_bits() == 104);
    CHECK(pool.contents().slice(0, 10) == head);
    CHECK(pool.contents().slice(100, 4) == BitString::from_bits("1111"));
}

TEST_CASE("growth report: consumed, deposited, net, ratio") {
    KeyPool pool(BitString::zeros(1000));
    const auto mark = pool.mark();
    pool.draw(383, "tag-key");
    pool.draw(128, "seed");
    pool.deposit(BitString::zeros(1000), "fresh");
    const auto report = pool.growth_since(mark);
    CHECK(report.consumed == 511);
    CHECK(report.deposited == 1000);
    CHECK(report.net == 489);
    REQUIRE(report.growth_ratio.has_value());
    CHECK(*report.growth_ratio == doctest::Approx(1000.0 / 511.0));
}

TEST_CASE("growth ratio undefined without consumption; bad marker throws") {
    KeyPool pool(BitString::zeros(10));
    CHECK_FALSE(pool.growth_since(pool.mark()).growth_ratio.has_value());
    qkdauth::PoolMark ahead{5, 0};
    CHECK_THROWS_AS(pool.growth_since(ahead), qkdauth::DimensionError);
}

// One-time property: over random operation sequences, no bit index is ever
// issued twice and the ledger exactly tiles [0, cursor).
TEST_CASE("no bit index is ever issued twice") {
    std::mt19937_64 rng(29);
    for (int run = 0; run < 30; ++run) {
        KeyPool pool(testutil::random_bits(rng, 64 + rng() % 200));
        std::set<std::uint64_t> seen;
        for (int op = 0; op < 40; ++op) {
            if (rng() % 3 == 0) {
                pool.deposit(testutil::random_bits(rng, rng() % 50));
                continue;
            }
            const std::uint64_t want = rng() % 40;
            const std::uint64_t offset = pool.cursor();
            try {
                pool.draw(want, "op");
            } catch (const qkdauth::PoolExhaustedError&) {
                CHECK(pool.cursor() == offset);
                continue;
            }
            for (std::uint64_t i = offset; i < offset + want; ++i)
                CHECK(seen.insert(i).second); // must not have been issued before
        }
        std::uint64_t covered = 0;
        for (const auto& entry : pool.ledger()) {
            CHECK(entry.offset == covered);
            covered += entry.length;
        }
        CHECK(covered == pool.cursor());
    }
}

TEST_CASE("replicas fed identical operations stay bit-identical") {
    std::mt19937_64 rng(31);
    KeyPool a(testutil::random_bits(rng, 256));
    KeyPool b(a.contents());
    for (int op = 0; op < 50; ++op) {
        if (rng() % 2) {
            const std::uint64_t want = rng() % 30;
            if (want > a.remaining()) continue;
            CHECK(a.draw(want, "x") == b.draw(want, "x"));
        } else {
            const BitString fresh = testutil::random_bits(rng, rng() % 40);
            a.deposit(fresh);
            b.deposit(fresh);
        }
        CHECK(a.cursor() == b.cursor());
        CHECK(a.contents() == b.contents());
    }
}

TEST_CASE("pool file round-trip preserves bits and cursor") {
    std::mt19937_64 rng(37);
    const std::string path = "test_pool_roundtrip.qkpl";
    KeyPool pool(testutil::random_bits(rng, 123));
    pool.draw(17, "spent");
    pool.save(path);
    const KeyPool loaded = KeyPool::load(path);
    CHECK(loaded.cursor() == 17);
    CHECK(loaded.contents() == pool.contents());

    // The ledger sidecar carries the consumption audit trail.
    std::ifstream ledger(path + ".ledger.jsonl");
    std::string line;
    REQUIRE(std::getline(ledger, line));
    CHECK(line == R"({"label":"spent","offset":0,"length":17})");

    std::remove(path.c_str());
    std::remove((path + ".ledger.jsonl").c_str());
}

TEST_CASE("loading rejects corrupt files") {
    const std::string path = "test_pool_bad.qkpl";
    {
        std::ofstream f(path, std::ios::binary);
        f << "not a pool";
    }
    CHECK_THROWS_AS(KeyPool::load(path), qkdauth::FormatError);
    CHECK_THROWS_AS(KeyPool::load("does_not_exist.qkpl"), qkdauth::FormatError);
    std::remove(path.c_str());
}
