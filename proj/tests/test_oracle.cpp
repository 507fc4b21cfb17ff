#include "doctest.h"

#include <random>

#include "qkdauth/hashfam.hpp"
#include "qkdauth/oracle.hpp"
#include "qkdauth/twostep.hpp"
#include "support/testutil.hpp"

using namespace qkdauth;

TEST_CASE("strong universality deviation is exactly zero at small sizes") {
    const auto a = oracle::check_su2(2, 1);
    CHECK(a.keys == 8);
    CHECK(a.pairs == 12);
    CHECK(a.max_deviation == 0.0);
    CHECK(a.pass);

    const auto b = oracle::check_su2(3, 2);
    CHECK(b.keys == 64);
    CHECK(b.max_deviation == 0.0);

    const auto c = oracle::check_su2(4, 2); // the s = 2 kernel family
    CHECK(c.max_deviation == 0.0);

    const auto d = oracle::check_su2(2, 6); // histogram path, wide tags
    CHECK(d.max_deviation == 0.0);
}

TEST_CASE("su2 result does not depend on the worker partition") {
    const auto one = oracle::check_su2(5, 2, 1);
    const auto four = oracle::check_su2(5, 2, 4);
    CHECK(one.max_deviation == four.max_deviation);
    CHECK(one.keys == four.keys);
    CHECK(one.pairs == four.pairs);
}

TEST_CASE("su2 enumeration budget is enforced") {
    CHECK_THROWS_AS(oracle::check_su2(13, 1), BudgetError);
    CHECK_THROWS_AS(oracle::check_su2(1, 7), BudgetError);
    CHECK_THROWS_AS(oracle::check_su2(0, 1), DimensionError);
}

TEST_CASE("oracle tag table agrees with the library evaluation path") {
    // The oracle rebuilds dense matrices straight from key indices; the
    // library evaluates through BitString / Toeplitz machinery. Same family,
    // two routes.
    for (auto [r, n] : {std::pair<std::size_t, std::size_t>{2, 1},
                        std::pair<std::size_t, std::size_t>{3, 2},
                        std::pair<std::size_t, std::size_t>{5, 3}}) {
        const auto tags = oracle::detail::build_tag_table(r, n);
        const std::size_t key_bits = affine_key_length(r, n);
        const std::uint64_t nkeys = std::uint64_t{1} << key_bits;
        for (std::uint64_t k = 0; k < nkeys; ++k) {
            const auto key =
                ToeplitzAffineKey::deserialize(testutil::bits_from_uint(k, key_bits), r, n);
            for (std::uint64_t z = 0; z < (std::uint64_t{1} << r); ++z) {
                const auto tag = eval_affine(key, testutil::bits_from_uint(z, r));
                REQUIRE(tags[z * nkeys + k] == testutil::uint_from_bits(tag));
            }
        }
    }
}

TEST_CASE("oracle fold agrees with the library fold") {
    std::mt19937_64 rng(107);
    for (int iter = 0; iter < 500; ++iter) {
        const std::size_t r = 1 + rng() % 8;
        const std::size_t m = r * (1 + rng() % (16 / r));
        const std::uint32_t l = static_cast<std::uint32_t>(rng() & ((1u << m) - 1u));
        const auto via_lib =
            testutil::uint_from_bits(f0_linear_fold(testutil::bits_from_uint(l, m), r));
        CHECK(oracle::detail::fold_bits(l, m, r) == via_lib);
    }
}

TEST_CASE("first-step collision probability is exact") {
    const auto a = oracle::check_p1(4, 2);
    CHECK(a.uniform);
    CHECK(a.expected_preimages == 4);
    CHECK(a.p1 == 3.0 / 16.0);
    CHECK(a.pass);

    const auto b = oracle::check_p1(6, 2);
    CHECK(b.p1 == 15.0 / 64.0);
    CHECK(b.pass);

    const auto c = oracle::check_p1(4, 4); // injective case
    CHECK(c.p1 == 0.0);
    CHECK(c.pass);
}

TEST_CASE("p1 budget and shape preconditions") {
    CHECK_THROWS_AS(oracle::check_p1(17, 1), BudgetError);
    CHECK_THROWS_AS(oracle::check_p1(16, 9), BudgetError);
    CHECK_THROWS_AS(oracle::check_p1(6, 4), DimensionError); // m not a multiple of r
}

TEST_CASE("exhaustive forgery game stays under the two-term bound") {
    const auto a = oracle::forgery_exhaustive(4, 2, 1);
    CHECK(a.bound == 0.75);
    CHECK(a.success <= a.bound);
    CHECK(a.pass);

    const auto b = oracle::forgery_exhaustive(8, 4, 2);
    CHECK(b.bound == 0.25 + 0.0625);
    CHECK(b.pass);
}

TEST_CASE("injective first step reduces the game to the universal family") {
    for (std::size_t w : {std::size_t{1}, std::size_t{2}}) {
        const auto res = oracle::forgery_exhaustive(w, w, w); // m = r = n
        CHECK(res.equals_p2);
        CHECK(res.success == 1.0 / static_cast<double>(std::uint64_t{1} << w));
    }
}

TEST_CASE("forgery budget is enforced") {
    CHECK_THROWS_AS(oracle::forgery_exhaustive(9, 4, 2), BudgetError);
    CHECK_THROWS_AS(oracle::forgery_exhaustive(8, 5, 2), BudgetError);
    CHECK_THROWS_AS(oracle::forgery_exhaustive(8, 4, 3), BudgetError);
}
