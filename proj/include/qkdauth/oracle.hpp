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

#ifndef QKDAUTH_ORACLE_HPP
#define QKDAUTH_ORACLE_HPP

// Brute-force verifiers for the probabilistic claims behind the tagging
// schemes, at exhaustively enumerable sizes. Everything in this namespace is
// deliberately self-contained: messages and intermediate values are plain
// integers (bit i of the value is bit i of the string), dense matrices are
// rebuilt from raw key indices, and no evaluation code is shared with the
// library's tagging paths. Agreement between these enumerations and the main
// implementation is itself a test.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

#include "qkdauth/errors.hpp"

namespace qkdauth::oracle {

namespace detail {

// Tag of every (key, input) combination for the affine family on r-bit
// inputs and n-bit tags. Key index bits [0, r+n-1) are the matrix diagonals,
// bits [r+n-1, r+2n-1) the offset. Layout: tags[z * nkeys + k].
inline std::vector<std::uint8_t> build_tag_table(std::size_t r, std::size_t n) {
    const std::uint32_t nz = 1u << r;
    const std::uint32_t nkeys = 1u << (r + 2 * n - 1);
    std::vector<std::uint32_t> rows(static_cast<std::size_t>(nkeys) * n);
    std::vector<std::uint8_t> betas(nkeys);
    for (std::uint32_t k = 0; k < nkeys; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t row = 0;
            for (std::size_t j = 0; j < r; ++j)
                row |= ((k >> (i - j + r - 1)) & 1u) << j;
            rows[static_cast<std::size_t>(k) * n + i] = row;
        }
        betas[k] = static_cast<std::uint8_t>((k >> (r + n - 1)) & ((1u << n) - 1u));
    }
    std::vector<std::uint8_t> tags(static_cast<std::size_t>(nz) * nkeys);
    for (std::uint32_t z = 0; z < nz; ++z) {
        std::uint8_t* out = tags.data() + static_cast<std::size_t>(z) * nkeys;
        for (std::uint32_t k = 0; k < nkeys; ++k) {
            std::uint32_t t = 0;
            const std::uint32_t* row = rows.data() + static_cast<std::size_t>(k) * n;
            for (std::size_t i = 0; i < n; ++i)
                t |= static_cast<std::uint32_t>(std::popcount(row[i] & z) & 1) << i;
            out[k] = static_cast<std::uint8_t>(t ^ betas[k]);
        }
    }
    return tags;
}

// XOR-fold of the low m bits of l into r-bit chunks (zero-padded).
inline std::uint32_t fold_bits(std::uint32_t l, std::size_t m, std::size_t r) {
    std::uint32_t acc = 0;
    for (std::size_t off = 0; off < m; off += r)
        acc ^= (l >> off) & ((1u << r) - 1u);
    return acc & ((1u << r) - 1u);
}

inline unsigned worker_count(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 2;
}

} // namespace detail

struct Su2Check {
    std::size_t r = 0;
    std::size_t n = 0;
    std::uint64_t keys = 0;
    std::uint64_t pairs = 0;
    double max_deviation = 0.0; // must be exactly 0 for a strongly universal_2 family
    bool pass = false;
};

/// Enumerate every key, every ordered pair of distinct inputs and every tag
/// pair; the fraction of keys mapping (z, z') to any fixed tag pair must be
/// exactly 2^-2n. Budget: r + 2n <= 14.
inline Su2Check check_su2(std::size_t r, std::size_t n, unsigned threads = 0) {
    if (r < 1 || n < 1) throw DimensionError("check_su2: dimensions must be at least 1");
    if (r + 2 * n > 14) throw BudgetError("check_su2: enumeration budget is r + 2n <= 14");
    const std::uint32_t nz = 1u << r;
    const std::uint32_t nkeys = 1u << (r + 2 * n - 1);
    const std::vector<std::uint8_t> tags = detail::build_tag_table(r, n);
    const std::uint64_t expected = nkeys >> (2 * n);

    std::uint64_t max_dev_count = 0;

    if (n <= 2) {
        // Bit-sliced key planes: plane b of input z holds bit b of tag(k, z)
        // across all keys k, one key per bit position.
        const std::size_t words = (nkeys + 63) / 64;
        const std::uint64_t tail_mask =
            (nkeys % 64) ? ((std::uint64_t{1} << (nkeys % 64)) - 1) : ~std::uint64_t{0};
        std::vector<std::vector<std::uint64_t>> plane(
            n, std::vector<std::uint64_t>(static_cast<std::size_t>(nz) * words, 0));
        for (std::uint32_t z = 0; z < nz; ++z) {
            const std::uint8_t* row = tags.data() + static_cast<std::size_t>(z) * nkeys;
            for (std::uint32_t k = 0; k < nkeys; ++k) {
                for (std::size_t b = 0; b < n; ++b)
                    if ((row[k] >> b) & 1u)
                        plane[b][static_cast<std::size_t>(z) * words + k / 64] |=
                            std::uint64_t{1} << (k % 64);
            }
        }

        const unsigned workers = detail::worker_count(threads);
        auto count_range = [&](std::uint32_t begin, std::uint32_t step) -> std::uint64_t {
            std::uint64_t local_max = 0;
            for (std::uint32_t z = begin; z < nz; z += step) {
                for (std::uint32_t zp = 0; zp < nz; ++zp) {
                    if (zp == z) continue;
                    if (n == 1) {
                        const std::uint64_t* A = plane[0].data() + static_cast<std::size_t>(z) * words;
                        const std::uint64_t* B = plane[0].data() + static_cast<std::size_t>(zp) * words;
                        std::uint64_t c11 = 0, c10 = 0, c01 = 0;
                        for (std::size_t w = 0; w < words; ++w) {
                            const std::uint64_t a = A[w], b = B[w];
                            c11 += static_cast<unsigned>(std::popcount(a & b));
                            c10 += static_cast<unsigned>(std::popcount(a & ~b));
                            c01 += static_cast<unsigned>(std::popcount(~a & b));
                        }
                        const std::uint64_t c00 = nkeys - c11 - c10 - c01;
                        for (std::uint64_t c : {c00, c01, c10, c11}) {
                            const std::uint64_t d = c > expected ? c - expected : expected - c;
                            local_max = std::max(local_max, d);
                        }
                    } else {
                        const std::uint64_t* A0 = plane[0].data() + static_cast<std::size_t>(z) * words;
                        const std::uint64_t* A1 = plane[1].data() + static_cast<std::size_t>(z) * words;
                        const std::uint64_t* B0 = plane[0].data() + static_cast<std::size_t>(zp) * words;
                        const std::uint64_t* B1 = plane[1].data() + static_cast<std::size_t>(zp) * words;
                        std::uint64_t counts[16] = {0};
                        for (std::size_t w = 0; w < words; ++w) {
                            const std::uint64_t mask = (w + 1 == words) ? tail_mask : ~std::uint64_t{0};
                            const std::uint64_t a0 = A0[w], a1 = A1[w], b0 = B0[w], b1 = B1[w];
                            const std::uint64_t sel[8] = {(~a0) & mask, a0, (~a1) & mask, a1,
                                                          (~b0) & mask, b0, (~b1) & mask, b1};
                            for (unsigned t1 = 0; t1 < 4; ++t1) {
                                const std::uint64_t x1 = sel[0 + (t1 & 1)] & sel[2 + ((t1 >> 1) & 1)];
                                for (unsigned t2 = 0; t2 < 4; ++t2) {
                                    const std::uint64_t x =
                                        x1 & sel[4 + (t2 & 1)] & sel[6 + ((t2 >> 1) & 1)];
                                    counts[t1 * 4 + t2] += static_cast<unsigned>(std::popcount(x));
                                }
                            }
                        }
                        for (std::uint64_t c : counts) {
                            const std::uint64_t d = c > expected ? c - expected : expected - c;
                            local_max = std::max(local_max, d);
                        }
                    }
                }
            }
            return local_max;
        };

        std::vector<std::future<std::uint64_t>> futs;
        for (unsigned t = 1; t < workers; ++t)
            futs.push_back(std::async(std::launch::async, count_range, t, workers));
        max_dev_count = count_range(0, workers);
        for (auto& f : futs) max_dev_count = std::max(max_dev_count, f.get());
    } else {
        // Joint tag-pair histogram per input pair, scanning every key.
        const unsigned workers = detail::worker_count(threads);
        const std::size_t hist_size = std::size_t{1} << (2 * n);
        auto count_range = [&](std::uint32_t begin, std::uint32_t step) -> std::uint64_t {
            std::uint64_t local_max = 0;
            std::vector<std::uint32_t> hist(hist_size);
            for (std::uint32_t z = begin; z < nz; z += step) {
                const std::uint8_t* ta = tags.data() + static_cast<std::size_t>(z) * nkeys;
                for (std::uint32_t zp = 0; zp < nz; ++zp) {
                    if (zp == z) continue;
                    const std::uint8_t* tb = tags.data() + static_cast<std::size_t>(zp) * nkeys;
                    std::fill(hist.begin(), hist.end(), 0);
                    for (std::uint32_t k = 0; k < nkeys; ++k)
                        ++hist[(static_cast<std::size_t>(ta[k]) << n) | tb[k]];
                    for (std::uint32_t c : hist) {
                        const std::uint64_t d = c > expected ? c - expected : expected - c;
                        local_max = std::max(local_max, d);
                    }
                }
            }
            return local_max;
        };
        std::vector<std::future<std::uint64_t>> futs;
        for (unsigned t = 1; t < workers; ++t)
            futs.push_back(std::async(std::launch::async, count_range, t, workers));
        max_dev_count = count_range(0, workers);
        for (auto& f : futs) max_dev_count = std::max(max_dev_count, f.get());
    }

    Su2Check out;
    out.r = r;
    out.n = n;
    out.keys = nkeys;
    out.pairs = static_cast<std::uint64_t>(nz) * (nz - 1);
    out.max_deviation = static_cast<double>(max_dev_count) / static_cast<double>(nkeys);
    out.pass = (max_dev_count == 0);
    return out;
}

struct P1Check {
    std::size_t m = 0;
    std::size_t r = 0;
    std::uint64_t expected_preimages = 0;
    bool uniform = false;      // every z hit by exactly 2^(m-r) messages
    double p1 = 0.0;           // (2^(m-r) - 1) / 2^m
    double bound = 0.0;        // 2^-r
    bool pass = false;
};

/// Enumerate all 2^m messages under the XOR fold and verify the uniform
/// preimage structure that makes the first-step collision probability
/// exactly (2^(m-r) - 1) / 2^m, strictly below 2^-r.
/// Budget: m <= 16, r <= 8, m a multiple of r.
inline P1Check check_p1(std::size_t m, std::size_t r) {
    if (r < 1) throw DimensionError("check_p1: r must be at least 1");
    if (m > 16 || r > 8) throw BudgetError("check_p1: enumeration budget is m <= 16, r <= 8");
    if (m % r != 0) throw DimensionError("check_p1: m must be a multiple of r");
    const std::uint32_t nmsg = 1u << m;
    const std::uint32_t nz = 1u << r;
    std::vector<std::uint32_t> preimages(nz, 0);
    for (std::uint32_t l = 0; l < nmsg; ++l) ++preimages[detail::fold_bits(l, m, r)];
    const std::uint64_t expected = std::uint64_t{1} << (m - r);
    bool uniform = true;
    for (std::uint32_t c : preimages)
        if (c != expected) uniform = false;
    P1Check out;
    out.m = m;
    out.r = r;
    out.expected_preimages = expected;
    out.uniform = uniform;
    out.p1 = static_cast<double>(expected - 1) / static_cast<double>(nmsg);
    out.bound = 1.0 / static_cast<double>(nz);
    out.pass = uniform && out.p1 < out.bound;
    return out;
}

struct ForgeryCheck {
    std::size_t m = 0;
    std::size_t r = 0;
    std::size_t n = 0;
    std::uint64_t numerator = 0;   // summed best-forgery key counts
    std::uint64_t denominator = 0; // ordered message pairs times keys
    double success = 0.0;          // numerator / denominator
    double bound = 0.0;            // 2^-n + 2^-r
    bool pass = false;             // success <= bound, compared in exact integers
    bool equals_p2 = false;        // success == 2^-n (injective first step)
};

/// Exhaustive forgery game for the two-step scheme with the XOR fold: the
/// adversary observes a uniformly random message with its tag, must forge a
/// tag for an independently drawn different message, and plays the best
/// possible tag given the key posterior. Success probability, averaged over
/// message pairs and keys, must not exceed 2^-n + 2^-r.
/// Budget: m <= 8, r <= 4, n <= 2.
inline ForgeryCheck forgery_exhaustive(std::size_t m, std::size_t r, std::size_t n) {
    if (m < 1 || r < 1 || n < 1)
        throw DimensionError("forgery_exhaustive: dimensions must be at least 1");
    if (m > 8 || r > 4 || n > 2)
        throw BudgetError("forgery_exhaustive: enumeration budget is m <= 8, r <= 4, n <= 2");
    const std::uint32_t nmsg = 1u << m;
    const std::uint32_t nkeys = 1u << (r + 2 * n - 1);
    const std::uint32_t ntags = 1u << n;
    const std::vector<std::uint8_t> tags = detail::build_tag_table(r, n);
    std::vector<std::uint32_t> fold(nmsg);
    for (std::uint32_t l = 0; l < nmsg; ++l) fold[l] = detail::fold_bits(l, m, r);

    std::uint64_t numerator = 0;
    std::vector<std::uint32_t> hist(static_cast<std::size_t>(ntags) * ntags);
    for (std::uint32_t l = 0; l < nmsg; ++l) {
        const std::uint8_t* ta = tags.data() + static_cast<std::size_t>(fold[l]) * nkeys;
        for (std::uint32_t lp = 0; lp < nmsg; ++lp) {
            if (lp == l) continue;
            const std::uint8_t* tb = tags.data() + static_cast<std::size_t>(fold[lp]) * nkeys;
            std::fill(hist.begin(), hist.end(), 0);
            for (std::uint32_t k = 0; k < nkeys; ++k)
                ++hist[(static_cast<std::size_t>(ta[k]) << n) | tb[k]];
            // For each observable tag, the adversary's best forged tag is the
            // most likely one under the key posterior.
            for (std::uint32_t t = 0; t < ntags; ++t) {
                std::uint32_t best = 0;
                for (std::uint32_t tp = 0; tp < ntags; ++tp)
                    best = std::max(best, hist[(static_cast<std::size_t>(t) << n) | tp]);
                numerator += best;
            }
        }
    }

    ForgeryCheck out;
    out.m = m;
    out.r = r;
    out.n = n;
    out.numerator = numerator;
    out.denominator = static_cast<std::uint64_t>(nmsg) * (nmsg - 1) * nkeys;
    out.success = static_cast<double>(numerator) / static_cast<double>(out.denominator);
    out.bound = 1.0 / static_cast<double>(ntags) + 1.0 / static_cast<double>(1u << r);
    // success <= 2^-n + 2^-r  <=>  num * 2^(n+r) <= den * (2^r + 2^n)
    out.pass = (numerator << (n + r)) <= out.denominator * ((1u << r) + (1u << n));
    out.equals_p2 = (numerator << n) == out.denominator;
    return out;
}

} // namespace qkdauth::oracle

#endif // QKDAUTH_ORACLE_HPP
