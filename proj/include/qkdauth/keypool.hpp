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

#ifndef QKDAUTH_KEYPOOL_HPP
#define QKDAUTH_KEYPOOL_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "qkdauth/bitstring.hpp"
#include "qkdauth/errors.hpp"

namespace qkdauth {

struct LedgerEntry {
    std::string label;
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
};

/// Snapshot of the pool counters, for growth accounting across a session.
struct PoolMark {
    std::uint64_t consumed = 0;
    std::uint64_t deposited = 0;
};

struct GrowthReport {
    std::uint64_t consumed = 0;
    std::uint64_t deposited = 0;
    std::int64_t net = 0; // deposited - consumed
    std::optional<double> growth_ratio; // deposited / consumed, only when consumed > 0
};

/// Append-only ledger of shared one-time secret bits with a consume cursor.
/// Bits below the cursor are spent and are never handed out again by any
/// operation; a draw that cannot be satisfied in full fails without moving
/// the cursor. Fresh key from completed sessions is appended with deposit().
class KeyPool {
public:
    KeyPool() = default;

    explicit KeyPool(BitString initial) : bits_(std::move(initial)) {}

    std::uint64_t cursor() const noexcept { return cursor_; }
    std::uint64_t size_bits() const noexcept { return bits_.size(); }
    std::uint64_t remaining() const noexcept { return bits_.size() - cursor_; }
    std::uint64_t total_deposited() const noexcept { return deposited_; }
    const BitString& contents() const noexcept { return bits_; }
    const std::vector<LedgerEntry>& ledger() const noexcept { return ledger_; }

    /// Take the next `count` unconsumed bits, in order. Throws
    /// PoolExhaustedError (cursor unchanged) when fewer than `count` remain.
    BitString draw(std::uint64_t count, std::string label) {
        if (cursor_ + count > bits_.size())
            throw PoolExhaustedError("key pool exhausted: need " + std::to_string(count) +
                                     " bits, " + std::to_string(remaining()) + " left");
        BitString out = bits_.slice(cursor_, count);
        ledger_.push_back(LedgerEntry{std::move(label), cursor_, count});
        cursor_ += count;
        return out;
    }

    /// Append freshly generated shared key. The cursor does not move.
    void deposit(const BitString& fresh, std::string label = "deposit") {
        bits_.append(fresh);
        deposited_ += fresh.size();
        (void)label; // deposits are tracked in aggregate; the ledger records consumption
    }

    PoolMark mark() const noexcept { return PoolMark{cursor_, deposited_}; }

    GrowthReport growth_since(const PoolMark& m) const {
        if (m.consumed > cursor_ || m.deposited > deposited_)
            throw DimensionError("growth_since: marker is ahead of the pool state");
        GrowthReport r;
        r.consumed = cursor_ - m.consumed;
        r.deposited = deposited_ - m.deposited;
        r.net = static_cast<std::int64_t>(r.deposited) - static_cast<std::int64_t>(r.consumed);
        if (r.consumed > 0)
            r.growth_ratio = static_cast<double>(r.deposited) / static_cast<double>(r.consumed);
        return r;
    }

    // --- persistence -------------------------------------------------------
    //
    // Binary pool file: magic "QKPL", version u32 LE, cursor u64 LE, bit
    // length u64 LE, then the packed payload bytes. The consumption ledger is
    // appended to "<path>.ledger.jsonl", one JSON object per line; it is an
    // audit artifact and is not read back by load().

    void save(const std::string& path) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw FormatError("cannot open pool file for writing: " + path);
        f.write("QKPL", 4);
        write_u32(f, kFormatVersion);
        write_u64(f, cursor_);
        write_u64(f, bits_.size());
        const auto& payload = bits_.bytes();
        f.write(reinterpret_cast<const char*>(payload.data()),
                static_cast<std::streamsize>(payload.size()));
        if (!f) throw FormatError("short write to pool file: " + path);
        append_ledger(path + ".ledger.jsonl");
    }

    static KeyPool load(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw FormatError("cannot open pool file: " + path);
        char magic[4];
        f.read(magic, 4);
        if (!f || std::string_view(magic, 4) != "QKPL")
            throw FormatError("not a key pool file: " + path);
        const std::uint32_t version = read_u32(f);
        if (version != kFormatVersion)
            throw FormatError("unsupported pool file version");
        const std::uint64_t cursor = read_u64(f);
        const std::uint64_t bit_len = read_u64(f);
        std::vector<std::uint8_t> payload((bit_len + 7) / 8);
        f.read(reinterpret_cast<char*>(payload.data()),
               static_cast<std::streamsize>(payload.size()));
        if (!f) throw FormatError("truncated pool file: " + path);
        if (cursor > bit_len) throw FormatError("pool cursor past end of material");
        KeyPool pool(BitString::from_bytes(payload, bit_len));
        pool.cursor_ = cursor;
        return pool;
    }

private:
    static constexpr std::uint32_t kFormatVersion = 1;

    static void write_u32(std::ofstream& f, std::uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
        f.write(b, 4);
    }
    static void write_u64(std::ofstream& f, std::uint64_t v) {
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
        f.write(b, 8);
    }
    static std::uint32_t read_u32(std::ifstream& f) {
        unsigned char b[4];
        f.read(reinterpret_cast<char*>(b), 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        return v;
    }
    static std::uint64_t read_u64(std::ifstream& f) {
        unsigned char b[8];
        f.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return v;
    }

    static void json_escape_into(std::string& out, const std::string& s) {
        for (char c : s) {
            switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    static const char* hexd = "0123456789abcdef";
                    out += "\\u00";
                    out.push_back(hexd[(c >> 4) & 0xf]);
                    out.push_back(hexd[c & 0xf]);
                } else {
                    out.push_back(c);
                }
            }
        }
    }

    void append_ledger(const std::string& path) {
        if (persisted_ledger_ == ledger_.size()) return;
        std::ofstream f(path, std::ios::app);
        if (!f) throw FormatError("cannot open ledger file for writing: " + path);
        for (std::size_t i = persisted_ledger_; i < ledger_.size(); ++i) {
            std::string line = "{\"label\":\"";
            json_escape_into(line, ledger_[i].label);
            line += "\",\"offset\":" + std::to_string(ledger_[i].offset) +
                    ",\"length\":" + std::to_string(ledger_[i].length) + "}\n";
            f << line;
        }
        persisted_ledger_ = ledger_.size();
    }

    BitString bits_;
    std::uint64_t cursor_ = 0;
    std::uint64_t deposited_ = 0;
    std::vector<LedgerEntry> ledger_;
    std::size_t persisted_ledger_ = 0;
};

/// Throws PoolDesyncError unless the replica cursor matches the cursor the
/// peer reported before drawing. Used by verification paths: a mismatch is a
/// protocol abort, not an authentication reject.
inline void ensure_synchronized(const KeyPool& pool, std::uint64_t expected_cursor) {
    if (pool.cursor() != expected_cursor)
        throw PoolDesyncError("pool replica desynchronized: cursor " +
                              std::to_string(pool.cursor()) + ", peer reported " +
                              std::to_string(expected_cursor));
}

} // namespace qkdauth

#endif // QKDAUTH_KEYPOOL_HPP
