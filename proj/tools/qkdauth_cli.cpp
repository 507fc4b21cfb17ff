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

// Command-line front end: key-budget analysis, tagging and verification
// against pool files, exhaustive bound checks, and simulation campaigns.
//
// Exit codes (stable contract): 0 success / accept, 1 authentication reject
// or failed bound check, 2 usage, format or resource errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qkdauth/qkdauth.hpp"

using json = nlohmann::ordered_json;
using namespace qkdauth;

namespace {

F0Kind parse_f0(const std::string& name, std::size_t r) {
    if (name == "sha") return r <= 256 ? F0Kind::sha_truncate : F0Kind::sha_expand;
    if (name == "sha-truncate") return F0Kind::sha_truncate;
    if (name == "sha-expand") return F0Kind::sha_expand;
    if (name == "linear-fold") return F0Kind::linear_fold;
    throw FormatError("unknown first-step hash: " + name);
}

BitString read_message_file(const std::string& path, std::optional<std::uint64_t> bits) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open message file: " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
    const std::uint64_t bit_len = bits.value_or(std::uint64_t{8} * data.size());
    const std::size_t need = (bit_len + 7) / 8;
    if (data.size() < need)
        throw FormatError("message file holds fewer bits than requested");
    data.resize(need);
    return BitString::from_bytes(data, bit_len);
}

int run_keycalc(std::uint64_t m, std::uint64_t n, std::uint64_t r,
                std::optional<std::uint64_t> seed_bits, bool as_json) {
    const WcParams wc = wc_params(m, n);
    const std::uint64_t ts_cost = affine_key_length(r, n) + seed_bits.value_or(0);
    json out;
    out["m"] = m;
    out["n"] = n;
    out["r"] = r;
    out["seed_bits"] = seed_bits.value_or(0);
    out["wc"] = {{"s_real", wc.s_real},
                 {"s_int", wc.s_int},
                 {"levels", wc.levels},
                 {"key_bits_formula", wc.key_bits_formula},
                 {"key_bits_actual", wc.key_bits_actual}};
    out["two_step"] = {{"key_bits", ts_cost}, {"degenerate", r >= m}};
    out["ratios"] = {{"message_over_wc_formula", static_cast<double>(m) / wc.key_bits_formula},
                     {"message_over_wc_actual",
                      static_cast<double>(m) / static_cast<double>(wc.key_bits_actual)},
                     {"message_over_two_step",
                      static_cast<double>(m) / static_cast<double>(ts_cost)}};
    if (as_json) {
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "message bits           " << m << "\n"
              << "tag bits               " << n << "\n"
              << "iterated-kernel key    " << wc.key_bits_formula << " bits (formula), "
              << wc.key_bits_actual << " bits (actual, " << wc.levels << " levels of s="
              << wc.s_int << ")\n"
              << "two-step key           " << ts_cost << " bits (r=" << r
              << (seed_bits ? ", incl. randomizer seed" : "") << ")"
              << (r >= m ? "  [degenerate: r >= m]" : "") << "\n"
              << "message / WC key       " << static_cast<double>(m) / wc.key_bits_formula
              << "\n"
              << "message / two-step key " << static_cast<double>(m) / static_cast<double>(ts_cost)
              << "\n";
    return 0;
}

struct SchemeOptions {
    std::string scheme = "twostep";
    std::uint64_t n = 64;
    std::uint64_t r = 256;
    std::string f0 = "sha";
    bool randomize = false;
    std::uint64_t seed_bits = 128;

    TwoStepParams two_step_params() const {
        TwoStepParams p{static_cast<std::size_t>(r), static_cast<std::size_t>(n),
                        parse_f0(f0, r), randomize, static_cast<std::size_t>(seed_bits)};
        p.validate();
        return p;
    }
};

int run_tag(const SchemeOptions& opt, const std::string& key_file,
            const std::string& message_file, std::optional<std::uint64_t> bits) {
    const BitString msg = read_message_file(message_file, bits);
    KeyPool pool = KeyPool::load(key_file);
    const std::uint64_t cursor_before = pool.cursor();
    BitString tag;
    if (opt.scheme == "wc") {
        tag = wc_tag(msg, pool, opt.n);
    } else if (opt.scheme == "twostep") {
        tag = twostep_tag(msg, pool, opt.two_step_params());
    } else {
        throw FormatError("unknown scheme: " + opt.scheme);
    }
    pool.save(key_file);
    json out;
    out["scheme"] = opt.scheme;
    out["message_bits"] = msg.size();
    out["tag"] = tag.to_hex();
    out["tag_bits"] = tag.size();
    out["key_bits_consumed"] = pool.cursor() - cursor_before;
    out["cursor_before"] = cursor_before;
    out["cursor_after"] = pool.cursor();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_verify(const SchemeOptions& opt, const std::string& key_file,
               const std::string& message_file, std::optional<std::uint64_t> bits,
               const std::string& tag_hex, std::optional<std::uint64_t> cursor) {
    const BitString msg = read_message_file(message_file, bits);
    const BitString tag = BitString::from_hex(tag_hex, opt.n);
    KeyPool pool = KeyPool::load(key_file);
    const std::uint64_t cursor_before = pool.cursor();
    bool accept = false;
    if (opt.scheme == "wc") {
        accept = wc_verify(msg, tag, pool, opt.n, cursor);
    } else if (opt.scheme == "twostep") {
        accept = twostep_verify(msg, tag, pool, opt.two_step_params(), cursor);
    } else {
        throw FormatError("unknown scheme: " + opt.scheme);
    }
    pool.save(key_file);
    json out;
    out["scheme"] = opt.scheme;
    out["verdict"] = accept ? "accept" : "reject";
    out["key_bits_consumed"] = pool.cursor() - cursor_before;
    out["cursor_after"] = pool.cursor();
    std::cout << out.dump(2) << "\n";
    return accept ? 0 : 1;
}

int run_check(const std::vector<std::uint64_t>& su2, const std::vector<std::uint64_t>& p1,
              const std::vector<std::uint64_t>& forgery) {
    bool all_pass = true;
    bool ran_any = false;
    auto report = [&](json record, bool pass) {
        record["pass"] = pass;
        std::cout << record.dump() << "\n";
        all_pass = all_pass && pass;
        ran_any = true;
    };
    if (!su2.empty()) {
        const auto res = oracle::check_su2(su2[0], su2[1]);
        report(json{{"check", "su2"},
                    {"params", {{"r", res.r}, {"n", res.n}}},
                    {"keys", res.keys},
                    {"value", res.max_deviation},
                    {"bound", 0.0}},
               res.pass);
    }
    if (!p1.empty()) {
        const auto res = oracle::check_p1(p1[0], p1[1]);
        report(json{{"check", "p1"},
                    {"params", {{"m", res.m}, {"r", res.r}}},
                    {"uniform_preimages", res.uniform},
                    {"value", res.p1},
                    {"bound", res.bound}},
               res.pass);
    }
    if (!forgery.empty()) {
        const auto res = oracle::forgery_exhaustive(forgery[0], forgery[1], forgery[2]);
        report(json{{"check", "forgery"},
                    {"params", {{"m", res.m}, {"r", res.r}, {"n", res.n}}},
                    {"value", res.success},
                    {"bound", res.bound}},
               res.pass);
    }
    if (!ran_any) {
        std::cerr << "error: nothing to check; pass --su2, --p1 or --forgery\n";
        return 2;
    }
    return all_pass ? 0 : 1;
}

int run_simulate(const SchemeOptions& opt, const std::string& adversary_name,
                 std::uint64_t trials, std::uint64_t seed, double reserve_fraction,
                 std::uint64_t raw_key_len, const std::vector<std::uint64_t>& extracts,
                 bool whole_transcript, const std::string& transcript_path) {
    SessionConfig cfg;
    cfg.raw_key_len = raw_key_len;
    cfg.extract_lens = extracts;
    cfg.reserve_fraction = reserve_fraction;
    cfg.whole_transcript = whole_transcript;
    if (opt.scheme == "wc") {
        cfg.scheme = Scheme::wegman_carter;
        cfg.wc_tag_bits = opt.n;
    } else if (opt.scheme == "twostep") {
        cfg.scheme = Scheme::two_step;
        cfg.two_step = opt.two_step_params();
    } else {
        throw FormatError("unknown scheme: " + opt.scheme);
    }

    AdversaryKind adversary;
    if (adversary_name == "none") adversary = AdversaryKind::none;
    else if (adversary_name == "inject") adversary = AdversaryKind::inject;
    else if (adversary_name == "replay") adversary = AdversaryKind::replay;
    else if (adversary_name == "mitm-split") adversary = AdversaryKind::mitm_split;
    else throw FormatError("unknown adversary: " + adversary_name);

    const auto root_seed = CtrRng::seed_from_u64(seed);

    if (!transcript_path.empty()) {
        // Replay trial 0 with a transcript sink; campaign results are
        // unaffected since every trial runs on fresh replica pools.
        std::ofstream tf(transcript_path, std::ios::trunc);
        if (!tf) throw FormatError("cannot open transcript file: " + transcript_path);
        const CtrRng root(root_seed);
        SessionConfig c0 = cfg;
        c0.rng_seed = root.fork_seed(1);
        CtrRng pool_rng = root.fork(0);
        const BitString material = pool_rng.next_bits(cfg.pool_bits_required());
        KeyPool alice(material);
        KeyPool bob(material);
        run_session(c0, alice, bob, adversary, [&](const TranscriptRecord& r) {
            json line;
            line["direction"] = r.direction;
            line["phase"] = r.phase;
            line["length"] = r.length;
            line["tag"] = r.tag_hex;
            line["verdict"] = r.verdict;
            tf << line.dump() << "\n";
        });
    }

    const CampaignStats stats = run_campaign(cfg, adversary, trials, root_seed);

    json out;
    out["scheme"] = opt.scheme;
    out["adversary"] = adversary_name;
    out["trials"] = trials;
    out["seed"] = seed;
    json params;
    params["n"] = opt.n;
    if (cfg.scheme == Scheme::two_step) {
        params["r"] = opt.r;
        params["f0"] = to_string(cfg.two_step.f0);
        params["randomize"] = cfg.two_step.randomize;
        params["seed_bits"] = cfg.two_step.randomize ? cfg.two_step.seed_bits : 0;
        params["key_cost_per_message"] = key_cost(cfg.two_step);
    }
    params["extracts"] = extracts;
    params["whole_transcript"] = whole_transcript;
    params["raw_key_len"] = raw_key_len;
    params["reserve_fraction"] = reserve_fraction;
    params["session_key_cost"] = cfg.session_key_cost();
    out["params"] = params;
    json results;
    results["messages_total"] = stats.messages_total;
    results["forgery_attempts"] = stats.forgery_attempts;
    results["forgery_accepts"] = stats.forgery_accepts;
    results["forgery_acceptance_rate"] = stats.forgery_acceptance_rate;
    results["sessions_aborted"] = stats.sessions_aborted;
    results["abort_rate"] = stats.abort_rate;
    results["key_consumed_total"] = stats.key_consumed_total;
    results["key_deposited_total"] = stats.key_deposited_total;
    if (stats.mean_growth_ratio)
        results["mean_growth_ratio"] = *stats.mean_growth_ratio;
    else
        results["mean_growth_ratio"] = nullptr;
    if (cfg.scheme == Scheme::two_step)
        results["forgery_bound"] = security_bound(opt.r, opt.n).p_total;
    out["results"] = results;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_keyfile_create(const std::string& out_path, std::uint64_t bits,
                       const std::string& hex, std::optional<std::uint64_t> seed) {
    BitString material;
    if (!hex.empty() && seed)
        throw FormatError("give either --hex or --seed, not both");
    if (!hex.empty()) {
        material = BitString::from_hex(hex, bits);
    } else if (seed) {
        CtrRng rng(CtrRng::seed_from_u64(*seed));
        material = rng.next_bits(bits);
    } else {
        throw FormatError("key material needed: pass --hex or --seed");
    }
    KeyPool pool(material);
    pool.save(out_path);
    json out;
    out["file"] = out_path;
    out["bits"] = pool.size_bits();
    out["cursor"] = pool.cursor();
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_keyfile_show(const std::string& path, bool with_hex) {
    const KeyPool pool = KeyPool::load(path);
    json out;
    out["file"] = path;
    out["bits"] = pool.size_bits();
    out["cursor"] = pool.cursor();
    out["remaining"] = pool.remaining();
    if (with_hex) out["hex"] = pool.contents().to_hex();
    std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unconditionally secure message authentication for QKD public channels"};
    app.require_subcommand(1);

    // keycalc
    auto* keycalc = app.add_subcommand(
        "keycalc", "Compare one-time key budgets of the two tagging schemes");
    std::uint64_t kc_m = 0, kc_n = 0, kc_r = 256;
    std::uint64_t kc_seed_bits = 0;
    bool kc_json = false;
    keycalc->add_option("--m", kc_m, "message length in bits")->required();
    keycalc->add_option("--n", kc_n, "tag length in bits")->required();
    keycalc->add_option("--r", kc_r, "two-step intermediate width in bits");
    auto* kc_sb = keycalc->add_option("--seed-bits", kc_seed_bits,
                                      "count a randomizer seed in the two-step cost");
    keycalc->add_flag("--json", kc_json, "machine-readable output");

    // shared scheme options for tag / verify / simulate
    SchemeOptions tag_opt, verify_opt, sim_opt;
    auto add_scheme_options = [](CLI::App* cmd, SchemeOptions& o, bool require_n) {
        cmd->add_option("--scheme", o.scheme, "wc | twostep")
            ->check(CLI::IsMember({"wc", "twostep"}));
        auto* n = cmd->add_option("--n", o.n, "tag length in bits");
        if (require_n) n->required();
        cmd->add_option("--r", o.r, "two-step intermediate width in bits");
        cmd->add_option("--f0", o.f0, "sha | sha-truncate | sha-expand | linear-fold");
        cmd->add_flag("--randomize", o.randomize, "XOR a seeded keystream into the message");
        cmd->add_option("--seed-bits", o.seed_bits, "randomizer seed length in bits");
    };

    // tag
    auto* tag = app.add_subcommand("tag", "Authenticate a message file against a key pool");
    std::string tag_key_file, tag_message_file;
    std::uint64_t tag_bits_override = 0;
    add_scheme_options(tag, tag_opt, true);
    tag->add_option("--key-file", tag_key_file, "pool file; consumed bits are persisted")
        ->required();
    tag->add_option("--message-file", tag_message_file, "raw message bytes")->required();
    auto* tag_bits_opt =
        tag->add_option("--bits", tag_bits_override, "message length in bits (default 8 x size)");

    // verify
    auto* verify = app.add_subcommand("verify", "Verify a tag against a key pool replica");
    std::string ver_key_file, ver_message_file, ver_tag_hex;
    std::uint64_t ver_bits_override = 0, ver_cursor = 0;
    add_scheme_options(verify, verify_opt, true);
    verify->add_option("--key-file", ver_key_file, "pool replica file")->required();
    verify->add_option("--message-file", ver_message_file, "raw message bytes")->required();
    verify->add_option("--tag", ver_tag_hex, "tag as lowercase hex")->required();
    auto* ver_bits_opt = verify->add_option("--bits", ver_bits_override,
                                            "message length in bits (default 8 x size)");
    auto* ver_cursor_opt = verify->add_option(
        "--cursor", ver_cursor, "tagger cursor before drawing; mismatch aborts (exit 2)");

    // check
    auto* check = app.add_subcommand("check", "Run exhaustive oracle checks");
    std::vector<std::uint64_t> chk_su2, chk_p1, chk_forgery;
    check->add_option("--su2", chk_su2, "r n: strong universality deviation")->expected(2);
    check->add_option("--p1", chk_p1, "m r: first-step collision probability")->expected(2);
    check->add_option("--forgery", chk_forgery, "m r n: exhaustive forgery game")->expected(3);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a session campaign with an adversary");
    std::string sim_adversary = "none", sim_transcript;
    std::uint64_t sim_trials = 1, sim_seed = 0, sim_raw = 1024;
    double sim_reserve = 0.5;
    bool sim_whole_transcript = false;
    std::vector<std::uint64_t> sim_extracts = {96, 80};
    add_scheme_options(simulate, sim_opt, false);
    simulate->add_option("--adversary", sim_adversary, "none | inject | replay | mitm-split")
        ->check(CLI::IsMember({"none", "inject", "replay", "mitm-split"}));
    simulate->add_option("--trials", sim_trials, "independent sessions to run");
    simulate->add_option("--seed", sim_seed, "campaign seed; output is a function of it");
    simulate->add_option("--reserve-fraction", sim_reserve,
                         "share of fresh key deposited back into the pools");
    simulate->add_option("--raw-key-len", sim_raw, "fresh key bits produced per session");
    simulate->add_option("--extract", sim_extracts, "extract lengths in bits (comma list)")
        ->delimiter(',');
    simulate->add_flag("--whole-transcript", sim_whole_transcript,
                       "authenticate the full transcript once per direction instead of "
                       "per extract");
    simulate->add_option("--transcript", sim_transcript, "write trial-0 transcript JSONL here");

    // keyfile
    auto* keyfile = app.add_subcommand("keyfile", "Create or inspect pool files");
    keyfile->require_subcommand(1);
    auto* kf_create = keyfile->add_subcommand("create", "Write a fresh pool file");
    std::string kfc_out, kfc_hex;
    std::uint64_t kfc_bits = 0, kfc_seed = 0;
    kf_create->add_option("--out", kfc_out, "output path")->required();
    kf_create->add_option("--bits", kfc_bits, "pool size in bits")->required();
    kf_create->add_option("--hex", kfc_hex, "explicit material as hex");
    auto* kfc_seed_opt =
        kf_create->add_option("--seed", kfc_seed, "derive material from this seed");
    auto* kf_show = keyfile->add_subcommand("show", "Print pool file header");
    std::string kfs_file;
    bool kfs_hex = false;
    kf_show->add_option("--file", kfs_file, "pool file")->required();
    kf_show->add_flag("--hex", kfs_hex, "include the material as hex");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*keycalc) {
            return run_keycalc(kc_m, kc_n, kc_r,
                               kc_sb->count() ? std::optional<std::uint64_t>(kc_seed_bits)
                                              : std::nullopt,
                               kc_json);
        }
        if (*tag) {
            return run_tag(tag_opt, tag_key_file, tag_message_file,
                           tag_bits_opt->count() ? std::optional<std::uint64_t>(tag_bits_override)
                                                 : std::nullopt);
        }
        if (*verify) {
            return run_verify(verify_opt, ver_key_file, ver_message_file,
                              ver_bits_opt->count()
                                  ? std::optional<std::uint64_t>(ver_bits_override)
                                  : std::nullopt,
                              ver_tag_hex,
                              ver_cursor_opt->count() ? std::optional<std::uint64_t>(ver_cursor)
                                                      : std::nullopt);
        }
        if (*check) return run_check(chk_su2, chk_p1, chk_forgery);
        if (*simulate) {
            return run_simulate(sim_opt, sim_adversary, sim_trials, sim_seed, sim_reserve,
                                sim_raw, sim_extracts, sim_whole_transcript, sim_transcript);
        }
        if (*keyfile) {
            if (*kf_create)
                return run_keyfile_create(kfc_out, kfc_bits, kfc_hex,
                                          kfc_seed_opt->count()
                                              ? std::optional<std::uint64_t>(kfc_seed)
                                              : std::nullopt);
            if (*kf_show) return run_keyfile_show(kfs_file, kfs_hex);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
