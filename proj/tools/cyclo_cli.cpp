// Command-line surface over the cyclotomic / inclusion-exclusion height
// library.  Every subcommand prints a single JSON envelope
//
//   { command, params, result, budget_report, version }
//
// with all effective settings echoed into params, so a run is reproducible
// from its own output.  The one exception is `coeffs --format csv`, which
// prints bare "index,value" lines.  --verify-oracle re-derives results
// through the independent dense-arithmetic oracle wherever its size caps
// allow and exits with an internal error on any mismatch.
//
// Exit codes: 0 ok; 2 domain error (bad arguments); 3 capacity (budget,
// overflow, search cap exhausted); 4 I/O; 1 internal inconsistency.

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <cyclo/constructions.hpp>
#include <cyclo/heights.hpp>
#include <cyclo/oracle.hpp>
#include <cyclo/primes.hpp>
#include <cyclo/serialize.hpp>
#include <cyclo/sparse.hpp>

using nlohmann::json;
using namespace cyclo;

namespace {

constexpr const char* cli_version = "0.1.0";

int exit_code_for(errc k) {
    switch (k) {
        case errc::invalid_argument: return 2;
        case errc::overflow:
        case errc::not_found:
        case errc::resource: return 3;
        case errc::io: return 4;
        default: return 1;
    }
}

// Effective cross-command settings after flag / config / env resolution.
struct Ctx {
    int64_t budget = default_coeff_budget;
    uint64_t ap_cap = default_ap_search_cap;
    bool verify = false;
    std::string out_path;     // empty: stdout
    std::string config_path;  // empty: none
};

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) fail(errc::io, "cannot open output file " + out_path);
    f << text << "\n";
    f.flush();
    if (!f) fail(errc::io, "short write to " + out_path);
}

void emit(const Ctx& c, const std::string& command, json params, json result,
          json budget_report, json oracle_check = nullptr) {
    params["budget"] = c.budget;
    params["verify_oracle"] = c.verify;
    params["out"] = c.out_path.empty() ? json(nullptr) : json(c.out_path);
    params["config"] = c.config_path.empty() ? json(nullptr) : json(c.config_path);
    json env{{"command", command},
             {"params", std::move(params)},
             {"result", std::move(result)},
             {"budget_report", std::move(budget_report)},
             {"version", cli_version}};
    if (!oracle_check.is_null()) env["oracle_check"] = std::move(oracle_check);
    write_text(env.dump(2), c.out_path);
}

// ------------------------------------------------------ oracle cross-checks

json oracle_entry_phi(uint64_t n, const Ctx& c, std::optional<uint64_t> expected_h) {
    json e{{"n", n}};
    if (n > oracle_phi_cap) {
        e["performed"] = false;
        e["note"] = "skipped: n exceeds oracle cap " + std::to_string(oracle_phi_cap);
        return e;
    }
    DensePoly ref = oracle_phi(n);
    CoeffSeries got = phi_coeffs(n, c.budget);
    if (ref.coeffs != got.coeffs)
        fail(errc::internal, "oracle cross-check mismatch on coefficients of index " +
                                 std::to_string(n));
    uint64_t oh = poly_height(ref);
    if (expected_h && oh != *expected_h)
        fail(errc::internal, "oracle height " + std::to_string(oh) + " != reported " +
                                 std::to_string(*expected_h) + " at index " + std::to_string(n));
    e["performed"] = true;
    e["match"] = true;
    e["oracle_height"] = oh;
    return e;
}

json oracle_entry_triple(int64_t p, int64_t q, int64_t r, const Ctx& c,
                         std::optional<uint64_t> expected_h) {
    json e{{"triple", json::array({p, q, r})}};
    if (p <= 2 || q <= 2 || r <= 2) {
        e["performed"] = false;
        e["note"] = "skipped: conventional slot, height is closed-form";
        return e;
    }
    int64_t pq = 0, pqr = 0;
    if (__builtin_mul_overflow(p, q, &pq) || __builtin_mul_overflow(pq, r, &pqr) ||
        static_cast<uint64_t>(pqr) > oracle_ie_cap) {
        e["performed"] = false;
        e["note"] = "skipped: p*q*r exceeds oracle cap " + std::to_string(oracle_ie_cap);
        return e;
    }
    TernaryTriple t = TernaryTriple::make(p, q, r, c.budget);
    DensePoly ref = oracle_inclusion_exclusion(t);
    CoeffSeries got = inclusion_exclusion_coeffs(t, c.budget);
    if (ref.coeffs != got.coeffs)
        fail(errc::internal, "oracle cross-check mismatch on coefficients of (" +
                                 std::to_string(p) + "," + std::to_string(q) + "," +
                                 std::to_string(r) + ")");
    uint64_t oh = poly_height(ref);
    if (expected_h && oh != *expected_h)
        fail(errc::internal, "oracle height " + std::to_string(oh) + " != reported " +
                                 std::to_string(*expected_h) + " for (" + std::to_string(p) +
                                 "," + std::to_string(q) + "," + std::to_string(r) + ")");
    e["performed"] = true;
    e["match"] = true;
    e["oracle_height"] = oh;
    return e;
}

json checks(std::initializer_list<json> entries) {
    json arr = json::array();
    for (const json& e : entries) arr.push_back(e);
    return json{{"checks", std::move(arr)}};
}

// ------------------------------------------------------------- subcommands

void run_height(const Ctx& c, bool has_n, uint64_t n, const std::vector<int64_t>& tri) {
    if (has_n == !tri.empty())
        fail(errc::invalid_argument, "height: give exactly one of n or --triple p q r");
    json params, result, oracle;
    json breport{{"coeff_budget", c.budget}};
    if (has_n) {
        params["n"] = n;
        HeightRecord rec = height(n, c.budget);
        result = rec;
        breport["series_terms"] = rec.degree + 1;
        if (c.verify) oracle = checks({oracle_entry_phi(n, c, rec.height)});
    } else {
        params["triple"] = json::array({tri[0], tri[1], tri[2]});
        HeightRecord rec = height_ternary(tri[0], tri[1], tri[2], c.budget);
        result = rec;
        breport["series_terms"] = rec.degree + 1;
        if (c.verify)
            oracle = checks({oracle_entry_triple(tri[0], tri[1], tri[2], c, rec.height)});
    }
    emit(c, "height", params, result, breport, oracle);
}

void run_coeffs(const Ctx& c, bool has_n, uint64_t n, const std::vector<int64_t>& tri,
                const std::string& format, bool header) {
    if (has_n == !tri.empty())
        fail(errc::invalid_argument, "coeffs: give exactly one of n or --triple p q r");
    json params{{"format", format}, {"header", header}};
    CoeffSeries s;
    if (has_n) {
        params["n"] = n;
        s = phi_coeffs(n, c.budget);
    } else {
        params["triple"] = json::array({tri[0], tri[1], tri[2]});
        TernaryTriple t = TernaryTriple::make(tri[0], tri[1], tri[2], c.budget);
        s = inclusion_exclusion_coeffs(t, c.budget);
    }
    json oracle;
    if (c.verify) {
        // The comparison itself is the point; a mismatch aborts before output.
        oracle = checks({has_n ? oracle_entry_phi(n, c, std::nullopt)
                               : oracle_entry_triple(tri[0], tri[1], tri[2], c, std::nullopt)});
    }
    if (format == "csv") {
        std::string text;
        if (header) text += "index,value\n";
        for (size_t i = 0; i < s.coeffs.size(); ++i) {
            text += std::to_string(i);
            text += ',';
            text += std::to_string(s.coeffs[i]);
            if (i + 1 < s.coeffs.size()) text += '\n';
        }
        write_text(text, c.out_path);
        return;
    }
    json result{{"degree", s.truncation_len() - 1}, {"coefficients", s.coeffs}};
    if (has_n)
        result["n"] = n;
    else
        result["triple"] = params["triple"];
    json breport{{"coeff_budget", c.budget}, {"series_terms", s.truncation_len()}};
    emit(c, "coeffs", params, result, breport, oracle);
}

void run_witness(const Ctx& c, uint64_t h, bool strict, SearchCaps caps, uint64_t scan_p) {
    WitnessCertificate cert = theorem1_witness(h, strict, caps, c.budget);
    json params{{"h", h},
                {"strict_larger_p", strict},
                {"q_cap", caps.q_cap},
                {"r_cap", caps.r_cap},
                {"p_cap", caps.p_cap},
                {"scan_p", scan_p}};
    json result = cert;
    if (scan_p > 0) {
        // Evidence for the "every admissible p" claim: walk the first scan_p
        // primes p == p' (mod qr) and confirm each height is h or h + 1.
        json arr = json::array();
        uint64_t qr = static_cast<uint64_t>(cert.q) * static_cast<uint64_t>(cert.r);
        uint64_t lower = 2;
        for (uint64_t i = 0; i < scan_p; ++i) {
            uint64_t pv = 0;
            try {
                pv = next_prime_in_ap(
                    {static_cast<uint64_t>(cert.p_prime) % qr, qr, lower, c.ap_cap});
            } catch (const error& e) {
                if (e.kind() != errc::not_found) throw;
                arr.push_back(json{{"note", std::string("search stopped: ") + e.what()}});
                break;
            }
            json entry{{"p", pv}};
            bool skipped = false;
            try {
                HeightRecord rec =
                    height_ternary(static_cast<int64_t>(pv), cert.q, cert.r, c.budget);
                if (rec.height != h && rec.height != h + 1)
                    fail(errc::internal, "scanned p " + std::to_string(pv) + " gives height " +
                                             std::to_string(rec.height) + " outside {" +
                                             std::to_string(h) + "," + std::to_string(h + 1) +
                                             "}");
                entry["height"] = rec.height;
            } catch (const error& e) {
                if (e.kind() != errc::resource) throw;
                entry["skipped"] = e.what();
                skipped = true;
            }
            arr.push_back(entry);
            if (skipped) break;  // later candidates are only larger
            lower = pv;
        }
        result["p_scan"] = arr;
    }
    json breport{{"coeff_budget", c.budget},
                 {"series_terms", cert.degree + 1},
                 {"q_cap", caps.q_cap},
                 {"r_cap", caps.r_cap},
                 {"p_cap", caps.p_cap}};
    json oracle;
    if (c.verify)
        oracle = checks({oracle_entry_triple(cert.p, cert.q, cert.r, c, cert.computed_height)});
    emit(c, "witness", params, result, breport, oracle);
}

void run_lemma1(const Ctx& c, int64_t p, uint64_t q_cap, uint64_t r_cap) {
    Lemma1Result res = lemma1_triple(p, q_cap, r_cap);
    json params{{"p", p}, {"q_cap", q_cap}, {"r_cap", r_cap}};
    json breport{{"coeff_budget", c.budget}, {"q_cap", q_cap}, {"r_cap", r_cap}};
    json oracle;
    if (c.verify)
        oracle = checks({oracle_entry_triple(res.triple.p, res.triple.q, res.triple.r, c,
                                             res.predicted_height)});
    emit(c, "lemma1", params, json(res), breport, oracle);
}

void run_lemma2(const Ctx& c, int64_t p) {
    Lemma2Range res = lemma2_range(p);
    json oracle;
    if (c.verify) oracle = json{{"note", "closed form; nothing to cross-check"}};
    emit(c, "lemma2", json{{"p", p}}, json(res), json{{"coeff_budget", c.budget}}, oracle);
}

void run_lemma4(const Ctx& c, int64_t p, int64_t k, int64_t l) {
    Lemma4Result res = lemma4_triple(p, k, l);
    json params{{"p", p}, {"k", k}, {"l", l}};
    json oracle;
    if (c.verify)
        oracle = checks({oracle_entry_triple(res.triple.p, res.triple.q, res.triple.r, c,
                                             res.predicted_height)});
    emit(c, "lemma4", params, json(res), json{{"coeff_budget", c.budget}}, oracle);
}

void run_jumpseq(const Ctx& c, int64_t p, int64_t q, int64_t r, int64_t steps) {
    JumpSequenceResult res = jump_sequence(TernaryTriple{p, q, r}, steps, c.budget);
    json params{{"p", p}, {"q", q}, {"r", r}, {"steps", steps}};
    int64_t max_len = res.start.degree() + 1;
    json oracle_checks = json::array();
    if (c.verify)
        oracle_checks.push_back(
            oracle_entry_triple(res.start.p, res.start.q, res.start.r, c, res.start_height));
    for (const auto& st : res.steps) {
        max_len = std::max(max_len, st.after.degree() + 1);
        if (c.verify)
            oracle_checks.push_back(
                oracle_entry_triple(st.after.p, st.after.q, st.after.r, c, st.height_after));
    }
    json breport{{"coeff_budget", c.budget}, {"series_terms", max_len}};
    json oracle;
    if (c.verify) oracle = json{{"checks", std::move(oracle_checks)}};
    emit(c, "jumpseq", params, json(res), breport, oracle);
}

void run_probe(const Ctx& c, int64_t q, int64_t r, int64_t s) {
    JumpProbe pr = jump_probe(q, r, s, c.budget);
    json params{{"q", q}, {"r", r}, {"s", s}};
    int64_t qr = checked_mul(q, r, "probe");
    int64_t shifted = checked_add(s, qr, "probe");
    int64_t terms = checked_add(
        checked_mul(checked_mul(q - 1, r - 1, "probe"), shifted - 1, "probe"), 1, "probe");
    json breport{{"coeff_budget", c.budget}, {"series_terms", terms}};
    json oracle;
    if (c.verify)
        oracle = checks({oracle_entry_triple(q, r, s, c, pr.h_base),
                         oracle_entry_triple(q, r, shifted, c, pr.h_shifted)});
    emit(c, "probe", params, json(pr), breport, oracle);
}

void run_chain(const Ctx& c, int64_t p, int64_t q, int64_t r, int64_t steps,
               uint64_t successor_cap) {
    ChainResult res = prime_chain(TernaryTriple{p, q, r}, steps, successor_cap, c.budget);
    json params{{"p", p}, {"q", q}, {"r", r}, {"steps", steps}, {"successor_cap", successor_cap}};
    int64_t max_len = 0;
    json oracle_checks = json::array();
    for (const auto& e : res.entries) {
        if (!e.height_computed) continue;
        max_len = std::max(max_len, e.triple.degree() + 1);
        if (c.verify)
            oracle_checks.push_back(
                oracle_entry_triple(e.triple.p, e.triple.q, e.triple.r, c, e.height));
    }
    json breport{{"coeff_budget", c.budget}, {"series_terms", max_len},
                 {"successor_cap", successor_cap}};
    json oracle;
    if (c.verify) oracle = json{{"checks", std::move(oracle_checks)}};
    emit(c, "chain", params, json(res), breport, oracle);
}

void run_explore(const Ctx& c, int64_t p, int64_t q_max, int64_t r_max) {
    ExploreReport res = explore_M(p, q_max, r_max, c.budget);
    json params{{"p", p}, {"q_max", q_max}, {"r_max", r_max}};
    json oracle;
    if (c.verify) {
        json arr = json::array();
        for (const auto& [h, t] : res.witnesses)
            arr.push_back(oracle_entry_triple(t.p, t.q, t.r, c, h));
        oracle = json{{"checks", std::move(arr)}, {"note", "witness triples only"}};
    }
    emit(c, "explore-m", params, json(res), json{{"coeff_budget", c.budget}}, oracle);
}

void run_reduce(const Ctx& c, uint64_t n) {
    CoreReduction res = reduce_to_core(n, c.budget);
    json oracle;
    if (c.verify)
        oracle = checks({oracle_entry_phi(res.n, c, res.height_n.height),
                         oracle_entry_phi(res.core, c, res.height_core.height)});
    emit(c, "reduce", json{{"n", n}}, json(res),
         json{{"coeff_budget", c.budget}}, oracle);
}

json sparse_oracle_note(const Ctx& c) {
    if (!c.verify) return nullptr;
    return json{{"note", "not applicable: set construction has no polynomial to cross-check"}};
}

void run_sparse_gen(const Ctx& c, uint64_t x_max) {
    GeneratedSet g = generate_support(x_max);
    emit(c, "sparse gen", json{{"x_max", x_max}}, json(g),
         json{{"coeff_budget", c.budget}, {"ap_cap", sparse_ap_cap}}, sparse_oracle_note(c));
}

void run_sparse_count(const Ctx& c, uint64_t x, uint64_t x_max) {
    if (x_max == 0) x_max = x;
    if (x_max < x)
        fail(errc::invalid_argument, "sparse count: --x-max must be >= --x");
    GeneratedSet g = generate_support(x_max);
    emit(c, "sparse count", json{{"x", x}, {"x_max", x_max}}, json(count_P(x, g)),
         json{{"coeff_budget", c.budget}, {"ap_cap", sparse_ap_cap}}, sparse_oracle_note(c));
}

void run_sparse_check(const Ctx& c, uint64_t m, uint64_t a, uint64_t depth) {
    PropertyReport rep = check_P_properties(m, a, depth);
    emit(c, "sparse check", json{{"m", m}, {"a", a}, {"depth", depth}}, json(rep),
         json{{"coeff_budget", c.budget}, {"ap_cap", sparse_ap_cap}}, sparse_oracle_note(c));
}

void run_sparse_trim(const Ctx& c, uint64_t x_max) {
    GeneratedSet g = generate_support(x_max);
    TrimResult t = trim_small(g, x_max);
    emit(c, "sparse trim", json{{"x_max", x_max}}, json(t),
         json{{"coeff_budget", c.budget}, {"ap_cap", sparse_ap_cap}}, sparse_oracle_note(c));
}

void run_sparse_pick(const Ctx& c, uint64_t h, uint64_t x_max) {
    GeneratedSet g = generate_support(x_max);
    SparseWitnessPick pick = pick_witness_from_set(h, g);
    json result = pick;
    // The picked triple is usually astronomically large; compute the height
    // only when the degree fits the budget, otherwise report that honestly.
    json oracle;
    if (pick.p <= static_cast<uint64_t>(INT64_MAX)) {
        try {
            HeightRecord rec = height_ternary(static_cast<int64_t>(pick.p),
                                              static_cast<int64_t>(pick.q),
                                              static_cast<int64_t>(pick.r), c.budget);
            result["computed_height"] = rec.height;
            if (c.verify)
                oracle = checks({oracle_entry_triple(static_cast<int64_t>(pick.p),
                                                     static_cast<int64_t>(pick.q),
                                                     static_cast<int64_t>(pick.r), c,
                                                     rec.height)});
        } catch (const error& e) {
            if (e.kind() != errc::resource && e.kind() != errc::overflow) throw;
            result["height_skipped"] = e.what();
        }
    } else {
        result["height_skipped"] = "p exceeds the signed 64-bit range";
    }
    emit(c, "sparse pick", json{{"h", h}, {"x_max", x_max}}, result,
         json{{"coeff_budget", c.budget}, {"ap_cap", sparse_ap_cap}}, oracle);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyclotomic and ternary inclusion-exclusion coefficient/height toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cli_version);

    int64_t budget_flag = 0;
    CLI::Option* opt_budget =
        app.add_option("--budget", budget_flag, "coefficient buffer budget in terms");
    bool verify = false;
    app.add_flag("--verify-oracle", verify,
                 "cross-check results through the independent dense oracle where its caps allow");
    app.add_flag("--use-oracle", verify)->group("");  // compatibility alias
    std::string out_path, config_path;
    app.add_option("--out", out_path, "write output to this file instead of stdout");
    app.add_option("--config", config_path,
                   "JSON config file; keys: budget, ap_search_cap (flags override)");

    // height
    auto* c_height = app.add_subcommand("height", "height of index n or of a triple");
    c_height->fallthrough();
    uint64_t h_n = 0;
    std::vector<int64_t> h_tri;
    CLI::Option* h_n_opt = c_height->add_option("n", h_n, "index n >= 1");
    c_height->add_option("--triple", h_tri,
                         "p q r, pairwise coprime, each > 2 (third slot may be 1 or 2)")
        ->expected(3);

    // coeffs
    auto* c_coeffs = app.add_subcommand("coeffs", "full coefficient vector");
    c_coeffs->fallthrough();
    uint64_t k_n = 0;
    std::vector<int64_t> k_tri;
    CLI::Option* k_n_opt = c_coeffs->add_option("n", k_n, "index n >= 1");
    c_coeffs->add_option("--triple", k_tri, "p q r, pairwise coprime, each > 2")->expected(3);
    std::string k_format = "json";
    c_coeffs->add_option("--format", k_format, "output format (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
    bool k_header = false;
    c_coeffs->add_flag("--header", k_header, "emit an index,value header line in csv mode");

    // witness
    auto* c_witness = app.add_subcommand("witness", "certificate triple with height h or h+1");
    c_witness->fallthrough();
    uint64_t w_h = 0;
    c_witness->add_option("target_h", w_h, "target height h >= 1")->required();
    bool w_strict = false;
    c_witness->add_flag("--strict-larger-p", w_strict,
                        "force the third search even when 2h-1 is already prime");
    uint64_t w_qcap = 0, w_rcap = 0, w_pcap = 0;
    CLI::Option* w_qcap_opt = c_witness->add_option("--q-cap", w_qcap, "q-search cap");
    CLI::Option* w_rcap_opt = c_witness->add_option("--r-cap", w_rcap, "r-search cap");
    CLI::Option* w_pcap_opt = c_witness->add_option("--p-cap", w_pcap, "p-search cap");
    uint64_t w_scan = 0;
    c_witness->add_option("--scan-p", w_scan,
                          "also compute heights for the first N admissible p");

    // lemma1 / lemma2 / lemma4
    auto* c_l1 = app.add_subcommand("lemma1", "prime triple with height exactly (p+1)/2");
    c_l1->fallthrough();
    int64_t l1_p = 0;
    c_l1->add_option("p", l1_p, "odd prime p")->required();
    uint64_t l1_qcap = 0, l1_rcap = 0;
    CLI::Option* l1_qcap_opt = c_l1->add_option("--q-cap", l1_qcap, "q-search cap");
    CLI::Option* l1_rcap_opt = c_l1->add_option("--r-cap", l1_rcap, "r-search cap");

    auto* c_l2 = app.add_subcommand("lemma2", "attainable height range for fixed prime p");
    c_l2->fallthrough();
    int64_t l2_p = 0;
    c_l2->add_option("p", l2_p, "odd prime p")->required();

    auto* c_l4 = app.add_subcommand("lemma4", "closed-form triple, composite p allowed");
    c_l4->fallthrough();
    int64_t l4_p = 0, l4_k = 0, l4_l = 0;
    c_l4->add_option("p", l4_p, "odd p >= 3 (not necessarily prime)")->required();
    c_l4->add_option("k", l4_k, "q = 2 + (2k+1)p  (default 0)");
    c_l4->add_option("l", l4_l, "r = (pq+1)/2 + l*pq  (default 0)");

    // jumpseq / probe / chain
    auto* c_jump = app.add_subcommand("jumpseq", "iterate (p,q,r) -> (q,r,p+qr)");
    c_jump->fallthrough();
    int64_t j_p = 0, j_q = 0, j_r = 0, j_steps = 1;
    c_jump->add_option("p", j_p)->required();
    c_jump->add_option("q", j_q)->required();
    c_jump->add_option("r", j_r)->required();
    c_jump->add_option("--steps", j_steps, "number of jumps (default 1)");

    auto* c_probe = app.add_subcommand("probe", "compare heights at s and s + q*r");
    c_probe->fallthrough();
    int64_t pr_q = 0, pr_r = 0, pr_s = 0;
    c_probe->add_option("q", pr_q)->required();
    c_probe->add_option("r", pr_r)->required();
    c_probe->add_option("s", pr_s, "third slot; 1 and 2 use the conventional values")->required();

    auto* c_chain = app.add_subcommand("chain", "prime chain via successor primes mod q*r");
    c_chain->fallthrough();
    int64_t ch_p = 0, ch_q = 0, ch_r = 0, ch_steps = 1;
    c_chain->add_option("p", ch_p)->required();
    c_chain->add_option("q", ch_q)->required();
    c_chain->add_option("r", ch_r)->required();
    c_chain->add_option("--steps", ch_steps, "number of successors (default 1)");
    uint64_t ch_cap = 0;
    CLI::Option* ch_cap_opt = c_chain->add_option("--successor-cap", ch_cap,
                                                  "cap for the successor prime search");

    // explore-m
    auto* c_exp = app.add_subcommand("explore-m", "attained heights over a (q,r) box");
    c_exp->fallthrough();
    int64_t e_p = 0, e_qmax = 0, e_rmax = 0;
    c_exp->add_option("p", e_p, "odd prime p")->required();
    c_exp->add_option("q_max", e_qmax)->required();
    c_exp->add_option("r_max", e_rmax)->required();

    // reduce
    auto* c_red = app.add_subcommand("reduce", "odd squarefree core with the same height");
    c_red->fallthrough();
    uint64_t red_n = 0;
    c_red->add_option("n", red_n, "index n >= 1")->required();

    // sparse
    auto* c_sparse = app.add_subcommand("sparse", "thin prime support set tools");
    c_sparse->require_subcommand(1);
    c_sparse->fallthrough();

    auto* s_gen = c_sparse->add_subcommand("gen", "generate all families for a range");
    s_gen->fallthrough();
    uint64_t sg_xmax = 1000000;
    s_gen->add_option("--x-max", sg_xmax, "generation range (default 1000000)");

    auto* s_count = c_sparse->add_subcommand("count", "count set values <= x against ln x");
    s_count->fallthrough();
    uint64_t sc_x = 0, sc_xmax = 0;
    s_count->add_option("--x", sc_x, "count values <= x")->required();
    s_count->add_option("--x-max", sc_xmax, "generation range (default: x)");

    auto* s_check = c_sparse->add_subcommand("check", "verify the three defining properties");
    s_check->fallthrough();
    uint64_t sk_m = 0, sk_a = 0, sk_depth = 6;
    s_check->add_option("m", sk_m, "odd m >= 3 for the divisibility property")->required();
    s_check->add_option("a", sk_a, "family parameter a >= 1")->required();
    s_check->add_option("--depth", sk_depth, "sequence depth to inspect (default 6)");

    auto* s_trim = c_sparse->add_subcommand("trim", "remove the prefix violating count < ln x");
    s_trim->fallthrough();
    uint64_t st_xmax = 1000000;
    s_trim->add_option("--x-max", st_xmax, "range over which the bound must hold");

    auto* s_pick = c_sparse->add_subcommand("pick", "pick a witness triple from inside the set");
    s_pick->fallthrough();
    uint64_t sp_h = 0, sp_xmax = 1000000;
    s_pick->add_option("target_h", sp_h, "target height h >= 1")->required();
    s_pick->add_option("--x-max", sp_xmax, "generation range (default 1000000)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Ctx c;
    c.verify = verify;
    c.out_path = out_path;
    c.config_path = config_path;
    try {
        // Resolution order: built-in default < CYCLO_COEFF_BUDGET < config < flags.
        if (const char* env = std::getenv("CYCLO_COEFF_BUDGET")) {
            errno = 0;
            char* end = nullptr;
            long long v = std::strtoll(env, &end, 10);
            if (errno != 0 || end == env || *end != '\0' || v < 1)
                fail(errc::invalid_argument,
                     "CYCLO_COEFF_BUDGET must be a positive integer, got '" +
                         std::string(env) + "'");
            c.budget = v;
        }
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) fail(errc::io, "cannot read config file " + config_path);
            json cfg;
            try {
                cfg = json::parse(f);
            } catch (const json::exception& ex) {
                fail(errc::invalid_argument, std::string("config parse: ") + ex.what());
            }
            if (!cfg.is_object())
                fail(errc::invalid_argument, "config must be a JSON object");
            for (const auto& [key, value] : cfg.items()) {
                if (key == "budget") {
                    if (!value.is_number_integer() || value.get<int64_t>() < 1)
                        fail(errc::invalid_argument, "config budget must be a positive integer");
                    c.budget = value.get<int64_t>();
                } else if (key == "ap_search_cap") {
                    if (!value.is_number_unsigned() && !(value.is_number_integer() &&
                                                         value.get<int64_t>() > 0))
                        fail(errc::invalid_argument,
                             "config ap_search_cap must be a positive integer");
                    c.ap_cap = value.get<uint64_t>();
                } else {
                    fail(errc::invalid_argument,
                         "unknown config key '" + key + "' (allowed: budget, ap_search_cap)");
                }
            }
        }
        if (opt_budget->count() > 0) {
            if (budget_flag < 1) fail(errc::invalid_argument, "--budget must be >= 1");
            c.budget = budget_flag;
        }

        if (c_height->parsed()) {
            run_height(c, h_n_opt->count() > 0, h_n, h_tri);
        } else if (c_coeffs->parsed()) {
            run_coeffs(c, k_n_opt->count() > 0, k_n, k_tri, k_format, k_header);
        } else if (c_witness->parsed()) {
            SearchCaps caps{w_qcap_opt->count() ? w_qcap : c.ap_cap,
                            w_rcap_opt->count() ? w_rcap : c.ap_cap,
                            w_pcap_opt->count() ? w_pcap : c.ap_cap};
            run_witness(c, w_h, w_strict, caps, w_scan);
        } else if (c_l1->parsed()) {
            run_lemma1(c, l1_p, l1_qcap_opt->count() ? l1_qcap : c.ap_cap,
                       l1_rcap_opt->count() ? l1_rcap : c.ap_cap);
        } else if (c_l2->parsed()) {
            run_lemma2(c, l2_p);
        } else if (c_l4->parsed()) {
            run_lemma4(c, l4_p, l4_k, l4_l);
        } else if (c_jump->parsed()) {
            run_jumpseq(c, j_p, j_q, j_r, j_steps);
        } else if (c_probe->parsed()) {
            run_probe(c, pr_q, pr_r, pr_s);
        } else if (c_chain->parsed()) {
            run_chain(c, ch_p, ch_q, ch_r, ch_steps,
                      ch_cap_opt->count() ? ch_cap : c.ap_cap);
        } else if (c_exp->parsed()) {
            run_explore(c, e_p, e_qmax, e_rmax);
        } else if (c_red->parsed()) {
            run_reduce(c, red_n);
        } else if (c_sparse->parsed()) {
            if (s_gen->parsed())
                run_sparse_gen(c, sg_xmax);
            else if (s_count->parsed())
                run_sparse_count(c, sc_x, sc_xmax);
            else if (s_check->parsed())
                run_sparse_check(c, sk_m, sk_a, sk_depth);
            else if (s_trim->parsed())
                run_sparse_trim(c, st_xmax);
            else if (s_pick->parsed())
                run_sparse_pick(c, sp_h, sp_xmax);
        }
        return 0;
    } catch (const error& e) {
        std::cerr << "cyclo: error: " << e.what() << " [" << errc_name(e.kind()) << "]\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "cyclo: internal error: " << e.what() << "\n";
        return 1;
    }
}
