#pragma once
// JSON views of the public result types (nlohmann::json via ADL).  Field
// names are part of the CLI's stable output contract; no timestamps or
// other run-dependent noise.

#include <json.hpp>

#include "constructions.hpp"
#include "heights.hpp"
#include "sparse.hpp"

namespace cyclo {

using nlohmann::json;

inline void to_json(json& j, const TernaryTriple& t) { j = json::array({t.p, t.q, t.r}); }

inline void to_json(json& j, const HeightRecord& r) {
    j = json{{"height", r.height}, {"degree", r.degree}, {"extremal_index", r.extremal_index}};
    if (std::holds_alternative<uint64_t>(r.subject)) {
        j["n"] = std::get<uint64_t>(r.subject);
    } else {
        const auto& t = std::get<std::array<int64_t, 3>>(r.subject);
        j["triple"] = json::array({t[0], t[1], t[2]});
    }
}

inline void to_json(json& j, const CoreReduction& c) {
    j = json{{"n", c.n},
             {"core", c.core},
             {"height_n", c.height_n},
             {"height_core", c.height_core},
             {"same_height", c.same_height}};
}

inline void to_json(json& j, const SearchCaps& c) {
    j = json{{"q_cap", c.q_cap}, {"r_cap", c.r_cap}, {"p_cap", c.p_cap}};
}

inline void to_json(json& j, const WitnessCertificate& c) {
    j = json{{"target_h", c.target_h},
             {"p_prime", c.p_prime},
             {"q", c.q},
             {"r", c.r},
             {"p", c.p},
             {"computed_height", c.computed_height},
             {"case", c.outcome == WitnessCase::exact_h ? "EXACT_H" : "H_PLUS_ONE"},
             {"strict_larger_p", c.strict_larger_p},
             {"search_caps_used", c.caps_used},
             {"degree", c.degree}};
}

inline void to_json(json& j, const Lemma1Result& r) {
    j = json{{"triple", r.triple},
             {"predicted_height", r.predicted_height},
             {"r_class_sign", std::string(1, r.r_class_sign)}};
}

inline void to_json(json& j, const Lemma4Result& r) {
    j = json{{"triple", r.triple}, {"predicted_height", r.predicted_height}};
}

inline void to_json(json& j, const Lemma2Range& r) {
    j = json{{"p", r.p}, {"h_min", r.h_min}, {"h_max", r.h_max}, {"heights", r.heights}};
}

inline void to_json(json& j, const JumpStep& s) {
    j = json{{"before", s.before},
             {"after", s.after},
             {"height_before", s.height_before},
             {"height_after", s.height_after},
             {"jumped", s.jumped}};
}

inline void to_json(json& j, const JumpSequenceResult& r) {
    j = json{{"start", r.start}, {"start_height", r.start_height}, {"steps", r.steps}};
    if (!r.stop_reason.empty()) j["stop_reason"] = r.stop_reason;
}

inline void to_json(json& j, const JumpProbe& p) {
    j = json{{"h_base", p.h_base}, {"h_shifted", p.h_shifted}, {"jumped", p.jumped}};
}

inline void to_json(json& j, const ChainEntry& e) {
    j = json{{"triple", e.triple}, {"height_computed", e.height_computed}};
    if (e.height_computed) j["height"] = e.height;
}

inline void to_json(json& j, const ChainResult& r) {
    j = json{{"entries", r.entries}};
    if (!r.stop_reason.empty()) j["stop_reason"] = r.stop_reason;
}

inline void to_json(json& j, const ExploreReport& r) {
    j = json{{"p", r.p},
             {"q_max", r.q_max},
             {"r_max", r.r_max},
             {"attained", std::vector<uint64_t>(r.attained.begin(), r.attained.end())},
             {"max_h", r.max_h},
             {"full_interval", r.full_interval},
             {"pairs_examined", r.pairs_examined},
             {"note", "empirical evidence over the boxed range, not a proof"}};
    json w = json::object();
    for (const auto& [h, t] : r.witnesses) w[std::to_string(h)] = t;
    j["witnesses"] = w;
}

inline void to_json(json& j, const SparseSetElement& e) {
    j = json{{"value", e.value},
             {"family", family_name(e.family)},
             {"index", e.index},
             {"modulus_used", e.modulus_used}};
    if (e.family == SparseFamily::p_seq) j["a"] = e.a;
}

inline void to_json(json& j, const PSequenceResult& r) {
    j = json{{"a", r.a},
             {"pi_k", r.pi_k},
             {"c_a", r.c_a},
             {"elements", r.elements},
             {"saturated", r.saturated}};
    if (!r.saturation_note.empty()) j["saturation_note"] = r.saturation_note;
}

inline void to_json(json& j, const CountReport& r) {
    j = json{{"x", r.x},
             {"count", r.count},
             {"bound_ok", r.bound_ok},
             {"qr_count", r.qr_count},
             {"qr_half_ok", r.qr_half_ok},
             {"p_count", r.p_count},
             {"p_half_ok", r.p_half_ok}};
}

inline void to_json(json& j, const P3Instance& i) {
    j = json{{"n", i.n},
             {"q_val", i.q_val},
             {"r_val", i.r_val},
             {"p_val", i.p_val},
             {"congruence_ok", i.congruence_ok},
             {"pair_in_set", i.pair_in_set},
             {"pair_ge_ca", i.pair_ge_ca}};
}

inline void to_json(json& j, const PropertyReport& r) {
    j = json{{"m", r.m},
             {"a", r.a},
             {"depth", r.depth},
             {"c_a", r.c_a},
             {"p1", {{"indices", r.p1_indices}, {"all_ok", r.p1_all_ok}, {"conclusive", r.p1_conclusive}}},
             {"p2", {{"indices", r.p2_indices}, {"all_ok", r.p2_all_ok}, {"conclusive", r.p2_conclusive}}},
             {"p3", {{"instances", r.p3_instances}, {"all_ok", r.p3_all_ok}, {"conclusive", r.p3_conclusive}}}};
}

inline void to_json(json& j, const SparseWitnessPick& p) {
    j = json{{"target_h", p.target_h}, {"p_prime", p.p_prime}, {"q", p.q}, {"r", p.r}, {"p", p.p}};
}

inline void to_json(json& j, const GeneratedSet& g) {
    j = json{{"support", g.support},
             {"q_depth", g.q_depth},
             {"r_depth", g.r_depth},
             {"a_max", g.a_max},
             {"elements", g.elements},
             {"p_families", g.p_families}};
    if (!g.trimmed_values.empty()) j["trimmed_values"] = g.trimmed_values;
}

inline void to_json(json& j, const TrimResult& t) {
    j = json{{"x_max", t.x_max},
             {"removed_values", t.removed_values},
             {"trimmed", t.trimmed}};
}

}  // namespace cyclo
