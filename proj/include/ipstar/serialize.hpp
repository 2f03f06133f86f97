#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "ipstar/constructions.hpp"
#include "ipstar/density.hpp"
#include "ipstar/errors.hpp"
#include "ipstar/largeness.hpp"
#include "ipstar/structures.hpp"

namespace ipstar {

using nlohmann::json;

// Elements serialize as tagged values; integers ride as decimal strings so
// arbitrary precision survives the round trip.
inline json to_json(const Element& e) {
    if (e.is_int()) return json{{"int", e.as_int().get_str()}};
    if (e.is_word()) return json{{"word", e.as_word()}};
    json coeffs = json::array();
    for (const Int& c : e.as_poly()) coeffs.push_back(c.get_str());
    return json{{"poly", coeffs}};
}

inline json to_json(const IndexSet& H) {
    json out = json::array();
    for (auto p : H.positions) out.push_back(p);
    return out;
}

inline json strings_of(const std::vector<Element>& es) {
    json out = json::array();
    for (const Element& e : es) out.push_back(to_string(e));
    return out;
}

// ---------------------------------------------------------------------------
// Certificates: canonical shape {"op", "inputs", "witness", "recheck"},
// recheck recomputed from the oracles at serialization time.
// ---------------------------------------------------------------------------

inline json certificate_window_verdict(const SetSpec& A, const WindowVerdict& v) {
    json cert;
    cert["op"] = "certify_ipr_star_window";
    cert["inputs"] = {{"set", A.describe()},
                      {"r", v.r},
                      {"window", strings_of(v.window)},
                      {"nodes_explored", v.nodes_explored}};
    json w;
    w["status"] = v.falsified() ? "falsified" : "certified-on-window";
    if (v.counterexample) w["counterexample"] = strings_of(v.counterexample->terms);
    cert["witness"] = w;
    cert["recheck"] = verify_window_verdict(A, v);
    return cert;
}

inline json certificate_pigeonhole(const SubgroupSpec& h, const FiniteSequence& seq,
                                   const PigeonholeBlock& blk) {
    json cert;
    cert["op"] = "pigeonhole_extract";
    cert["inputs"] = {{"subgroup", "(" + to_string(h.generator) + ")" + h.s.describe()},
                      {"sequence", strings_of(seq.terms)}};
    cert["witness"] = {{"start", blk.start}, {"end", blk.end}, {"sum", to_string(blk.sum)}};
    cert["recheck"] = recheck_pigeonhole(h, seq, blk);
    return cert;
}

inline json certificate_avoid(const SubgroupSpec& h, const AvoidCertificate& c) {
    json cert;
    cert["op"] = "avoid_sequence";
    cert["inputs"] = {{"subgroup", "(" + to_string(h.generator) + ")" + h.s.describe()},
                      {"n", c.seq.size()},
                      {"condition",
                       "each term is the least element in canonical order, skipping 0, whose sum "
                       "with every previously accumulated finite sum (and with 0) stays outside "
                       "the subgroup"}};
    cert["witness"] = {{"sequence", strings_of(c.seq.terms)},
                       {"sums_checked", c.sums_checked}};
    cert["recheck"] = recheck_avoid(h, c.seq);
    return cert;
}

inline json certificate_j_witness(const SetSpec& A, const std::vector<FiniteSequence>& F,
                                  const JWitness& w) {
    json cert;
    cert["op"] = "j_witness_search";
    json fams = json::array();
    for (const FiniteSequence& f : F) fams.push_back(strings_of(f.terms));
    cert["inputs"] = {{"set", A.describe()}, {"sequences", fams}};
    cert["witness"] = {{"a", to_string(w.a)},
                       {"H", to_json(w.H)},
                       {"images", strings_of(w.images)}};
    cert["recheck"] = recheck_j_witness(A, F, w);
    return cert;
}

inline json certificate_diff_demo(const SetSpec& A, const FiniteSequence& x_seq,
                                  const DiffDemoWitness& w) {
    json cert;
    cert["op"] = "diff_ipstar_demo";
    cert["inputs"] = {{"set", A.describe()}, {"x", strings_of(x_seq.terms)}};
    cert["witness"] = {{"a", to_string(w.a)},          {"y", to_string(w.y)},
                       {"H", to_json(w.H)},            {"fs_sum", to_string(w.fs_sum)},
                       {"member_hi", to_string(w.member_hi)}, {"member_lo", to_string(w.member_lo)}};
    cert["recheck"] = recheck_diff_demo(A, x_seq, w);
    return cert;
}

inline json certificate_goswami(const SetSpec& A, const SetSpec& B, const FiniteSequence& b,
                                const GoswamiXCert& c) {
    json cert;
    cert["op"] = "goswami_product_check";
    cert["inputs"] = {{"A", A.describe()}, {"B", B.describe()}, {"b", strings_of(b.terms)}};
    json facts = json::array();
    for (const GoswamiFactorization& f : c.facts)
        facts.push_back({{"r", to_string(f.r)}, {"a_prime", to_string(f.a_prime)}});
    cert["witness"] = {{"x", to_string(c.x)},
                       {"H", to_json(c.H)},
                       {"xb_sum", to_string(c.xb_sum)},
                       {"y_sum", to_string(c.y_sum)},
                       {"factorizations", facts}};
    cert["recheck"] = recheck_goswami_cert(A, B, b, c);
    return cert;
}

inline json certificate_ncj_witness(const std::vector<std::vector<Word>>& family,
                                    const NcJWitness& w) {
    json cert;
    cert["op"] = "noncommutative_j_witness";
    json fam = json::array();
    for (const auto& f : family) {
        json seq = json::array();
        for (const Word& t : f) seq.push_back(t);
        fam.push_back(seq);
    }
    cert["inputs"] = {{"family", fam}, {"set", "Fa (words of length >= 2 ending in a)"}};
    json fillers = json::array();
    for (const Word& f : w.fillers) fillers.push_back(f);
    json images = json::array();
    for (const Word& i : w.images) images.push_back(i);
    cert["witness"] = {{"H", to_json(w.H)}, {"fillers", fillers}, {"images", images}};
    cert["recheck"] = recheck_ncj_witness(family, w);
    return cert;
}

inline json to_json(const DensityEstimate& e) {
    return json{{"value", e.value_str()}, {"n_min", e.n_min},   {"n_max", e.n_max},
                {"arg", e.arg},           {"family", e.family}, {"estimator", e.estimator}};
}

}  // namespace ipstar
