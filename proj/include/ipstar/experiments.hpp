#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ipstar/constructions.hpp"
#include "ipstar/density.hpp"
#include "ipstar/errors.hpp"
#include "ipstar/largeness.hpp"
#include "ipstar/prng.hpp"
#include "ipstar/serialize.hpp"
#include "ipstar/sieve.hpp"
#include "ipstar/structures.hpp"

namespace ipstar {

inline constexpr const char* kToolVersion = "ipstar 0.1.0";
inline constexpr const char* kReportSchema = "ipstar-lab/1";

/// Verbatim caveat carried by every central-set diagnostic report.
inline constexpr const char* kCentralCaveat = "diagnostics are necessary-condition checks only";

// ---------------------------------------------------------------------------
// Guards
// ---------------------------------------------------------------------------

/// Search guards; every exhaustive engine fails loudly against these instead
/// of hanging. All are config-overridable and echoed into reports.
struct GuardSettings {
    int max_certify_r = 8;
    std::uint64_t max_certify_window = 64;
    std::uint64_t max_sieve_limit = 100000000ull;
    std::uint64_t enum_budget = 100000;

    json to_json() const {
        return json{{"max_certify_r", max_certify_r},
                    {"max_certify_window", max_certify_window},
                    {"max_sieve_limit", max_sieve_limit},
                    {"enum_budget", enum_budget}};
    }

    static GuardSettings from_json(const json& j) {
        GuardSettings g;
        for (auto& [key, value] : j.items()) {
            if (key == "max_certify_r")
                g.max_certify_r = value.get<int>();
            else if (key == "max_certify_window")
                g.max_certify_window = value.get<std::uint64_t>();
            else if (key == "max_sieve_limit")
                g.max_sieve_limit = value.get<std::uint64_t>();
            else if (key == "enum_budget")
                g.enum_budget = value.get<std::uint64_t>();
            else
                throw InvalidConfigError("unknown guard key: " + key);
        }
        return g;
    }

    SearchGuards certify() const {
        return SearchGuards{max_certify_r, static_cast<std::size_t>(max_certify_window)};
    }
};

inline std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// One experiment invocation: name, seed, output target and the experiment's
/// own parameters. Reserved top-level keys are fixed; everything else is a
/// parameter validated against the experiment's schema.
struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 0;
    std::string output;          // empty = stdout summary only
    std::string format = "json"; // json | csv
    std::string cache_dir = ".sieve-cache";
    GuardSettings guards;
    json params = json::object();

    static ExperimentConfig from_json(const json& doc) {
        if (!doc.is_object()) throw InvalidConfigError("config must be a JSON object");
        ExperimentConfig c;
        bool has_name = false;
        for (auto& [key, value] : doc.items()) {
            if (key == "experiment") {
                c.experiment = value.get<std::string>();
                has_name = true;
            } else if (key == "seed") {
                c.seed = value.get<std::uint64_t>();
            } else if (key == "output") {
                c.output = value.get<std::string>();
            } else if (key == "format") {
                c.format = value.get<std::string>();
                if (c.format != "json" && c.format != "csv")
                    throw InvalidConfigError("format must be json or csv");
            } else if (key == "cache_dir") {
                c.cache_dir = value.get<std::string>();
            } else if (key == "guards") {
                c.guards = GuardSettings::from_json(value);
            } else {
                c.params[key] = value;
            }
        }
        if (!has_name) throw InvalidConfigError("config needs an \"experiment\" key");
        return c;
    }

    /// Full normalized form; round-trips unchanged through from_json.
    json to_json() const {
        json doc = params;
        doc["experiment"] = experiment;
        doc["seed"] = seed;
        doc["output"] = output;
        doc["format"] = format;
        doc["cache_dir"] = cache_dir;
        doc["guards"] = guards.to_json();
        return doc;
    }
};

// ---------------------------------------------------------------------------
// Parameter schemas
// ---------------------------------------------------------------------------

struct ParamSpec {
    enum class Type { UInt, Int, Bool, String, Array, Object };

    std::string key;
    Type type;
    json def;
    std::string help;
};

inline void validate_params(const std::vector<ParamSpec>& schema, json& params) {
    for (auto& [key, value] : params.items()) {
        const ParamSpec* found = nullptr;
        for (const ParamSpec& p : schema)
            if (p.key == key) found = &p;
        if (!found) throw InvalidConfigError("unknown parameter \"" + key + "\"");
        switch (found->type) {
            case ParamSpec::Type::UInt: {
                bool ok = value.is_number_unsigned()
                              ? value.get<std::uint64_t>() > 0
                              : (value.is_number_integer() && value.get<std::int64_t>() > 0);
                if (!ok)
                    throw InvalidConfigError("parameter \"" + key + "\" must be a positive integer");
                break;
            }
            case ParamSpec::Type::Int:
                if (!value.is_number_integer())
                    throw InvalidConfigError("parameter \"" + key + "\" must be an integer");
                break;
            case ParamSpec::Type::Bool:
                if (!value.is_boolean())
                    throw InvalidConfigError("parameter \"" + key + "\" must be a boolean");
                break;
            case ParamSpec::Type::String:
                if (!value.is_string())
                    throw InvalidConfigError("parameter \"" + key + "\" must be a string");
                break;
            case ParamSpec::Type::Array:
                if (!value.is_array())
                    throw InvalidConfigError("parameter \"" + key + "\" must be an array");
                break;
            case ParamSpec::Type::Object:
                if (!value.is_object())
                    throw InvalidConfigError("parameter \"" + key + "\" must be an object");
                break;
        }
    }
    for (const ParamSpec& p : schema)
        if (!params.contains(p.key)) params[p.key] = p.def;
}

// ---------------------------------------------------------------------------
// Experiment context
// ---------------------------------------------------------------------------

class ExperimentContext {
  public:
    explicit ExperimentContext(ExperimentConfig cfg) : cfg_(std::move(cfg)) {}

    const ExperimentConfig& config() const { return cfg_; }
    const GuardSettings& guards() const { return cfg_.guards; }
    std::uint64_t seed() const { return cfg_.seed; }

    std::uint64_t uint_param(const std::string& key) const {
        return cfg_.params.at(key).get<std::uint64_t>();
    }
    long int_param(const std::string& key) const { return cfg_.params.at(key).get<long>(); }
    bool bool_param(const std::string& key) const { return cfg_.params.at(key).get<bool>(); }
    const json& param(const std::string& key) const { return cfg_.params.at(key); }

    std::shared_ptr<const Sieve> sieve(std::uint64_t limit) {
        auto it = sieves_.find(limit);
        if (it != sieves_.end()) return it->second;
        auto s = sieve_primes(limit, cfg_.cache_dir, cfg_.guards.max_sieve_limit);
        sieves_.emplace(limit, s);
        return s;
    }

    void row(json r) { rows_.push_back(std::move(r)); }
    void certificate(json c) { certs_.push_back(std::move(c)); }

    const json& rows() const { return rows_; }
    const json& certificates() const { return certs_; }

  private:
    ExperimentConfig cfg_;
    std::map<std::uint64_t, std::shared_ptr<const Sieve>> sieves_;
    json rows_ = json::array();
    json certs_ = json::array();
};

// ---------------------------------------------------------------------------
// Set descriptors (config-level SetSpec construction, integer structure)
// ---------------------------------------------------------------------------

/// Builds a SetSpec over Z from a JSON descriptor:
///   {"kind":"ideal","generator":k}
///   {"kind":"explicit","elements":[...]}
///   {"kind":"primes","limit":N}
///   {"kind":"difference","inner":D,"bound":N,"positive_only":false}
///   {"kind":"product","left":D,"right":D,"bound":N}
///   {"kind":"dilation","factor":k,"inner":D}
///   {"kind":"complement","inner":D,"window":[lo,hi]}
///   {"kind":"union","members":[D,...]}
inline SetSpec set_spec_from_json(const json& d, ExperimentContext& ctx) {
    if (!d.is_object() || !d.contains("kind"))
        throw InvalidConfigError("set descriptor needs a \"kind\"");
    const GroundStructure Z = GroundStructure::integers();
    std::string kind = d.at("kind").get<std::string>();
    if (kind == "ideal")
        return SetSpec::ideal(SubgroupSpec(Z, Element::integer(d.at("generator").get<long>())));
    if (kind == "explicit") {
        std::vector<Element> es;
        for (const auto& v : d.at("elements")) es.push_back(Element::integer(v.get<long>()));
        return SetSpec::explicit_set(Z, std::move(es));
    }
    if (kind == "primes") return SetSpec::primes(ctx.sieve(d.at("limit").get<std::uint64_t>()));
    if (kind == "difference")
        return SetSpec::difference(set_spec_from_json(d.at("inner"), ctx),
                                   Int(d.at("bound").get<long>()),
                                   d.value("positive_only", false));
    if (kind == "product")
        return SetSpec::product(set_spec_from_json(d.at("left"), ctx),
                                set_spec_from_json(d.at("right"), ctx),
                                Int(d.at("bound").get<long>()));
    if (kind == "dilation")
        return SetSpec::dilation(Element::integer(d.at("factor").get<long>()),
                                 set_spec_from_json(d.at("inner"), ctx));
    if (kind == "complement") {
        long lo = d.at("window").at(0).get<long>();
        long hi = d.at("window").at(1).get<long>();
        return SetSpec::complement(set_spec_from_json(d.at("inner"), ctx), range_window(lo, hi));
    }
    if (kind == "union") {
        std::vector<SetSpec> ms;
        for (const auto& m : d.at("members")) ms.push_back(set_spec_from_json(m, ctx));
        return SetSpec::union_of(std::move(ms));
    }
    throw InvalidConfigError("unknown set descriptor kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Assembled experiment report. Byte-identical across runs with the same
/// config: everything except wall_time_ms and the hash itself is covered by
/// region_hash.
struct Report {
    json doc;

    std::string hash_region() const {
        json region = doc;
        region.erase("wall_time_ms");
        region.erase("region_hash");
        return region.dump(2);
    }

    std::string to_json_text() const { return doc.dump(2) + "\n"; }

    /// CSV projection of the result rows: header = sorted union of row keys,
    /// every cell quoted, nested values as compact JSON.
    std::string to_csv_text() const {
        std::vector<std::string> cols;
        for (const auto& row : doc.at("rows"))
            for (auto& [key, value] : row.items()) {
                bool seen = false;
                for (const auto& c : cols) seen = seen || c == key;
                if (!seen) cols.push_back(key);
            }
        std::sort(cols.begin(), cols.end());
        auto cell = [](const json& v) {
            std::string text = v.is_string() ? v.get<std::string>() : v.dump();
            std::string out = "\"";
            for (char ch : text) {
                out += ch;
                if (ch == '"') out += '"';
            }
            return out + "\"";
        };
        std::string out;
        for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cell(json(cols[i]));
        out += "\n";
        for (const auto& row : doc.at("rows")) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (i) out += ",";
                out += row.contains(cols[i]) ? cell(row.at(cols[i])) : "\"\"";
            }
            out += "\n";
        }
        return out;
    }
};

inline Report assemble_report(const ExperimentContext& ctx, double wall_ms) {
    json doc;
    doc["schema"] = kReportSchema;
    doc["tool_version"] = kToolVersion;
    doc["experiment"] = ctx.config().experiment;
    json cfg = ctx.config().to_json();
    doc["config"] = cfg;
    doc["config_hash"] = fnv1a64_hex(cfg.dump());
    doc["prng"] = kPrngVersion;
    doc["seed"] = ctx.config().seed;
    doc["guards"] = ctx.config().guards.to_json();
    doc["rows"] = ctx.rows();
    doc["certificates"] = ctx.certificates();
    bool all = true;
    for (const auto& c : ctx.certificates()) {
        if (!c.contains("recheck") || !c.at("recheck").get<bool>()) all = false;
    }
    if (!all)
        throw RecheckFailureError("a certificate failed re-verification during report assembly");
    doc["recheck_all"] = true;
    doc["wall_time_ms"] = wall_ms;
    Report rep{std::move(doc)};
    rep.doc["region_hash"] = fnv1a64_hex(rep.hash_region());
    return rep;
}

/// Atomic write: temp file in the target directory, then rename.
inline void write_report(const Report& rep, const std::filesystem::path& path,
                         const std::string& format) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f << (format == "csv" ? rep.to_csv_text() : rep.to_json_text());
        if (!f) throw IoError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Experiment registry
// ---------------------------------------------------------------------------

struct ExperimentDef {
    std::string name;
    std::string summary;       // one line for --help
    std::string explain_text;  // the mathematical claim being exercised
    std::vector<ParamSpec> params;
    std::function<void(ExperimentContext&)> run;
};

namespace experiments {

// --- 1. ipstar-subgroup ----------------------------------------------------

inline void run_ipstar_subgroup(ExperimentContext& ctx) {
    const GroundStructure Z = GroundStructure::integers();
    long k = static_cast<long>(ctx.uint_param("k"));
    if (k < 2) throw InvalidConfigError("k must be >= 2");
    long radius = static_cast<long>(ctx.uint_param("window_radius"));
    auto A = SetSpec::ideal(SubgroupSpec(Z, Element::integer(k)));
    auto window = canonical_int_window(radius, false);

    auto emit = [&](int r) {
        WindowVerdict v = certify_ipr_star_window(A, r, window, ctx.guards().certify());
        json row{{"k", k},
                 {"r", r},
                 {"status", v.falsified() ? "falsified" : "certified-on-window"},
                 {"nodes", v.nodes_explored}};
        if (v.counterexample) row["counterexample"] = strings_of(v.counterexample->terms);
        ctx.row(row);
        ctx.certificate(certificate_window_verdict(A, v));
    };
    emit(static_cast<int>(k) + 1);  // certified expected
    if (k >= 2) emit(static_cast<int>(k) - 1);  // falsified expected, all-ones counterexample
    if (ctx.bool_param("scan")) {
        for (int r = 1; r <= static_cast<int>(k) + 1; ++r) {
            WindowVerdict v = certify_ipr_star_window(A, r, window, ctx.guards().certify());
            ctx.row(json{{"k", k},
                         {"r", r},
                         {"scan", true},
                         {"status", v.falsified() ? "falsified" : "certified-on-window"}});
            if (!v.falsified()) break;  // minimal window-certified r found
        }
    }
}

// --- 2. avoid-zx -------------------------------------------------------------

inline void run_avoid_zx(ExperimentContext& ctx) {
    const GroundStructure ZX = GroundStructure::poly_over_z();
    std::size_t n = ctx.uint_param("n");
    for (const auto& gen : ctx.param("generators")) {
        Poly coeffs;
        for (const auto& c : gen) coeffs.emplace_back(c.get<long>());
        SubgroupSpec h(ZX, Element::poly(coeffs));
        AvoidCertificate cert = avoid_sequence(h, n, ctx.guards().enum_budget);
        ctx.row(json{{"generator", to_string(h.generator)},
                     {"n", n},
                     {"sequence", strings_of(cert.seq.terms)},
                     {"sums_checked", cert.sums_checked},
                     {"clean", true}});
        ctx.certificate(certificate_avoid(h, cert));
    }
}

// --- 3. jdiff ----------------------------------------------------------------

inline void run_jdiff(ExperimentContext& ctx) {
    const GroundStructure Z = GroundStructure::integers();
    std::uint64_t count = ctx.uint_param("count");
    std::size_t len = ctx.uint_param("length");
    long tmin = static_cast<long>(ctx.uint_param("term_min"));
    long tmax = static_cast<long>(ctx.uint_param("term_max"));
    long ymax = static_cast<long>(ctx.uint_param("y_max"));
    if (tmin > tmax) throw InvalidConfigError("term_min must be <= term_max");

    // A = positive even numbers, explicit up to every sum the demo can form
    long bound = ymax + static_cast<long>(len) * (tmax + ymax) + 2;
    std::vector<long> evens;
    for (long v = 2; v <= bound; v += 2) evens.push_back(v);
    auto A = SetSpec::explicit_ints(evens);
    auto y_window = range_window(1, ymax);

    SplitMix64 rng(ctx.seed());
    std::uint64_t ok = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        std::vector<Element> terms;
        for (std::size_t t = 0; t < len; ++t)
            terms.push_back(Element::integer(Int(rng.next_in(tmin, tmax))));
        FiniteSequence xs(Z, terms);
        auto res = diff_ipstar_demo(A, xs, y_window);
        json row{{"case", i}, {"x", strings_of(terms)}};
        if (res.found) {
            ++ok;
            row["a"] = to_string(res.found->a);
            row["H"] = to_json(res.found->H);
            row["fs_sum"] = to_string(res.found->fs_sum);
            row["member_hi"] = to_string(res.found->member_hi);
            row["member_lo"] = to_string(res.found->member_lo);
            row["found"] = true;
            ctx.certificate(certificate_diff_demo(A, xs, *res.found));
        } else {
            row["found"] = false;
            row["grid"] = json{{"window", res.window_size}, {"masks", res.masks_scanned}};
        }
        ctx.row(row);
    }
    ctx.row(json{{"summary", "jdiff"}, {"found", ok}, {"total", count}});
}

// --- 4. cr-diff --------------------------------------------------------------

inline void run_cr_diff(ExperimentContext& ctx) {
    const GroundStructure Z = GroundStructure::integers();
    std::uint64_t samples = ctx.uint_param("samples");
    std::uint32_t r = static_cast<std::uint32_t>(ctx.uint_param("r"));
    long m = static_cast<long>(ctx.uint_param("modulus"));
    long tmax = static_cast<long>(ctx.uint_param("term_max"));
    auto A = SetSpec::ideal(SubgroupSpec(Z, Element::integer(m)));
    long bound = 2 * static_cast<long>(r) * tmax + 2;
    auto AmA = SetSpec::difference(A, bound);
    auto a_window = range_window(0, 2 * m);

    SplitMix64 rng(ctx.seed());
    std::uint64_t witnessed = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        std::vector<Element> xs, ys, gs;
        for (std::uint32_t t = 0; t < r; ++t) {
            long x = rng.next_in(1, tmax);
            long y = rng.next_in(1, tmax);
            xs.push_back(Element::integer(x));
            ys.push_back(Element::integer(y));
            gs.push_back(Element::integer(x + y));
        }
        FiniteSequence f(Z, ys), g(Z, gs), xseq(Z, xs);
        auto probe = k_cr_probe(A, 2, r, {{f, g}}, a_window);
        json row{{"sample", i}, {"x", strings_of(xs)}, {"y", strings_of(ys)}, {"r", r}};
        if (probe.all_witnessed()) {
            const JWitness& w = probe.witnesses[0];
            Element fs_sum = zero(Z);
            for (auto pos : w.H.positions) fs_sum = add(Z, fs_sum, xs[pos - 1]);
            bool in_diff = AmA.contains(fs_sum);
            if (in_diff) ++witnessed;
            row["a"] = to_string(w.a);
            row["H"] = to_json(w.H);
            row["fs_sum"] = to_string(fs_sum);
            row["fs_sum_in_difference"] = in_diff;
            ctx.certificate(certificate_j_witness(A, {f, g}, w));
        } else {
            row["witness"] = false;
            row["failed_family"] = *probe.failed_family;
        }
        ctx.row(row);
    }
    ctx.row(json{{"summary", "cr-diff"},
                 {"witnessed", witnessed},
                 {"total", samples},
                 {"difference_bound", bound}});
}

// --- 5. goswami-primes -------------------------------------------------------

inline void run_goswami_primes(ExperimentContext& ctx) {
    std::uint64_t limit = ctx.uint_param("prime_limit");
    long M = static_cast<long>(ctx.uint_param("M"));
    long kmax = static_cast<long>(ctx.uint_param("k_max"));
    auto P = SetSpec::primes(ctx.sieve(limit));
    auto D = SetSpec::difference(P, Int(M));
    auto S = SetSpec::product(D, D, Int(M));

    long minimal = 0;
    for (long k = 1; k <= kmax; ++k) {
        auto cov = dilation_coverage(Element::integer(k), S, Int(M));
        json sample = json::array();
        for (std::size_t i = 0; i < cov.missing.size() && i < 10; ++i)
            sample.push_back(cov.missing[i].get_str());
        ctx.row(json{{"k", k},
                     {"multiples_checked", cov.multiples_checked},
                     {"missing_count", cov.missing.size()},
                     {"missing_sample", sample}});
        if (cov.covered() && minimal == 0) minimal = k;
    }
    json summary{{"summary", "goswami-primes"},
                 {"prime_limit", limit},
                 {"M", M},
                 {"note", "window-derived; not asserted as a global minimum"}};
    if (minimal > 0)
        summary["minimal_covering_k"] = minimal;
    else
        summary["minimal_covering_k"] = nullptr;
    ctx.row(summary);

    // factorization witnesses for the first few multiples of the found k
    if (minimal > 0) {
        json facts = json::array();
        for (long j = 1; j <= 10 && j * minimal <= M; ++j) {
            long n = j * minimal;
            for (long d = 1; d * d <= n; ++d) {
                if (n % d != 0) continue;
                long e = n / d;
                if (D.contains_int(d) && D.contains_int(e)) {
                    facts.push_back(json{{"n", n}, {"d", d}, {"e", e}});
                    break;
                }
            }
        }
        bool ok = true;
        for (const auto& f : facts) {
            long d = f.at("d").get<long>(), e = f.at("e").get<long>(), n = f.at("n").get<long>();
            ok = ok && d * e == n && D.contains_int(d) && D.contains_int(e);
        }
        ctx.certificate(json{{"op", "dilation_coverage"},
                             {"inputs", json{{"k", minimal}, {"M", M}, {"set", S.describe()}}},
                             {"witness", json{{"factorizations", facts}}},
                             {"recheck", ok}});
    }
}

// --- 6. goswami-generic ------------------------------------------------------

inline void run_goswami_generic(ExperimentContext& ctx) {
    const GroundStructure Z = GroundStructure::integers();
    auto A = set_spec_from_json(ctx.param("A"), ctx);
    auto B = set_spec_from_json(ctx.param("B"), ctx);
    std::vector<Element> bterms;
    for (const auto& v : ctx.param("b")) bterms.push_back(Element::integer(v.get<long>()));
    FiniteSequence b(Z, bterms);
    long xr = static_cast<long>(ctx.uint_param("x_radius"));
    long rr = static_cast<long>(ctx.uint_param("r_radius"));

    auto rep = goswami_product_check(A, B, b, canonical_int_window(xr, false),
                                     range_window(-rr, rr));
    ctx.row(json{{"D", strings_of(rep.d_elements)},
                 {"D_size", rep.d_elements.size()},
                 {"b", strings_of(bterms)}});
    for (const auto& cert : rep.certs) {
        ctx.row(json{{"x", to_string(cert.x)},
                     {"H", to_json(cert.H)},
                     {"xb_sum", to_string(cert.xb_sum)},
                     {"factorizations", cert.facts.size()}});
        ctx.certificate(certificate_goswami(A, B, b, cert));
    }
    if (!rep.no_h_found.empty())
        ctx.row(json{{"no_H_found", strings_of(rep.no_h_found)},
                     {"note", "evidence against B meeting every subset sum on this window"}});
}

// --- 7. freesemigroup --------------------------------------------------------

inline void run_freesemigroup(ExperimentContext& ctx) {
    std::size_t L = ctx.uint_param("L");
    auto rep = freesemigroup_counterexample(L);
    json sample = json::array();
    for (const Word& w : rep.inverse_sample) sample.push_back(w);
    ctx.row(json{{"L", rep.max_len},
                 {"bn_lengths_tested", rep.bn_lengths_tested},
                 {"intersection_empty", rep.intersection_empty},
                 {"pairs_checked", rep.pairs_checked},
                 {"inverse_sample", sample},
                 {"set", "A = Fa, words of length >= 2 ending in a"}});
    auto families = freesemigroup_demo_families();
    for (std::size_t i = 0; i < rep.j_witnesses.size(); ++i)
        ctx.certificate(certificate_ncj_witness(families[i], rep.j_witnesses[i]));
}

// --- 8. zx-partition ----------------------------------------------------------

inline void run_zx_partition(ExperimentContext& ctx) {
    const GroundStructure ZX = GroundStructure::poly_over_z();
    Element x = Element::poly({Int(0), Int(1)});
    SubgroupSpec hx(ZX, x);
    std::size_t n = ctx.uint_param("n");

    // cell 1, xZ[x]: a verified avoiding sequence (not an IP*-set echo)
    AvoidCertificate avoid = avoid_sequence(hx, n, ctx.guards().enum_budget);
    ctx.row(json{{"cell", "xZ[x]"},
                 {"diagnostic", "avoiding-sequence"},
                 {"n", n},
                 {"sequence", strings_of(avoid.seq.terms)},
                 {"sums_checked", avoid.sums_checked}});
    ctx.certificate(certificate_avoid(hx, avoid));

    // cell 2, complement: multiplicative thickness fails on every window
    std::size_t wsize = ctx.uint_param("thick_window");
    if (wsize < 2) throw InvalidConfigError("thick_window must be >= 2");
    for (std::size_t size : {wsize / 2, wsize}) {
        std::vector<Element> scan = enumerate(ZX, size);
        std::vector<Element> universe = scan;
        for (const Element& p : scan) universe.push_back(mul(ZX, x, p));
        auto comp = SetSpec::complement(SetSpec::ideal(hx), universe);
        auto thick = mult_thick_check(comp, {one(ZX), x}, scan);
        ctx.row(json{{"cell", "complement"},
                     {"diagnostic", "mult-thick"},
                     {"F", json::array({"1", "x"})},
                     {"window_size", size},
                     {"witness", thick.witness ? json(to_string(*thick.witness)) : json(nullptr)},
                     {"scanned", thick.scanned},
                     {"analytic", true},
                     {"analytic_note",
                      "x*a lies in xZ[x] for every a, so {1*a, x*a} never stays in the complement"}});
    }

    // dilation densities along the tower {p * x^i}: the ideal cell stays
    // near 1, the complement cell decays toward 0
    std::size_t dn = ctx.uint_param("dilation_n");
    if (dn < 2) throw InvalidConfigError("dilation_n must be >= 2");
    std::vector<Element> seed;
    for (long c = 1; seed.size() < 8; ++c) {
        seed.push_back(Element::poly({Int(c)}));
        seed.push_back(Element::poly({Int(-c)}));
    }
    auto fam = FolnerFamily::dilation(ZX, x, seed);
    auto ideal_probe = dilation_invariance_probe(SetSpec::ideal(hx), x, fam, dn);
    ctx.row(json{{"cell", "xZ[x]"},
                 {"diagnostic", "dilation-density"},
                 {"base", to_json(ideal_probe.base)},
                 {"dilated", to_json(ideal_probe.dilated)},
                 {"abs_diff", ideal_probe.abs_diff.get_str()},
                 {"caveat", kCentralCaveat}});

    std::vector<Element> tower = fam.window(dn);
    std::vector<Element> universe = tower;
    for (const Element& p : tower) universe.push_back(mul(ZX, x, p));
    auto comp_cell = SetSpec::complement(SetSpec::ideal(hx), universe);
    auto comp_probe = dilation_invariance_probe(comp_cell, x, fam, dn, dn / 2);
    ctx.row(json{{"cell", "complement"},
                 {"diagnostic", "dilation-density"},
                 {"base", to_json(comp_probe.base)},
                 {"dilated", to_json(comp_probe.dilated)},
                 {"abs_diff", comp_probe.abs_diff.get_str()},
                 {"caveat", kCentralCaveat}});
}

// --- 9. delta-r-primes ---------------------------------------------------------

inline void run_delta_r_primes(ExperimentContext& ctx) {
    std::uint64_t limit = ctx.uint_param("prime_limit");
    std::size_t r = ctx.uint_param("r");
    long B = static_cast<long>(ctx.uint_param("B"));
    if (r < 2 || static_cast<long>(r) > B)
        throw InvalidConfigError("need 2 <= r <= B");
    auto P = SetSpec::primes(ctx.sieve(limit));
    auto D = SetSpec::difference(P, Int(B));

    // all r-subsets of [1..B] in lexicographic order
    std::vector<long> pick(r);
    for (std::size_t i = 0; i < r; ++i) pick[i] = static_cast<long>(i) + 1;
    std::uint64_t scanned = 0;
    json counterexample = nullptr;
    for (;;) {
        ++scanned;
        bool all_missing = true;
        for (std::size_t i = 0; i < r && all_missing; ++i)
            for (std::size_t j = i + 1; j < r && all_missing; ++j)
                if (D.contains_int(pick[j] - pick[i])) all_missing = false;
        if (all_missing) {
            json s = json::array();
            for (long v : pick) s.push_back(v);
            counterexample = json{{"S", s}};
            break;
        }
        // next combination
        std::size_t i = r;
        while (i > 0) {
            --i;
            if (pick[i] < B - static_cast<long>(r - 1 - i)) {
                ++pick[i];
                for (std::size_t t = i + 1; t < r; ++t) pick[t] = pick[t - 1] + 1;
                break;
            }
            if (i == 0) {
                i = SIZE_MAX;
                break;
            }
        }
        if (i == SIZE_MAX) break;
    }
    json row{{"r", r},
             {"B", B},
             {"prime_limit", limit},
             {"subsets_scanned", scanned},
             {"outcome", counterexample.is_null() ? "survived" : "window-counterexample"}};
    if (!counterexample.is_null()) {
        row["counterexample"] = counterexample;
        row["note"] = "misses P-P computed below prime_limit; a larger sieve could still hit";
    }
    ctx.row(row);
}

}  // namespace experiments

inline const std::map<std::string, ExperimentDef>& experiment_registry() {
    using P = ParamSpec;
    using T = ParamSpec::Type;
    static const std::map<std::string, ExperimentDef> reg = [] {
        std::map<std::string, ExperimentDef> m;
        auto put = [&](ExperimentDef d) { m.emplace(d.name, std::move(d)); };
        put({"ipstar-subgroup",
             "window-certify kZ at r = k+1, falsify at r = k-1",
             "A subgroup of index k meets the finite sums of any k+1 integers: some "
             "contiguous block of a length-(k+1) sequence sums into kZ by the pigeonhole "
             "principle on cosets. At r = k-1 the all-ones sequence avoids kZ, so the "
             "certification is tight on the window.",
             {P{"k", T::UInt, 3, "subgroup generator k (ideal kZ)"},
              P{"window_radius", T::UInt, 10, "certification window [-R..R] without 0"},
              P{"scan", T::Bool, false, "also scan r = 1..k+1 for the minimal certified r"}},
             experiments::run_ipstar_subgroup});
        put({"avoid-zx",
             "greedy avoiding sequences for infinite-index ideals of Z[x]",
             "An infinite-index subgroup is missed entirely by the finite sums of a "
             "greedily built sequence: each term dodges every coset translate of the "
             "current sum set. The engine re-checks all 2^n - 1 sums exhaustively.",
             {P{"n", T::UInt, 12, "sequence length"},
              P{"generators", T::Array, json::array({json::array({0, 1}), json::array({2})}),
                "ideal generators as coefficient arrays, lowest degree first"}},
             experiments::run_avoid_zx});
        put({"jdiff",
             "difference-set witnesses from the two-sequence shift trick",
             "If shifted partial sums of f(n) = y_n and g(n) = x_n + y_n can be landed "
             "in A simultaneously, the landed pair differs by sum of x_n over H, which "
             "therefore lies in A - A. Random x sequences against A = 2N.",
             {P{"count", T::UInt, 100, "number of sampled sequences"},
              P{"length", T::UInt, 8, "sequence length"},
              P{"term_min", T::UInt, 1, "smallest term"},
              P{"term_max", T::UInt, 50, "largest term"},
              P{"y_max", T::UInt, 50, "companion window [1..y_max]"}},
             experiments::run_jdiff});
        put({"cr-diff",
             "bounded-H witnesses: A - A meets every length-r sum set",
             "With H confined to {1..r}, a two-sequence witness puts sum of x_n over H "
             "inside (mZ) - (mZ): the bounded-window analogue of the difference set "
             "meeting the finite sums of every length-r sequence.",
             {P{"samples", T::UInt, 50, "number of sampled families"},
              P{"r", T::UInt, 4, "H is confined to subsets of {1..r}"},
              P{"modulus", T::UInt, 2, "A = (modulus)Z"},
              P{"term_max", T::UInt, 20, "terms sampled from [1..term_max]"}},
             experiments::run_cr_diff});
        put({"goswami-primes",
             "divisor-scan coverage of k-multiples by (P-P)(P-P)",
             "Scans k = 1..k_max for a k whose multiples up to M all factor as d * e "
             "with both d and e differences of primes below the sieve limit. The found "
             "k is window-derived evidence, never asserted as minimal.",
             {P{"prime_limit", T::UInt, 1000000, "sieve limit"},
              P{"M", T::UInt, 10000, "check multiples up to M"},
              P{"k_max", T::UInt, 100, "largest k scanned"}},
             experiments::run_goswami_primes});
        put({"goswami-generic",
             "D-set and factorization pipeline over configured sets",
             "D collects window elements d in A with d/y in A for every finite sum y "
             "of b. For each x, some subset of the x*b_i sums into B, and every r in D "
             "factors r*x through (x * sum b_i) * a' with a' in A, putting r*x in AB.",
             {P{"A", T::Object, json{{"kind", "ideal"}, {"generator", 1}}, "set descriptor"},
              P{"B", T::Object, json{{"kind", "ideal"}, {"generator", 2}}, "set descriptor"},
              P{"b", T::Array, json::array({1, 1}), "sequence b as integers"},
              P{"x_radius", T::UInt, 5, "x window: [-R..R] without 0"},
              P{"r_radius", T::UInt, 12, "r window: [-R..R]"}},
             experiments::run_goswami_generic});
        put({"freesemigroup",
             "A = Fa: a J-set whose quotient set misses {b^n}",
             "In the free semigroup on {a, b}, every interleaved product ending in the "
             "letter a lands in A = Fa, so A carries J-witnesses for any family; yet "
             "u*w ends in a for no w = b^n, so A^{-1}A misses the set {b^n} entirely.",
             {P{"L", T::UInt, 12, "exhaustive check up to |u*w| <= L"}},
             experiments::run_freesemigroup});
        put({"zx-partition",
             "two-sided diagnostic for the partition Z[x] = xZ[x] u complement",
             "The ideal cell is additively small: a greedy sequence's finite sums miss "
             "it entirely. The complement cell is multiplicatively thin: {a, x*a} never "
             "stays inside it, and the ideal's dilation density stays near 1. Neither "
             "cell passes both finite-scale necessary conditions.",
             {P{"n", T::UInt, 8, "avoiding-sequence length"},
              P{"thick_window", T::UInt, 24, "scan window size for multiplicative thickness"},
              P{"dilation_n", T::UInt, 10, "tower height for the dilation density probe"}},
             experiments::run_zx_partition});
        put({"delta-r-primes",
             "exhaustive window scan: r-subsets whose differences all miss P-P",
             "Scans every r-subset S of [1..B] for one whose pairwise differences all "
             "miss P-P (computed below the sieve limit). Survival is finite-scale "
             "support for P-P meeting every such difference set; a counterexample is "
             "only a window counterexample.",
             {P{"r", T::UInt, 3, "subset size"},
              P{"B", T::UInt, 60, "subsets drawn from [1..B]"},
              P{"prime_limit", T::UInt, 100000, "sieve limit for P-P membership"}},
             experiments::run_delta_r_primes});
        return m;
    }();
    return reg;
}

/// Validates the config against the registry, runs the experiment, assembles
/// the report, and writes it atomically when an output path is set.
inline Report run_experiment(ExperimentConfig config) {
    auto it = experiment_registry().find(config.experiment);
    if (it == experiment_registry().end())
        throw UnknownExperimentError("unknown experiment \"" + config.experiment + "\"");
    validate_params(it->second.params, config.params);
    ExperimentContext ctx(std::move(config));
    auto t0 = std::chrono::steady_clock::now();
    it->second.run(ctx);
    double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    Report rep = assemble_report(ctx, wall);
    if (!ctx.config().output.empty())
        write_report(rep, ctx.config().output, ctx.config().format);
    return rep;
}

}  // namespace ipstar
