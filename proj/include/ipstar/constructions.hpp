#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ipstar/errors.hpp"
#include "ipstar/largeness.hpp"
#include "ipstar/structures.hpp"

namespace ipstar {

// ---------------------------------------------------------------------------
// Pigeonhole extraction: an index-r subgroup meets the sums of any r+1 terms
// ---------------------------------------------------------------------------

/// Contiguous block of sequence positions whose sum lands in the target
/// subgroup.
struct PigeonholeBlock {
    std::uint32_t start = 0;  // 1-based, inclusive
    std::uint32_t end = 0;
    Element sum;
};

/// Given [G:H] = r and r+1 terms, produces a contiguous block with sum in H:
/// either some prefix sum already lies in H (block 1..k), or two prefix sums
/// share a coset and their difference telescopes to a block sum in H.
inline PigeonholeBlock pigeonhole_extract(const SubgroupSpec& h, const FiniteSequence& seq) {
    SubgroupIndex idx = h.index();
    if (!idx.finite)
        throw InfiniteIndexError("pigeonhole_extract needs a finite-index subgroup");
    if (!idx.value.fits_ulong_p())
        throw GuardExceededError("subgroup index too large: " + idx.value.get_str());
    std::size_t r = idx.value.get_ui();
    if (seq.size() < r + 1)
        throw LengthError("pigeonhole_extract needs at least index+1 = " + std::to_string(r + 1) +
                          " terms, got " + std::to_string(seq.size()));
    if (!(seq.s == h.s)) throw KindMismatchError("sequence and subgroup structures differ");

    std::vector<Element> prefix;  // p_1 .. p_{r+1}
    Element acc = zero(seq.s);
    for (std::size_t i = 0; i < r + 1; ++i) {
        acc = add(seq.s, acc, seq.terms[i]);
        if (h.contains(acc))
            return {1, static_cast<std::uint32_t>(i + 1), acc};
        prefix.push_back(acc);
    }
    std::vector<CosetLabel> labels;
    labels.reserve(prefix.size());
    for (const Element& p : prefix) labels.push_back(h.coset_label(p));
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            if (h.label_equal(labels[i], labels[j])) {
                Element blocksum = sub(seq.s, prefix[j], prefix[i]);
                return {static_cast<std::uint32_t>(i + 2), static_cast<std::uint32_t>(j + 1),
                        blocksum};
            }
    // r+1 prefixes over r cosets always collide
    throw Error("pigeonhole_extract: no collision found; subgroup index is wrong");
}

inline bool recheck_pigeonhole(const SubgroupSpec& h, const FiniteSequence& seq,
                               const PigeonholeBlock& blk) {
    if (blk.start < 1 || blk.end < blk.start || blk.end > seq.size()) return false;
    Element acc = zero(seq.s);
    for (std::uint32_t i = blk.start; i <= blk.end; ++i)
        acc = add(seq.s, acc, seq.terms[i - 1]);
    return acc == blk.sum && h.contains(blk.sum);
}

// ---------------------------------------------------------------------------
// Greedy avoiding sequence: infinite-index subgroups are not IP*
// ---------------------------------------------------------------------------

struct AvoidCertificate {
    FiniteSequence seq;
    std::uint64_t sums_checked = 0;  // exhaustive post-check, 2^n - 1 sums
};

namespace detail {

/// Streams all 2^n - 1 nonempty subset sums in Gray-code order with O(1)
/// group operations per step; calls visit(sum) for each.
template <typename Visit>
void for_each_subset_sum(const FiniteSequence& seq, Visit&& visit) {
    const std::size_t n = seq.size();
    Element sum = zero(seq.s);
    std::uint64_t gray = 0;
    for (std::uint64_t i = 1; i < (std::uint64_t(1) << n); ++i) {
        std::uint64_t next = i ^ (i >> 1);
        std::uint64_t flip = next ^ gray;
        std::size_t bit = static_cast<std::size_t>(__builtin_ctzll(flip));
        if (next & flip)
            sum = add(seq.s, sum, seq.terms[bit]);
        else
            sum = sub(seq.s, sum, seq.terms[bit]);
        gray = next;
        visit(sum);
    }
}

}  // namespace detail

namespace detail {

/// Residue view of the ideal (m * x^k) Z[x]: membership of a polynomial
/// depends only on its first k coefficients exactly and the rest mod m.
struct MonomialIdealView {
    std::size_t k = 0;
    Int m = 1;

    static std::optional<MonomialIdealView> of(const Poly& gen) {
        if (gen.empty()) return std::nullopt;
        for (std::size_t i = 0; i + 1 < gen.size(); ++i)
            if (gen[i] != 0) return std::nullopt;
        return MonomialIdealView{gen.size() - 1, abs(gen.back())};
    }

    bool relevant(std::size_t j) const { return j < k || m > 1; }

    Int token(std::size_t j, const Int& v) const {
        if (j < k) return v;
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
        return r;
    }

    Int coeff(const Poly& p, std::size_t j) const { return j < p.size() ? p[j] : Int(0); }

    /// c + b lands in the ideal iff they match on every relevant position.
    bool matches_beyond(const Poly& b, std::size_t from) const {
        std::size_t top = std::max(from, b.size());
        for (std::size_t j = from; j < top; ++j)
            if (relevant(j) && token(j, coeff(b, j)) != 0) return false;
        return true;
    }
};

inline Int rank_to_coeff(long r) {
    if (r == 0) return 0;
    Int v((r + 1) / 2);
    return (r % 2 == 1) ? v : -v;
}

/// Least coefficient vector (rank-lex, matching the canonical enumeration
/// order inside one (level, degree) block) avoiding every blocked residue.
/// Descends coefficient by coefficient; once no blocked residue matches the
/// prefix, the minimal completion is written down directly. Ranks sharing a
/// residue token produce identical subtrees, so failures are memoized per
/// (token, maxed) class; the search touches O(|blocked| * degree) nodes
/// instead of the whole block.
inline std::optional<Poly> least_in_block(const MonomialIdealView& view,
                                          const std::vector<Poly>& blocked, long level, long deg,
                                          bool fresh_required) {
    Poly c(static_cast<std::size_t>(deg) + 1, Int(0));
    auto rec = [&](auto&& self, std::size_t j, std::vector<const Poly*> compat,
                   bool maxed) -> std::optional<Poly> {
        if (j == c.size()) {
            if (fresh_required && !maxed) return std::nullopt;
            for (const Poly* b : compat)
                if (view.matches_beyond(*b, c.size())) return std::nullopt;  // blocked residue
            return c;
        }
        long lo = (j + 1 == c.size()) ? 1 : 0;
        std::vector<std::pair<Int, bool>> failed;  // (token, maxed) classes seen failing
        for (long r = lo; r <= 2 * level; ++r) {
            c[j] = rank_to_coeff(r);
            bool maxed2 = maxed || abs(c[j]) == level;
            Int tok = view.token(j, c[j]);
            bool skip = false;
            for (const auto& [t, mx] : failed)
                if (mx == maxed2 && t == tok) {
                    skip = true;
                    break;
                }
            if (skip) continue;
            std::vector<const Poly*> compat2;
            for (const Poly* b : compat)
                if (!view.relevant(j) || tok == view.token(j, view.coeff(*b, j)))
                    compat2.push_back(b);
            if (compat2.empty()) {
                // nothing blocked matches this prefix: minimal completion
                for (std::size_t t = j + 1; t < c.size(); ++t) c[t] = 0;
                if (j + 1 < c.size()) {
                    c.back() = (fresh_required && !maxed2) ? Int(level) : Int(1);
                    return c;
                }
                if (fresh_required && !maxed2) continue;  // needs some |coeff| = level
                return c;
            }
            if (auto got = self(self, j + 1, std::move(compat2), maxed2)) return got;
            failed.emplace_back(std::move(tok), maxed2);
        }
        c[j] = 0;
        return std::nullopt;
    };
    std::vector<const Poly*> all;
    all.reserve(blocked.size());
    for (const Poly& b : blocked) all.push_back(&b);
    return rec(rec, 0, std::move(all), false);
}

/// Least nonzero polynomial in canonical order whose residue (under the
/// monomial ideal view) differs from every blocked one. Walks the canonical
/// (level, degree) blocks in enumeration order.
inline std::optional<Element> least_unblocked_poly(const MonomialIdealView& view,
                                                   const std::vector<Poly>& blocked,
                                                   long max_level) {
    for (long level = 1; level <= max_level; ++level)
        for (long deg = 0; deg < level; ++deg)
            if (auto got = least_in_block(view, blocked, level, deg, deg + 1 < level))
                return Element::poly(std::move(*got));
    return std::nullopt;
}

}  // namespace detail

/// Greedy construction of x_1..x_n with FS({x_i}) disjoint from h: each x_m
/// is the least element in canonical order (skipping 0) with y + x_m outside
/// h for every y in FS(x_1..x_{m-1}) and y = 0. The displayed coset
/// condition is additive: x_m avoids every translate -y + h. The result is
/// verified exhaustively over all 2^n - 1 sums before returning.
///
/// For ideals generated by m*x^k the least candidate is located by an
/// order-exact block search (the linear scan would wade through ~(2L)^deg
/// blocked low-degree candidates); other generators use the budgeted scan.
inline AvoidCertificate avoid_sequence(const SubgroupSpec& h, std::size_t n,
                                       std::uint64_t enum_budget = 100000) {
    if (n < 1 || n > 20) throw LengthError("avoid_sequence supports 1 <= n <= 20");
    if (!h.s.additive()) throw KindMismatchError("avoid_sequence needs an additive structure");
    if (h.index().finite)
        throw FiniteIndexError("avoid_sequence needs an infinite-index subgroup; index is finite(" +
                               h.index().value.get_str() + ")");
    const GroundStructure& s = h.s;
    const Element z = zero(s);

    std::optional<detail::MonomialIdealView> view;
    if (s.kind == StructureKind::Polynomials)
        view = detail::MonomialIdealView::of(h.generator.as_poly());

    std::vector<Element> terms;
    std::vector<Element> fs;  // FS of terms so far
    for (std::size_t m = 0; m < n; ++m) {
        std::optional<Element> chosen;
        if (view) {
            std::vector<Poly> blocked;  // residues c must avoid: -y for y in FS u {0}
            blocked.push_back({});
            for (const Element& y : fs) blocked.push_back(neg(s, y).as_poly());
            chosen = detail::least_unblocked_poly(*view, blocked, 64);
        } else {
            ElementEnumerator en(s);
            for (std::uint64_t tried = 0; tried < enum_budget; ++tried) {
                Element cand = en.next();
                if (cand == z) continue;
                bool ok = !h.contains(cand);
                if (ok)
                    for (const Element& y : fs)
                        if (h.contains(add(s, y, cand))) {
                            ok = false;
                            break;
                        }
                if (ok) {
                    chosen = std::move(cand);
                    break;
                }
            }
        }
        if (!chosen)
            throw SearchExhaustedError("avoid_sequence: no candidate for term " +
                                       std::to_string(m + 1) + " within budget " +
                                       std::to_string(enum_budget));
        std::vector<Element> grown;
        grown.reserve(fs.size() + 1);
        grown.push_back(*chosen);
        for (const Element& y : fs) grown.push_back(add(s, y, *chosen));
        terms.push_back(std::move(*chosen));
        fs.insert(fs.end(), grown.begin(), grown.end());
    }
    AvoidCertificate cert{FiniteSequence(s, std::move(terms)), 0};
    bool clean = true;
    detail::for_each_subset_sum(cert.seq, [&](const Element& sum) {
        ++cert.sums_checked;
        if (h.contains(sum)) clean = false;
    });
    if (!clean) throw Error("avoid_sequence: exhaustive post-check failed; greedy bug");
    return cert;
}

inline bool recheck_avoid(const SubgroupSpec& h, const FiniteSequence& seq) {
    bool clean = true;
    detail::for_each_subset_sum(seq, [&](const Element& sum) {
        if (h.contains(sum)) clean = false;
    });
    return clean;
}

// ---------------------------------------------------------------------------
// J-set witnesses
// ---------------------------------------------------------------------------

struct JWitness {
    Element a;
    IndexSet H;
    std::vector<Element> images;  // a + sum_{n in H} f(n), one per sequence
};

struct JSearchResult {
    std::optional<JWitness> witness;
    std::uint64_t masks_scanned = 0;
    std::size_t window_size = 0;
    std::size_t seq_length = 0;

    bool exhausted() const { return !witness.has_value(); }
};

inline constexpr std::size_t kJLengthGuard = 20;

/// Scans index sets H in binary-counter order and, inside each H, shift
/// candidates a in window order; returns the first (H, a) with
/// a + sum_{n in H} f(n) in A for every f. Exhaustion of the finite grid is
/// reported with its dimensions and is never a disproof that A is a J-set.
inline JSearchResult j_witness_search(const SetSpec& A, const std::vector<FiniteSequence>& F,
                                      const std::vector<Element>& a_window) {
    if (F.empty()) throw LengthError("j_witness_search needs at least one sequence");
    if (a_window.empty()) throw LengthError("j_witness_search needs a nonempty shift window");
    const GroundStructure& s = A.structure();
    const std::size_t len = F.front().size();
    if (len > kJLengthGuard)
        throw GuardExceededError("j_witness_search sequence length " + std::to_string(len) +
                                 " exceeds guard " + std::to_string(kJLengthGuard));
    for (const FiniteSequence& f : F) {
        if (!(f.s == s)) throw KindMismatchError("sequence structure differs from the set's");
        if (f.size() != len) throw LengthError("j_witness_search sequences must share a length");
    }
    for (const Element& a : a_window) require_in(s, a, "j_witness_search window");

    // subset-sum tables, sums[f][mask] = sum_{n in mask} f(n)
    std::vector<std::vector<Element>> sums(F.size());
    const std::uint64_t top = std::uint64_t(1) << len;
    for (std::size_t fi = 0; fi < F.size(); ++fi) {
        sums[fi].assign(top, zero(s));
        for (std::uint64_t mask = 1; mask < top; ++mask) {
            std::uint64_t low = mask & (~mask + 1);
            std::size_t idx = static_cast<std::size_t>(__builtin_ctzll(low));
            sums[fi][mask] = add(s, sums[fi][mask ^ low], F[fi].terms[idx]);
        }
    }

    JSearchResult res;
    res.window_size = a_window.size();
    res.seq_length = len;
    for (std::uint64_t mask = 1; mask < top; ++mask) {
        ++res.masks_scanned;
        for (const Element& a : a_window) {
            bool all = true;
            std::vector<Element> images;
            images.reserve(F.size());
            for (std::size_t fi = 0; fi < F.size(); ++fi) {
                Element img = add(s, a, sums[fi][mask]);
                if (!A.contains(img)) {
                    all = false;
                    break;
                }
                images.push_back(std::move(img));
            }
            if (all) {
                res.witness = JWitness{a, IndexSet::from_mask(mask), std::move(images)};
                return res;
            }
        }
    }
    return res;
}

inline bool recheck_j_witness(const SetSpec& A, const std::vector<FiniteSequence>& F,
                              const JWitness& w) {
    if (w.images.size() != F.size()) return false;
    const GroundStructure& s = A.structure();
    for (std::size_t fi = 0; fi < F.size(); ++fi) {
        Element sum = zero(s);
        for (std::uint32_t pos : w.H.positions) {
            if (pos > F[fi].size()) return false;
            sum = add(s, sum, F[fi].terms[pos - 1]);
        }
        Element img = add(s, w.a, sum);
        if (!(img == w.images[fi])) return false;
        if (!A.contains(img)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// k-CR probing: J-witnesses with H confined to {1..r}
// ---------------------------------------------------------------------------

struct KCrProbeResult {
    std::vector<JWitness> witnesses;          // one per family, until a failure
    std::optional<std::size_t> failed_family; // first family with no witness in grid
    std::size_t window_size = 0;
    std::uint32_t r = 0;

    bool all_witnessed() const { return !failed_family.has_value(); }
};

/// For each sampled k-tuple of sequences runs the J-witness search with H
/// restricted to subsets of {1..r}. A family without a witness in the grid
/// is evidence against A being k-CR with this r, never a proof.
inline KCrProbeResult k_cr_probe(const SetSpec& A, std::size_t k, std::uint32_t r,
                                 const std::vector<std::vector<FiniteSequence>>& families,
                                 const std::vector<Element>& a_window) {
    if (k < 1) throw LengthError("k_cr_probe needs k >= 1");
    if (r < 1) throw LengthError("k_cr_probe needs r >= 1");
    KCrProbeResult out;
    out.window_size = a_window.size();
    out.r = r;
    for (std::size_t i = 0; i < families.size(); ++i) {
        const auto& fam = families[i];
        if (fam.size() > k)
            throw LengthError("family " + std::to_string(i) + " has more than k sequences");
        for (const FiniteSequence& f : fam)
            if (f.size() != r)
                throw LengthError("k_cr_probe sequences must have exactly r terms");
        JSearchResult res = j_witness_search(A, fam, a_window);
        if (res.exhausted()) {
            out.failed_family = i;
            return out;
        }
        out.witnesses.push_back(std::move(*res.witness));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Difference-set IP* demo (J-set technique)
// ---------------------------------------------------------------------------

struct DiffDemoWitness {
    Element a;
    Element y;          // the constant companion term
    IndexSet H;
    Element fs_sum;     // sum_{n in H} x_n, a member of A - A
    Element member_hi;  // a + sum_{n in H} (x_n + y_n), in A
    Element member_lo;  // a + sum_{n in H} y_n, in A
};

struct DiffDemoResult {
    std::optional<DiffDemoWitness> found;
    std::uint64_t masks_scanned = 0;
    std::size_t window_size = 0;
};

/// Realizes the two-sequence trick: with f(n) = y_n and g(n) = x_n + y_n, a
/// J-witness (a, H) puts both shifted sums in A, so their difference
/// sum_{n in H} x_n lies in A - A. Both members are returned for re-checking.
inline DiffDemoResult diff_ipstar_demo(const SetSpec& A, const FiniteSequence& x_seq,
                                       const std::vector<Element>& y_window) {
    if (x_seq.size() > 12) throw LengthError("diff_ipstar_demo supports length <= 12");
    if (y_window.empty()) throw LengthError("diff_ipstar_demo needs a nonempty y window");
    const GroundStructure& s = A.structure();
    if (!(x_seq.s == s)) throw KindMismatchError("sequence structure differs from the set's");

    // deterministic choice: the least y in canonical order, used for every n
    Element y = y_window.front();
    for (const Element& cand : y_window)
        if (canonical_less(s, cand, y)) y = cand;

    std::vector<Element> f_terms(x_seq.size(), y);
    std::vector<Element> g_terms;
    g_terms.reserve(x_seq.size());
    for (const Element& x : x_seq.terms) g_terms.push_back(add(s, x, y));
    std::vector<FiniteSequence> family{FiniteSequence(s, std::move(f_terms)),
                                       FiniteSequence(s, std::move(g_terms))};

    // shift window: 0 first, then the y window in its given order
    std::vector<Element> a_window{zero(s)};
    for (const Element& e : y_window)
        if (!(e == a_window.front())) a_window.push_back(e);

    JSearchResult res = j_witness_search(A, family, a_window);
    DiffDemoResult out;
    out.masks_scanned = res.masks_scanned;
    out.window_size = res.window_size;
    if (res.exhausted()) return out;

    const JWitness& w = *res.witness;
    Element lo = w.images[0];
    Element hi = w.images[1];
    Element fs_sum = sub(s, hi, lo);
    Element direct = zero(s);
    for (std::uint32_t pos : w.H.positions) direct = add(s, direct, x_seq.terms[pos - 1]);
    if (!(direct == fs_sum))
        throw Error("diff_ipstar_demo: telescoping identity broke; internal bug");
    out.found = DiffDemoWitness{w.a, y, w.H, std::move(fs_sum), std::move(hi), std::move(lo)};
    return out;
}

inline bool recheck_diff_demo(const SetSpec& A, const FiniteSequence& x_seq,
                              const DiffDemoWitness& w) {
    const GroundStructure& s = A.structure();
    Element direct = zero(s);
    for (std::uint32_t pos : w.H.positions) {
        if (pos > x_seq.size()) return false;
        direct = add(s, direct, x_seq.terms[pos - 1]);
    }
    return direct == w.fs_sum && sub(s, w.member_hi, w.member_lo) == w.fs_sum &&
           A.contains(w.member_hi) && A.contains(w.member_lo);
}

// ---------------------------------------------------------------------------
// D-sets and the product-coverage pipeline
// ---------------------------------------------------------------------------

struct GoswamiD {
    SetSpec D;
    std::vector<Element> elements;   // D listed on the window, in window order
    std::vector<Element> fs_b;       // FS(b), deduplicated
};

namespace detail {

/// d = y * q with q in the structure and A.contains(q); exact divisibility.
inline std::optional<Element> divide_in(const GroundStructure& s, const Element& d,
                                        const Element& y) {
    switch (s.kind) {
        case StructureKind::Integers: {
            if (y.as_int() == 0) return std::nullopt;
            if (!mpz_divisible_p(d.as_int().get_mpz_t(), y.as_int().get_mpz_t()))
                return std::nullopt;
            return Element::integer(d.as_int() / y.as_int());
        }
        case StructureKind::Polynomials: {
            auto q = poly_divide_exact(d.as_poly(), y.as_poly());
            if (!q) return std::nullopt;
            return Element::poly(std::move(*q));
        }
        default: throw KindMismatchError("exact division supported over Z and Z[x]");
    }
}

}  // namespace detail

/// D = A intersect (the intersection over y in FS(b) of yA), carved from a
/// window: d qualifies iff d is in A and, for every y, d = y * a' for some
/// a' in A. Requires 0 outside FS(b).
inline GoswamiD goswami_D(const SetSpec& A, const FiniteSequence& b,
                          const std::vector<Element>& window) {
    const GroundStructure& s = A.structure();
    if (!(b.s == s)) throw KindMismatchError("goswami_D: sequence structure differs");
    std::vector<Element> fsb;
    for (Element& v : fs_values(b)) {
        if (v == zero(s))
            throw ZeroInFsError("goswami_D requires 0 outside FS(b); offending sequence sums to 0");
        if (std::find(fsb.begin(), fsb.end(), v) == fsb.end()) fsb.push_back(std::move(v));
    }
    std::vector<Element> elems;
    for (const Element& d : window) {
        if (!A.contains(d)) continue;
        bool ok = true;
        for (const Element& y : fsb) {
            auto q = detail::divide_in(s, d, y);
            if (!q || !A.contains(*q)) {
                ok = false;
                break;
            }
        }
        if (ok) elems.push_back(d);
    }
    return GoswamiD{SetSpec::explicit_set(s, elems), std::move(elems), std::move(fsb)};
}

struct GoswamiFactorization {
    Element r;        // element of D
    Element a_prime;  // r = y_H * a_prime with a_prime in A
};

struct GoswamiXCert {
    Element x;
    IndexSet H;          // subset of {1..s} with sum_{i in H} x*b_i in B
    Element xb_sum;      // that sum, a member of B
    Element y_sum;       // sum_{i in H} b_i
    std::vector<GoswamiFactorization> facts;  // r*x = (x*y_sum)*a_prime per r
};

struct GoswamiProductReport {
    std::vector<GoswamiXCert> certs;
    std::vector<Element> no_h_found;  // x with no subset sum in B: falsification evidence
    std::vector<Element> d_elements;
};

/// The product-coverage pipeline: for each window x, find H(x) with
/// sum_{i in H} x*b_i in B, then factor r*x through (x * sum b_i) * a' with
/// a' in A for every r in D. Emits one certificate per x; an x with no
/// usable H is reported as evidence against B's IP_s*-ness on this window.
inline GoswamiProductReport goswami_product_check(const SetSpec& A, const SetSpec& B,
                                                  const FiniteSequence& b,
                                                  const std::vector<Element>& x_window,
                                                  const std::vector<Element>& r_window) {
    const GroundStructure& s = A.structure();
    if (!(B.structure() == s) || !(b.s == s))
        throw KindMismatchError("goswami_product_check operands mix structures");
    const std::size_t sb = b.size();
    if (sb > kJLengthGuard) throw GuardExceededError("goswami_product_check: b too long");

    GoswamiProductReport rep;
    GoswamiD D = goswami_D(A, b, r_window);
    rep.d_elements = D.elements;

    for (const Element& x : x_window) {
        if (s.additive() && x == zero(s)) continue;
        // subset sums of x*b_i, binary-counter order; first hit in B wins
        const std::uint64_t top = std::uint64_t(1) << sb;
        std::vector<Element> xb(sb);
        for (std::size_t i = 0; i < sb; ++i) xb[i] = mul(s, x, b.terms[i]);
        std::vector<Element> sums(top, zero(s));
        std::optional<std::uint64_t> hit;
        for (std::uint64_t mask = 1; mask < top && !hit; ++mask) {
            std::uint64_t low = mask & (~mask + 1);
            std::size_t idx = static_cast<std::size_t>(__builtin_ctzll(low));
            sums[mask] = add(s, sums[mask ^ low], xb[idx]);
            if (B.contains(sums[mask])) hit = mask;
        }
        if (!hit) {
            rep.no_h_found.push_back(x);
            continue;
        }
        GoswamiXCert cert{x, IndexSet::from_mask(*hit), sums[*hit], zero(s), {}};
        for (std::uint32_t pos : cert.H.positions)
            cert.y_sum = add(s, cert.y_sum, b.terms[pos - 1]);
        for (const Element& r : D.elements) {
            auto aprime = detail::divide_in(s, r, cert.y_sum);
            if (!aprime || !A.contains(*aprime))
                throw Error("goswami_product_check: D member fails its own factorization");
            // r*x = (x*y_sum)*a'
            if (!(mul(s, r, x) == mul(s, mul(s, x, cert.y_sum), *aprime)))
                throw Error("goswami_product_check: factorization identity broke");
            cert.facts.push_back(GoswamiFactorization{r, std::move(*aprime)});
        }
        rep.certs.push_back(std::move(cert));
    }
    return rep;
}

inline bool recheck_goswami_cert(const SetSpec& A, const SetSpec& B, const FiniteSequence& b,
                                 const GoswamiXCert& cert) {
    const GroundStructure& s = A.structure();
    Element sum = zero(s);
    Element ysum = zero(s);
    for (std::uint32_t pos : cert.H.positions) {
        if (pos > b.size()) return false;
        sum = add(s, sum, mul(s, cert.x, b.terms[pos - 1]));
        ysum = add(s, ysum, b.terms[pos - 1]);
    }
    if (!(sum == cert.xb_sum) || !(ysum == cert.y_sum)) return false;
    if (!B.contains(cert.xb_sum)) return false;
    for (const GoswamiFactorization& f : cert.facts) {
        if (!A.contains(f.a_prime)) return false;
        if (!(mul(s, cert.y_sum, f.a_prime) == f.r)) return false;
        if (!(mul(s, f.r, cert.x) == mul(s, cert.xb_sum, f.a_prime))) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Free semigroup counterexample: A = Fa is a J-set, A^{-1}A misses {b^n}
// ---------------------------------------------------------------------------

struct NcJWitness {
    IndexSet H;
    std::vector<Word> fillers;  // a(1) .. a(m+1)
    std::vector<Word> images;   // one interleaved product per sequence, all in A
};

struct FreeSgReport {
    std::size_t max_len = 0;            // |u*w| <= max_len
    std::size_t bn_lengths_tested = 0;  // b^n checked for n = 1 .. this
    bool intersection_empty = false;
    std::uint64_t pairs_checked = 0;
    std::vector<Word> inverse_sample;   // first few members of A^{-1}A
    std::vector<NcJWitness> j_witnesses;
};

namespace detail {

inline bool in_Fa(const GroundStructure& s, const Word& w) {
    return w.size() >= 2 && w.back() == s.alphabet[0];
}

inline std::vector<Word> words_up_to(const GroundStructure& s, std::size_t maxlen) {
    std::vector<Word> out;
    ElementEnumerator en(s);
    for (;;) {
        Element e = en.next();
        if (e.as_word().size() > maxlen) break;
        out.push_back(e.as_word());
    }
    return out;
}

}  // namespace detail

/// The fixed sequence families used by the free-semigroup J-set
/// demonstration: {b^n}, {b^n, ab^n}, {b^n, a^n}.
inline std::vector<std::vector<std::vector<Word>>> freesemigroup_demo_families(
    std::size_t ell = 3) {
    GroundStructure s = GroundStructure::free_semigroup("ab");
    const char gen_a = s.alphabet[0];
    const char gen_b = s.alphabet[1];
    std::vector<Word> f1, f2, f3;
    for (std::size_t n = 1; n <= ell; ++n) {
        f1.push_back(Word(n, gen_b));
        f2.push_back(Word(1, gen_a) + Word(n, gen_b));
        f3.push_back(Word(n, gen_a));
    }
    return {{f1}, {f1, f2}, {f1, f3}};
}

/// Verifies, exhaustively up to word length L, that A = Fa = {ua : u in F}
/// (words of length >= 2 ending in the first generator; the semigroup has no
/// identity) has A^{-1}A disjoint from {b^n : n >= 1}, and exhibits
/// interleaved J-witnesses for a few fixed sequence families.
inline FreeSgReport freesemigroup_counterexample(std::size_t L) {
    if (L < 3 || L > 16) throw GuardExceededError("freesemigroup_counterexample supports 3 <= L <= 16");
    GroundStructure s = GroundStructure::free_semigroup("ab");
    const char gen_b = s.alphabet[1];

    FreeSgReport rep;
    rep.max_len = L;
    rep.bn_lengths_tested = L - 2;

    // A^{-1}A = { w : exists u in A with u*w in A }, restricted to |u*w| <= L
    std::set<Word> inverse;
    std::vector<Word> all = detail::words_up_to(s, L - 1);
    for (const Word& u : all) {
        if (!detail::in_Fa(s, u)) continue;
        for (const Word& w : all) {
            if (u.size() + w.size() > L) continue;
            ++rep.pairs_checked;
            if (detail::in_Fa(s, u + w)) inverse.insert(w);
        }
    }
    rep.intersection_empty = true;
    for (std::size_t n = 1; n + 2 <= L; ++n) {
        Word bn(n, gen_b);
        if (inverse.count(bn)) rep.intersection_empty = false;
    }
    for (const Word& w : detail::words_up_to(s, 3)) {
        if (inverse.count(w)) rep.inverse_sample.push_back(w);
        if (rep.inverse_sample.size() >= 6) break;
    }

    // J-witnesses for fixed families over the noncommutative definition:
    // an interleaved product a(1) f(t1) a(2) ... f(tm) a(m+1) lands in A
    // simultaneously for every sequence of the family.
    const std::size_t ell = 3;
    auto families = freesemigroup_demo_families(ell);
    std::vector<Word> fillers = {"a", "b", "aa", "ab", "ba", "bb"};
    for (const auto& fam : families) {
        std::optional<NcJWitness> found;
        for (std::uint64_t mask = 1; mask < (1u << ell) && !found; ++mask) {
            IndexSet H = IndexSet::from_mask(mask);
            const std::size_t m = H.size();
            if (m > 2) continue;  // small interleavings suffice here
            // odometer over filler choices a(1..m+1)
            std::vector<std::size_t> pick(m + 1, 0);
            for (;;) {
                std::vector<Word> imgs;
                bool all_in = true;
                for (const auto& f : fam) {
                    Word prod;
                    for (std::size_t i = 0; i < m; ++i) {
                        prod += fillers[pick[i]];
                        prod += f[H.positions[i] - 1];
                    }
                    prod += fillers[pick[m]];
                    if (!detail::in_Fa(s, prod)) {
                        all_in = false;
                        break;
                    }
                    imgs.push_back(std::move(prod));
                }
                if (all_in) {
                    std::vector<Word> chosen;
                    for (std::size_t p : pick) chosen.push_back(fillers[p]);
                    found = NcJWitness{H, std::move(chosen), std::move(imgs)};
                    break;
                }
                std::size_t i = pick.size();
                while (i > 0) {
                    --i;
                    if (++pick[i] < fillers.size()) break;
                    pick[i] = 0;
                    if (i == 0) {
                        i = SIZE_MAX;
                        break;
                    }
                }
                if (i == SIZE_MAX) break;
            }
        }
        if (!found) throw Error("freesemigroup_counterexample: no J-witness found; search bug");
        rep.j_witnesses.push_back(std::move(*found));
    }
    return rep;
}

inline bool recheck_ncj_witness(const std::vector<std::vector<Word>>& family,
                                const NcJWitness& w) {
    GroundStructure s = GroundStructure::free_semigroup("ab");
    if (w.fillers.size() != w.H.size() + 1) return false;
    if (w.images.size() != family.size()) return false;
    for (std::size_t fi = 0; fi < family.size(); ++fi) {
        Word prod;
        for (std::size_t i = 0; i < w.H.size(); ++i) {
            std::uint32_t pos = w.H.positions[i];
            if (pos > family[fi].size()) return false;
            prod += w.fillers[i];
            prod += family[fi][pos - 1];
        }
        prod += w.fillers.back();
        if (prod != w.images[fi]) return false;
        if (!detail::in_Fa(s, prod)) return false;
    }
    return true;
}

}  // namespace ipstar
