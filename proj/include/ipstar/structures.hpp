#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ipstar/errors.hpp"

namespace ipstar {

using Int = mpz_class;

/// Dense integer polynomial, lowest degree first, no trailing zero
/// coefficient. The empty vector is the zero polynomial.
using Poly = std::vector<Int>;

/// Nonempty word over a finite alphabet (free semigroups have no identity).
using Word = std::string;

enum class StructureKind { Integers, Modular, Polynomials, FreeSemigroup };

/// A concrete ground semigroup/ring with a canonical total enumeration
/// order. Values are immutable after construction.
struct GroundStructure {
    StructureKind kind;
    std::uint64_t modulus = 0;  // Modular only, >= 2
    std::string alphabet;       // FreeSemigroup only, distinct symbols

    static GroundStructure integers() { return {StructureKind::Integers, 0, {}}; }

    static GroundStructure modular(std::uint64_t n) {
        if (n < 2) throw KindMismatchError("modular structure requires n >= 2");
        return {StructureKind::Modular, n, {}};
    }

    static GroundStructure poly_over_z() { return {StructureKind::Polynomials, 0, {}}; }

    static GroundStructure free_semigroup(std::string alpha) {
        if (alpha.size() < 2) throw KindMismatchError("free semigroup alphabet needs >= 2 symbols");
        for (std::size_t i = 0; i < alpha.size(); ++i)
            for (std::size_t j = i + 1; j < alpha.size(); ++j)
                if (alpha[i] == alpha[j]) throw KindMismatchError("alphabet symbols must be distinct");
        return {StructureKind::FreeSemigroup, 0, std::move(alpha)};
    }

    bool operator==(const GroundStructure& o) const = default;

    bool additive() const { return kind != StructureKind::FreeSemigroup; }

    std::string describe() const {
        switch (kind) {
            case StructureKind::Integers: return "Z";
            case StructureKind::Modular: return "Z/" + std::to_string(modulus);
            case StructureKind::Polynomials: return "Z[x]";
            case StructureKind::FreeSemigroup: return "free{" + alphabet + "}";
        }
        return "?";
    }
};

inline Poly poly_normalize(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

/// Tagged element of a ground structure. Residues of Z/n are stored as the
/// canonical representative in [0, n); the owning structure supplies n.
struct Element {
    std::variant<Int, Poly, Word> v;

    Element() : v(Int(0)) {}

    static Element integer(Int x) { return Element{std::move(x)}; }
    static Element integer(long x) { return Element{Int(x)}; }
    static Element poly(Poly p) { return Element{poly_normalize(std::move(p))}; }
    static Element word(Word w) {
        if (w.empty()) throw KindMismatchError("free semigroup words are nonempty");
        return Element{std::move(w)};
    }

    bool is_int() const { return std::holds_alternative<Int>(v); }
    bool is_poly() const { return std::holds_alternative<Poly>(v); }
    bool is_word() const { return std::holds_alternative<Word>(v); }

    const Int& as_int() const {
        if (!is_int()) throw KindMismatchError("element is not an integer/residue");
        return std::get<Int>(v);
    }
    const Poly& as_poly() const {
        if (!is_poly()) throw KindMismatchError("element is not a polynomial");
        return std::get<Poly>(v);
    }
    const Word& as_word() const {
        if (!is_word()) throw KindMismatchError("element is not a word");
        return std::get<Word>(v);
    }

    bool operator==(const Element& o) const = default;

  private:
    explicit Element(std::variant<Int, Poly, Word> val) : v(std::move(val)) {}
};

inline std::string to_string(const Int& x) { return x.get_str(); }

inline std::string to_string(const Poly& p) {
    if (p.empty()) return "0";
    std::string out;
    for (std::size_t d = 0; d < p.size(); ++d) {
        const Int& c = p[d];
        if (c == 0) continue;
        Int a = abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += (c < 0) ? " - " : " + ";
        }
        if (d == 0) {
            out += a.get_str();
        } else {
            if (a != 1) out += a.get_str() + "*";
            out += "x";
            if (d > 1) out += "^" + std::to_string(d);
        }
    }
    return out;
}

inline std::string to_string(const Element& e) {
    if (e.is_int()) return to_string(e.as_int());
    if (e.is_poly()) return to_string(e.as_poly());
    return e.as_word();
}

// ---------------------------------------------------------------------------
// Validity and arithmetic
// ---------------------------------------------------------------------------

inline bool element_in(const GroundStructure& s, const Element& e) {
    switch (s.kind) {
        case StructureKind::Integers: return e.is_int();
        case StructureKind::Modular:
            return e.is_int() && e.as_int() >= 0 && e.as_int() < Int(s.modulus);
        case StructureKind::Polynomials:
            return e.is_poly() && (e.as_poly().empty() || e.as_poly().back() != 0);
        case StructureKind::FreeSemigroup: {
            if (!e.is_word() || e.as_word().empty()) return false;
            for (char c : e.as_word())
                if (s.alphabet.find(c) == std::string::npos) return false;
            return true;
        }
    }
    return false;
}

inline void require_in(const GroundStructure& s, const Element& e, const char* who) {
    if (!element_in(s, e))
        throw KindMismatchError(std::string(who) + ": element " + to_string(e) +
                                " does not belong to " + s.describe());
}

inline Element zero(const GroundStructure& s) {
    switch (s.kind) {
        case StructureKind::Integers:
        case StructureKind::Modular: return Element::integer(0);
        case StructureKind::Polynomials: return Element::poly({});
        case StructureKind::FreeSemigroup:
            throw KindMismatchError("free semigroup has no zero");
    }
    throw KindMismatchError("zero: bad kind");
}

inline Element one(const GroundStructure& s) {
    switch (s.kind) {
        case StructureKind::Integers:
        case StructureKind::Modular: return Element::integer(1);
        case StructureKind::Polynomials: return Element::poly({Int(1)});
        case StructureKind::FreeSemigroup:
            throw KindMismatchError("free semigroup has no identity");
    }
    throw KindMismatchError("one: bad kind");
}

inline Element add(const GroundStructure& s, const Element& a, const Element& b) {
    require_in(s, a, "add");
    require_in(s, b, "add");
    switch (s.kind) {
        case StructureKind::Integers: return Element::integer(a.as_int() + b.as_int());
        case StructureKind::Modular: {
            Int r = (a.as_int() + b.as_int()) % Int(s.modulus);
            return Element::integer(r);
        }
        case StructureKind::Polynomials: {
            const Poly& p = a.as_poly();
            const Poly& q = b.as_poly();
            Poly out(std::max(p.size(), q.size()), Int(0));
            for (std::size_t i = 0; i < p.size(); ++i) out[i] += p[i];
            for (std::size_t i = 0; i < q.size(); ++i) out[i] += q[i];
            return Element::poly(std::move(out));
        }
        case StructureKind::FreeSemigroup:
            throw KindMismatchError("add: free semigroup has no addition");
    }
    throw KindMismatchError("add: bad kind");
}

inline Element neg(const GroundStructure& s, const Element& a) {
    require_in(s, a, "neg");
    switch (s.kind) {
        case StructureKind::Integers: return Element::integer(-a.as_int());
        case StructureKind::Modular: {
            Int r = (Int(s.modulus) - a.as_int()) % Int(s.modulus);
            return Element::integer(r);
        }
        case StructureKind::Polynomials: {
            Poly out = a.as_poly();
            for (Int& c : out) c = -c;
            return Element::poly(std::move(out));
        }
        case StructureKind::FreeSemigroup:
            throw KindMismatchError("neg: free semigroup has no negation");
    }
    throw KindMismatchError("neg: bad kind");
}

inline Element sub(const GroundStructure& s, const Element& a, const Element& b) {
    return add(s, a, neg(s, b));
}

inline Element mul(const GroundStructure& s, const Element& a, const Element& b) {
    require_in(s, a, "mul");
    require_in(s, b, "mul");
    switch (s.kind) {
        case StructureKind::Integers: return Element::integer(a.as_int() * b.as_int());
        case StructureKind::Modular: {
            Int r = (a.as_int() * b.as_int()) % Int(s.modulus);
            return Element::integer(r);
        }
        case StructureKind::Polynomials: {
            const Poly& p = a.as_poly();
            const Poly& q = b.as_poly();
            if (p.empty() || q.empty()) return Element::poly({});
            Poly out(p.size() + q.size() - 1, Int(0));
            for (std::size_t i = 0; i < p.size(); ++i)
                for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
            return Element::poly(std::move(out));
        }
        case StructureKind::FreeSemigroup:
            // concatenation, in argument order
            return Element::word(a.as_word() + b.as_word());
    }
    throw KindMismatchError("mul: bad kind");
}

// ---------------------------------------------------------------------------
// Polynomial division helpers (exact arithmetic over Q, integrality checked)
// ---------------------------------------------------------------------------

/// Quotient of g by d in Z[x] when g = d*q with q in Z[x]; nullopt otherwise.
inline std::optional<Poly> poly_divide_exact(const Poly& g, const Poly& d) {
    if (d.empty()) return std::nullopt;
    if (g.empty()) return Poly{};
    if (g.size() < d.size()) return std::nullopt;
    std::vector<mpq_class> rem(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) rem[i] = g[i];
    const mpq_class lead = d.back();
    std::vector<mpq_class> quot(g.size() - d.size() + 1, mpq_class(0));
    for (std::size_t k = quot.size(); k-- > 0;) {
        mpq_class c = rem[k + d.size() - 1] / lead;
        quot[k] = c;
        if (c == 0) continue;
        for (std::size_t i = 0; i < d.size(); ++i) rem[k + i] -= c * mpq_class(d[i]);
    }
    for (const auto& r : rem)
        if (r != 0) return std::nullopt;
    Poly out(quot.size());
    for (std::size_t i = 0; i < quot.size(); ++i) {
        if (quot[i].get_den() != 1) return std::nullopt;
        out[i] = quot[i].get_num();
    }
    return poly_normalize(std::move(out));
}

/// Remainder of g modulo d by iterated leading-term reduction. Only valid
/// when d's leading coefficient is a unit (+-1); then the remainder is the
/// unique integral representative of degree < deg d.
inline Poly poly_reduce_unit_lead(const Poly& g, const Poly& d) {
    Poly rem = g;
    const Int& lead = d.back();
    while (rem.size() >= d.size()) {
        Int c = rem.back() * lead;  // lead is +-1, so c = rem.back()/lead
        std::size_t shift = rem.size() - d.size();
        for (std::size_t i = 0; i < d.size(); ++i) rem[shift + i] -= c * d[i];
        rem = poly_normalize(std::move(rem));
    }
    return rem;
}

// ---------------------------------------------------------------------------
// Canonical order and enumeration
// ---------------------------------------------------------------------------
//
// The canonical total orders, fixed once so every greedy/least-element choice
// in the library is deterministic:
//   integers      0, 1, -1, 2, -2, ...
//   Z/n           0, 1, ..., n-1
//   words         by (length, then lexicographic in alphabet order)
//   Z[x]          by expanding boxes B_L = { deg <= L-1, all |coeff| <= L },
//                 L = 1, 2, ...; inside a box by (degree, then coefficient
//                 ranks from the constant term up, each coefficient ranked in
//                 the integer order 0, 1, -1, 2, -2, ...).
// The box grading makes the polynomial order a genuine enumeration (each
// graded class is finite) with prefix [0, 1, -1, ...].

namespace detail {

/// Position of x in the canonical integer order 0,1,-1,2,-2,...
inline Int int_rank(const Int& x) {
    Int a = abs(x) * 2;
    if (x > 0) a -= 1;
    return a;
}

inline int word_symbol_rank(const GroundStructure& s, char c) {
    auto p = s.alphabet.find(c);
    return static_cast<int>(p);
}

/// Box level of a nonzero polynomial: max(deg+1, max |coeff|).
inline Int poly_level(const Poly& p) {
    if (p.empty()) return 1;
    Int lvl = Int(static_cast<unsigned long>(p.size()));  // deg+1
    for (const Int& c : p) {
        Int a = abs(c);
        if (a > lvl) lvl = a;
    }
    return lvl;
}

}  // namespace detail

/// Strict total order matching the canonical enumeration position.
inline bool canonical_less(const GroundStructure& s, const Element& a, const Element& b) {
    switch (s.kind) {
        case StructureKind::Integers: {
            Int ra = detail::int_rank(a.as_int());
            Int rb = detail::int_rank(b.as_int());
            return ra < rb;
        }
        case StructureKind::Modular: return a.as_int() < b.as_int();
        case StructureKind::FreeSemigroup: {
            const Word& wa = a.as_word();
            const Word& wb = b.as_word();
            if (wa.size() != wb.size()) return wa.size() < wb.size();
            for (std::size_t i = 0; i < wa.size(); ++i)
                if (wa[i] != wb[i])
                    return detail::word_symbol_rank(s, wa[i]) < detail::word_symbol_rank(s, wb[i]);
            return false;
        }
        case StructureKind::Polynomials: {
            const Poly& p = a.as_poly();
            const Poly& q = b.as_poly();
            Int la = detail::poly_level(p);
            Int lb = detail::poly_level(q);
            if (la != lb) return la < lb;
            if (p.size() != q.size()) return p.size() < q.size();
            for (std::size_t i = 0; i < p.size(); ++i)
                if (p[i] != q[i]) return detail::int_rank(p[i]) < detail::int_rank(q[i]);
            return false;
        }
    }
    return false;
}

/// Comparator usable with std::set / std::sort.
struct CanonicalLess {
    GroundStructure s;
    bool operator()(const Element& a, const Element& b) const { return canonical_less(s, a, b); }
};

/// Streams the canonical enumeration one element at a time. enumerate(s, i)
/// is a pure function of (kind, parameters, i); the stream is prefix-stable.
class ElementEnumerator {
  public:
    explicit ElementEnumerator(GroundStructure s) : s_(std::move(s)) {
        if (s_.kind == StructureKind::Polynomials) {
            level_ = 1;
            deg_ = -2;  // -2: zero polynomial pending
        }
    }

    Element next() {
        switch (s_.kind) {
            case StructureKind::Integers: {
                Element e = Element::integer(int_state_);
                if (int_state_ > 0)
                    int_state_ = -int_state_;
                else
                    int_state_ = Int(1) - int_state_;
                return e;
            }
            case StructureKind::Modular: {
                if (mod_state_ >= s_.modulus)
                    throw SearchExhaustedError("canonical enumeration of Z/" +
                                               std::to_string(s_.modulus) + " has only " +
                                               std::to_string(s_.modulus) + " elements");
                return Element::integer(Int(static_cast<unsigned long>(mod_state_++)));
            }
            case StructureKind::FreeSemigroup: return next_word();
            case StructureKind::Polynomials: return next_poly();
        }
        throw KindMismatchError("enumerate: bad kind");
    }

  private:
    Element next_word() {
        if (word_digits_.empty()) {
            word_digits_ = {0};
        } else {
            std::size_t i = word_digits_.size();
            while (i > 0) {
                --i;
                if (++word_digits_[i] < s_.alphabet.size()) break;
                word_digits_[i] = 0;
                if (i == 0) word_digits_.insert(word_digits_.begin(), 0);
            }
        }
        Word w;
        for (std::size_t d : word_digits_) w += s_.alphabet[d];
        return Element::word(std::move(w));
    }

    // Advance the polynomial odometer to the next coefficient vector of the
    // current (level, degree) block; false when the block is exhausted.
    bool poly_advance_coeffs() {
        long max_rank = 2 * level_;  // ranks 0..2L encode 0,1,-1,...,L,-L
        for (std::size_t i = coeff_ranks_.size(); i-- > 0;) {
            long lo = (i + 1 == coeff_ranks_.size()) ? 1 : 0;  // leading coeff nonzero
            if (++coeff_ranks_[i] <= max_rank) return true;
            coeff_ranks_[i] = lo;
        }
        return false;
    }

    static Int rank_to_int(long r) {
        if (r == 0) return 0;
        Int v((r + 1) / 2);
        return (r % 2 == 1) ? v : -v;
    }

    Element next_poly() {
        for (;;) {
            if (deg_ == -2) {  // zero polynomial, once, at level 1
                deg_ = -1;
                return Element::poly({});
            }
            if (deg_ == -1 || !poly_advance_coeffs()) {
                // move to the next degree block, or the next level
                ++deg_;
                if (deg_ >= level_) {
                    ++level_;
                    deg_ = 0;
                }
                coeff_ranks_.assign(static_cast<std::size_t>(deg_) + 1, 0);
                coeff_ranks_.back() = 1;
            }
            // skip vectors already emitted at a lower level
            bool fresh = (deg_ + 1 == level_);
            Poly p(coeff_ranks_.size());
            Int maxabs = 0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                p[i] = rank_to_int(coeff_ranks_[i]);
                Int a = abs(p[i]);
                if (a > maxabs) maxabs = a;
            }
            if (fresh || maxabs == level_) return Element::poly(std::move(p));
        }
    }

    GroundStructure s_;
    Int int_state_ = 0;
    std::uint64_t mod_state_ = 0;
    std::vector<std::size_t> word_digits_;
    long level_ = 0;
    long deg_ = 0;
    std::vector<long> coeff_ranks_;
};

/// First `count` elements of the canonical order.
inline std::vector<Element> enumerate(const GroundStructure& s, std::size_t count) {
    if (count < 1) throw LengthError("enumerate: count must be >= 1");
    ElementEnumerator en(s);
    std::vector<Element> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(en.next());
    return out;
}

// ---------------------------------------------------------------------------
// Subgroups / principal ideals
// ---------------------------------------------------------------------------

enum class SubgroupDirection { Additive, MultiplicativeDilation };

struct SubgroupIndex {
    bool finite;
    Int value;  // meaningful when finite

    static SubgroupIndex finite_of(Int v) { return {true, std::move(v)}; }
    static SubgroupIndex infinite() { return {false, 0}; }
};

struct CosetLabel {
    Element rep;
    bool canonical;  // reps of equal cosets compare equal iff canonical
};

/// Principal additive subgroup / ideal of a ground structure: kZ, c(Z/n),
/// alpha*Z[x]. Membership, coset labels and index per the rules below.
struct SubgroupSpec {
    GroundStructure s;
    Element generator;
    SubgroupDirection direction = SubgroupDirection::Additive;

    SubgroupSpec(GroundStructure st, Element gen,
                 SubgroupDirection dir = SubgroupDirection::Additive)
        : s(std::move(st)), generator(std::move(gen)), direction(dir) {
        require_in(s, generator, "SubgroupSpec");
        if (s.kind == StructureKind::FreeSemigroup)
            throw KindMismatchError("free semigroup has no additive subgroups");
    }

    bool trivial() const { return generator == zero(s); }

    bool contains(const Element& g) const {
        require_in(s, g, "subgroup membership");
        switch (s.kind) {
            case StructureKind::Integers: {
                if (trivial()) return g.as_int() == 0;
                return mpz_divisible_p(g.as_int().get_mpz_t(), generator.as_int().get_mpz_t()) != 0;
            }
            case StructureKind::Modular: {
                Int d = effective_mod_generator();
                if (d == Int(s.modulus)) return g.as_int() == 0;  // trivial subgroup
                return mpz_divisible_p(g.as_int().get_mpz_t(), d.get_mpz_t()) != 0;
            }
            case StructureKind::Polynomials: {
                if (trivial()) return g.as_poly().empty();
                return poly_divide_exact(g.as_poly(), generator.as_poly()).has_value();
            }
            default: throw KindMismatchError("subgroup membership: bad kind");
        }
    }

    bool same_coset(const Element& a, const Element& b) const { return contains(sub(s, a, b)); }

    /// [G:H]. Exact for kZ (= |k|) and Z/n; infinite for alpha*Z[x] unless
    /// alpha is a unit.
    SubgroupIndex index() const {
        require_nontrivial();
        switch (s.kind) {
            case StructureKind::Integers: return SubgroupIndex::finite_of(abs(generator.as_int()));
            case StructureKind::Modular: return SubgroupIndex::finite_of(effective_mod_generator());
            case StructureKind::Polynomials: {
                const Poly& a = generator.as_poly();
                if (a.size() == 1 && abs(a[0]) == 1) return SubgroupIndex::finite_of(1);
                return SubgroupIndex::infinite();
            }
            default: throw KindMismatchError("index: bad kind");
        }
    }

    /// Canonical coset label where a reduced representative exists:
    ///   kZ       -> residue in [0, |k|)
    ///   c(Z/n)   -> residue mod gcd(c, n)
    ///   alpha*Z[x], alpha constant  -> coefficientwise residues mod |alpha|
    ///   alpha*Z[x], lead coeff +-1  -> remainder of degree < deg alpha
    /// Otherwise the raw element, with coset equality decided by membership
    /// of differences (label.canonical == false).
    CosetLabel coset_label(const Element& g) const {
        require_in(s, g, "coset_label");
        require_nontrivial();
        switch (s.kind) {
            case StructureKind::Integers: {
                Int m = abs(generator.as_int());
                Int r;
                mpz_fdiv_r(r.get_mpz_t(), g.as_int().get_mpz_t(), m.get_mpz_t());
                return {Element::integer(r), true};
            }
            case StructureKind::Modular: {
                Int d = effective_mod_generator();
                Int r;
                mpz_fdiv_r(r.get_mpz_t(), g.as_int().get_mpz_t(), d.get_mpz_t());
                return {Element::integer(r), true};
            }
            case StructureKind::Polynomials: {
                const Poly& a = generator.as_poly();
                if (a.size() == 1) {
                    Int m = abs(a[0]);
                    Poly r = g.as_poly();
                    for (Int& c : r) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
                    return {Element::poly(std::move(r)), true};
                }
                if (abs(a.back()) == 1)
                    return {Element::poly(poly_reduce_unit_lead(g.as_poly(), a)), true};
                return {g, false};
            }
            default: throw KindMismatchError("coset_label: bad kind");
        }
    }

    bool label_equal(const CosetLabel& a, const CosetLabel& b) const {
        if (a.canonical && b.canonical) return a.rep == b.rep;
        return same_coset(a.rep, b.rep);
    }

  private:
    void require_nontrivial() const {
        if (s.kind == StructureKind::Modular) {
            if (effective_mod_generator() == Int(s.modulus))
                throw TrivialSubgroupError("subgroup of " + s.describe() + " is {0}");
            return;
        }
        if (trivial()) throw TrivialSubgroupError("subgroup {0} has no cosets");
    }

    // <c> in Z/n equals <gcd(c, n)>; gcd(0, n) = n marks the trivial case.
    Int effective_mod_generator() const {
        Int d = gcd(generator.as_int(), Int(s.modulus));
        if (d == 0) d = Int(s.modulus);
        return d;
    }
};

// ---------------------------------------------------------------------------
// Index sets and finite sequences
// ---------------------------------------------------------------------------

/// Sorted nonempty set of 1-based sequence positions; the "H" of the
/// finite-sums definitions.
struct IndexSet {
    std::vector<std::uint32_t> positions;

    explicit IndexSet(std::vector<std::uint32_t> pos) : positions(std::move(pos)) {
        if (positions.empty()) throw LengthError("IndexSet must be nonempty");
        for (std::size_t i = 0; i < positions.size(); ++i) {
            if (positions[i] < 1) throw LengthError("IndexSet positions are >= 1");
            if (i > 0 && positions[i] <= positions[i - 1])
                throw LengthError("IndexSet positions are strictly increasing");
        }
    }

    /// Positions of set bits, bit i -> position i+1.
    static IndexSet from_mask(std::uint64_t mask) {
        std::vector<std::uint32_t> pos;
        for (std::uint32_t i = 0; mask; ++i, mask >>= 1)
            if (mask & 1) pos.push_back(i + 1);
        return IndexSet(std::move(pos));
    }

    std::uint64_t to_mask() const {
        std::uint64_t m = 0;
        for (auto p : positions) m |= (1ull << (p - 1));
        return m;
    }

    std::size_t size() const { return positions.size(); }

    bool operator==(const IndexSet& o) const = default;

    std::string to_string() const {
        std::string out = "{";
        for (std::size_t i = 0; i < positions.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(positions[i]);
        }
        return out + "}";
    }
};

/// Finite sequence over one structure; terms may repeat.
struct FiniteSequence {
    GroundStructure s;
    std::vector<Element> terms;

    FiniteSequence(GroundStructure st, std::vector<Element> t)
        : s(std::move(st)), terms(std::move(t)) {
        if (terms.empty()) throw LengthError("FiniteSequence needs length >= 1");
        for (const Element& e : terms) require_in(s, e, "FiniteSequence");
    }

    std::size_t size() const { return terms.size(); }
};

}  // namespace ipstar
