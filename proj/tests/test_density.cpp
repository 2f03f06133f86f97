#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ipstar/density.hpp"
#include "ipstar/prng.hpp"

using namespace ipstar;

namespace {

const GroundStructure Z = GroundStructure::integers();
const GroundStructure ZX = GroundStructure::poly_over_z();

SetSpec ideal_z(long k) { return SetSpec::ideal(SubgroupSpec(Z, Element::integer(k))); }

bool slow_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<Element> nonzero_constants(int count) {
    std::vector<Element> out;
    for (int k = 1; out.size() < static_cast<std::size_t>(count); ++k) {
        out.push_back(Element::poly({Int(k)}));
        if (out.size() < static_cast<std::size_t>(count)) out.push_back(Element::poly({Int(-k)}));
    }
    return out;
}

}  // namespace

TEST_CASE("folner defect of interval shifts") {
    auto fam = FolnerFamily::intervals();
    CHECK(folner_defect(fam, Element::integer(1L), 100) == make_ratio(99, 100));
    CHECK(folner_defect(fam, Element::integer(0L), 57) == make_ratio(1, 1));
    CHECK(folner_defect(fam, Element::integer(-3L), 10) == make_ratio(7, 10));
}

TEST_CASE("folner defect of a dilation family in Z[x], against a direct count") {
    Element x = Element::poly({Int(0), Int(1)});
    auto seed = nonzero_constants(4);
    auto fam = FolnerFamily::dilation(ZX, x, seed);
    std::size_t n = 5;
    Ratio got = folner_defect(fam, x, n);

    // independent recount
    std::vector<Element> w = fam.window(n);
    std::set<Element, CanonicalLess> base{CanonicalLess{ZX}};
    for (const Element& e : w) base.insert(e);
    std::size_t hits = 0;
    for (const Element& e : w)
        if (base.count(mul(ZX, x, e))) ++hits;
    CHECK(got == make_ratio(Int((unsigned long)hits), Int((unsigned long)w.size())));
    // x * (e x^i) stays inside while i+1 < n: expect (n-1)/n of the tower
    CHECK(got == make_ratio(Int((unsigned long)(seed.size() * (n - 1))),
                            Int((unsigned long)(seed.size() * n))));
}

TEST_CASE("folner window index range is checked") {
    auto fam = FolnerFamily::custom(Z, {range_window(1, 3), range_window(1, 5)});
    CHECK(fam.window(2).size() == 5);
    CHECK_THROWS_AS(fam.window(3), LengthError);
    CHECK_THROWS_AS(fam.window(0), LengthError);
    CHECK_THROWS_AS(FolnerFamily::custom(Z, {range_window(1, 5), range_window(1, 3)}),
                    LengthError);
}

TEST_CASE("upper density of 2Z along intervals is exactly 1/2") {
    auto est = upper_density(ideal_z(2), FolnerFamily::intervals(), 1000, 2);
    CHECK(est.value == make_ratio(1, 2));
    CHECK(est.arg % 2 == 0);
}

TEST_CASE("upper density of the whole ring is 1") {
    auto est = upper_density(ideal_z(1), FolnerFamily::intervals(), 50);
    CHECK(est.value == make_ratio(1, 1));
}

TEST_CASE("upper density of the primes decays, cross-checked by slow count") {
    auto sieve = std::make_shared<const Sieve>(Sieve::compute(20000));
    auto P = SetSpec::primes(sieve);
    auto est = upper_density(P, FolnerFamily::intervals(), 20000, 2000);

    Ratio best = 0;
    std::size_t count = 0;
    for (long n = 1; n <= 20000; ++n) {
        if (slow_prime(n)) ++count;
        if (n >= 2000) {
            Ratio r = make_ratio(Int((unsigned long)count), Int((unsigned long)n));
            if (r > best) best = r;
        }
    }
    CHECK(est.value == best);
    // decay: a later scan start gives a smaller maximum
    auto later = upper_density(P, FolnerFamily::intervals(), 20000, 10000);
    CHECK(later.value < est.value);
}

TEST_CASE("upper density is monotone in the set") {
    auto est4 = upper_density(ideal_z(4), FolnerFamily::intervals(), 500);
    auto est2 = upper_density(ideal_z(2), FolnerFamily::intervals(), 500);
    CHECK(est4.value <= est2.value);

    SplitMix64 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<long> small, big;
        for (long v = 1; v <= 60; ++v) {
            bool in_small = rng.next_below(3) == 0;
            if (in_small) small.push_back(v);
            if (in_small || rng.next_below(2) == 0) big.push_back(v);
        }
        if (small.empty()) continue;
        auto es = upper_density(SetSpec::explicit_ints(small), FolnerFamily::intervals(), 60);
        auto eb = upper_density(SetSpec::explicit_ints(big), FolnerFamily::intervals(), 60);
        CHECK(es.value <= eb.value);
    }
}

TEST_CASE("window counts add on disjoint unions") {
    SplitMix64 rng(8);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<long> a, b;
        for (long v = 1; v <= 80; ++v) {
            switch (rng.next_below(3)) {
                case 0: a.push_back(v); break;
                case 1: b.push_back(v); break;
                default: break;
            }
        }
        if (a.empty() || b.empty()) continue;
        auto A = SetSpec::explicit_ints(a);
        auto B = SetSpec::explicit_ints(b);
        auto U = SetSpec::union_of({A, B});
        auto w = range_window(1, 80);
        CHECK(window_count(U, w) == window_count(A, w) + window_count(B, w));
    }
}

TEST_CASE("interval estimates are shift-stable up to |g|/n") {
    SplitMix64 rng(9);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<long> xs, shifted;
        long g = rng.next_in(1, 10);
        for (long v = 1; v <= 100; ++v)
            if (rng.next_below(2)) {
                xs.push_back(v);
                shifted.push_back(v + g);
            }
        if (xs.empty()) continue;
        auto w = range_window(1, 100);
        auto A = SetSpec::explicit_ints(xs);
        auto Ag = SetSpec::explicit_ints(shifted);
        long d = static_cast<long>(window_count(A, w)) - static_cast<long>(window_count(Ag, w));
        CHECK(std::abs(d) <= g);
    }
}

TEST_CASE("estimates always land in [0,1]") {
    SplitMix64 rng(10);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<long> xs;
        for (long v = 1; v <= 50; ++v)
            if (rng.next_below(2)) xs.push_back(v);
        auto A = SetSpec::explicit_ints(xs);
        auto est = upper_density(A, FolnerFamily::intervals(), 50);
        CHECK(est.value >= 0);
        CHECK(est.value <= 1);
        auto best = banach_upper_density_est(A, 50, 10);
        CHECK(best.value >= 0);
        CHECK(best.value <= 1);
    }
}

TEST_CASE("banach estimate basics") {
    CHECK(banach_upper_density_est(ideal_z(2), 400, 100).value == make_ratio(1, 2));

    // thick prefix: [1..100] plus a sparse tail; the full prefix window wins
    std::vector<long> xs;
    for (long v = 1; v <= 100; ++v) xs.push_back(v);
    xs.push_back(200);
    xs.push_back(290);
    auto est = banach_upper_density_est(SetSpec::explicit_ints(xs), 300, 100);
    CHECK(est.value == make_ratio(1, 1));
    CHECK(est.arg == 1);
}

TEST_CASE("banach estimate on primes matches a prefix-sum oracle") {
    auto sieve = std::make_shared<const Sieve>(Sieve::compute(100000));
    auto P = SetSpec::primes(sieve);
    std::size_t N = 100000, L = 1000;
    auto est = banach_upper_density_est(P, N, L);

    // oracle: prefix sums of the test's own primality
    std::vector<std::size_t> pi(N + 1, 0);
    for (std::size_t n = 1; n <= N; ++n) pi[n] = pi[n - 1] + (slow_prime(long(n)) ? 1 : 0);
    std::size_t best = 0;
    for (std::size_t s = 1; s + L - 1 <= N; ++s) best = std::max(best, pi[s + L - 1] - pi[s - 1]);
    CHECK(est.value == make_ratio(Int((unsigned long)best), Int((unsigned long)L)));
}

TEST_CASE("additive density is not dilation invariant: factor 2 halves it") {
    auto probe = dilation_invariance_probe(ideal_z(1), Element::integer(2L),
                                           FolnerFamily::intervals(), 600, 2);
    CHECK(probe.base.value == make_ratio(1, 1));
    CHECK(probe.dilated.value == make_ratio(1, 2));
    CHECK(probe.abs_diff == make_ratio(1, 2));
}

TEST_CASE("multiplicative towers keep the density of x*Z[x] near 1") {
    Element x = Element::poly({Int(0), Int(1)});
    auto fam = FolnerFamily::dilation(ZX, x, nonzero_constants(8));
    auto A = SetSpec::ideal(SubgroupSpec(ZX, x));
    std::size_t n_max = 12;
    auto probe = dilation_invariance_probe(A, x, fam, n_max);
    CHECK(probe.base.value == make_ratio(Int((unsigned long)(n_max - 1)),
                                         Int((unsigned long)n_max)));
    CHECK(probe.dilated.value == make_ratio(Int((unsigned long)(n_max - 2)),
                                            Int((unsigned long)n_max)));
    CHECK(probe.abs_diff == make_ratio(1, Int((unsigned long)n_max)));
}

TEST_CASE("factor 1 gives identical estimates") {
    auto probe = dilation_invariance_probe(ideal_z(3), Element::integer(1L),
                                           FolnerFamily::intervals(), 200);
    CHECK(probe.base.value == probe.dilated.value);
    CHECK(probe.abs_diff == 0);
}
