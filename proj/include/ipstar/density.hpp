#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ipstar/errors.hpp"
#include "ipstar/largeness.hpp"
#include "ipstar/structures.hpp"

namespace ipstar {

/// Exact rational; reports never hold floating point.
using Ratio = mpq_class;

inline Ratio make_ratio(const Int& num, const Int& den) {
    Ratio q(num, den);
    q.canonicalize();
    return q;
}

enum class WindowAction { Shift, Dilate };

/// Generator of finite windows F_1, F_2, ... used for density estimation:
/// integer intervals [1..n], dilation towers {e * f^i : e in seed, i < n},
/// or an explicit list. Window sizes are nondecreasing.
class FolnerFamily {
  public:
    enum class Kind { Intervals, Dilation, Custom };

    static FolnerFamily intervals() {
        FolnerFamily f;
        f.kind_ = Kind::Intervals;
        f.s_ = GroundStructure::integers();
        f.action_ = WindowAction::Shift;
        return f;
    }

    static FolnerFamily dilation(GroundStructure s, Element factor, std::vector<Element> seed) {
        if (seed.empty()) throw LengthError("dilation family needs a nonempty seed window");
        require_in(s, factor, "dilation family");
        for (const Element& e : seed) require_in(s, e, "dilation family seed");
        FolnerFamily f;
        f.kind_ = Kind::Dilation;
        f.s_ = std::move(s);
        f.action_ = WindowAction::Dilate;
        f.factor_ = std::move(factor);
        f.seed_ = std::move(seed);
        return f;
    }

    static FolnerFamily custom(GroundStructure s, std::vector<std::vector<Element>> windows,
                               WindowAction action = WindowAction::Shift) {
        if (windows.empty()) throw LengthError("custom family needs at least one window");
        std::size_t prev = 0;
        for (const auto& w : windows) {
            if (w.empty()) throw LengthError("custom family windows are nonempty");
            if (w.size() < prev) throw LengthError("custom family window sizes must not shrink");
            prev = w.size();
            for (const Element& e : w) require_in(s, e, "custom family window");
        }
        FolnerFamily f;
        f.kind_ = Kind::Custom;
        f.s_ = std::move(s);
        f.action_ = action;
        f.windows_ = std::move(windows);
        return f;
    }

    Kind kind() const { return kind_; }
    const GroundStructure& structure() const { return s_; }
    WindowAction action() const { return action_; }

    std::size_t max_n() const {
        switch (kind_) {
            case Kind::Intervals: return 10000000;  // allocation guard
            case Kind::Dilation: return 4096;       // element size grows with f^n
            case Kind::Custom: return windows_.size();
        }
        return 0;
    }

    /// F_n, 1-based, deduplicated.
    std::vector<Element> window(std::size_t n) const {
        if (n < 1 || n > max_n())
            throw LengthError("Folner window index " + std::to_string(n) +
                              " outside generated range [1.." + std::to_string(max_n()) + "]");
        switch (kind_) {
            case Kind::Intervals: {
                std::vector<Element> out;
                out.reserve(n);
                for (std::size_t i = 1; i <= n; ++i)
                    out.push_back(Element::integer(Int(static_cast<unsigned long>(i))));
                return out;
            }
            case Kind::Dilation: {
                std::set<Element, CanonicalLess> seen{CanonicalLess{s_}};
                std::vector<Element> out;
                Element power = one(s_);
                for (std::size_t i = 0; i < n; ++i) {
                    for (const Element& e : seed_) {
                        Element v = mul(s_, e, power);
                        if (seen.insert(v).second) out.push_back(std::move(v));
                    }
                    power = mul(s_, power, factor_);
                }
                return out;
            }
            case Kind::Custom: return windows_[n - 1];
        }
        throw LengthError("bad family kind");
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::Intervals: return "intervals[1..n]";
            case Kind::Dilation:
                return "dilation(" + to_string(factor_) + ", seed " +
                       std::to_string(seed_.size()) + ") over " + s_.describe();
            case Kind::Custom:
                return "custom(" + std::to_string(windows_.size()) + " windows) over " +
                       s_.describe();
        }
        return "?";
    }

  private:
    FolnerFamily() : s_(GroundStructure::integers()) {}

    Kind kind_ = Kind::Intervals;
    GroundStructure s_;
    WindowAction action_ = WindowAction::Shift;
    Element factor_;
    std::vector<Element> seed_;
    std::vector<std::vector<Element>> windows_;
};

/// |g F_n  intersect F_n| / |F_n|, exactly.
inline Ratio folner_defect(const FolnerFamily& family, const Element& g, std::size_t n) {
    const GroundStructure& s = family.structure();
    require_in(s, g, "folner_defect");
    std::vector<Element> w = family.window(n);
    std::set<Element, CanonicalLess> base{CanonicalLess{s}};
    for (const Element& e : w) base.insert(e);
    std::size_t hits = 0;
    for (const Element& e : w) {
        Element moved = family.action() == WindowAction::Shift ? add(s, g, e) : mul(s, g, e);
        if (base.count(moved)) ++hits;
    }
    return make_ratio(Int(static_cast<unsigned long>(hits)),
                      Int(static_cast<unsigned long>(w.size())));
}

/// Number of window elements inside A.
inline std::size_t window_count(const SetSpec& A, const std::vector<Element>& window) {
    std::size_t c = 0;
    for (const Element& e : window)
        if (A.contains(e)) ++c;
    return c;
}

struct DensityEstimate {
    Ratio value;            // max over the scanned windows, in [0, 1]
    std::size_t n_min = 1;  // scan range
    std::size_t n_max = 1;
    std::size_t arg = 1;    // window index (or interval start) attaining the max
    std::string family;
    std::string estimator;

    std::string value_str() const { return value.get_str(); }
};

/// Upper-density estimator: max over n in [n_min, n_max] of |A n F_n|/|F_n|.
/// A window-scale stand-in for the limsup; the n_min cutoff suppresses
/// small-window noise and is recorded in the estimate.
inline DensityEstimate upper_density(const SetSpec& A, const FolnerFamily& family,
                                     std::size_t n_max, std::size_t n_min = 1) {
    if (n_min < 1 || n_min > n_max || n_max > family.max_n())
        throw LengthError("upper_density needs 1 <= n_min <= n_max <= max_n");
    DensityEstimate est;
    est.n_min = n_min;
    est.n_max = n_max;
    est.family = family.describe();
    est.estimator = "max-window-ratio";
    est.value = 0;
    if (family.kind() == FolnerFamily::Kind::Intervals) {
        // incremental count along [1..n]
        std::size_t count = 0;
        for (std::size_t n = 1; n <= n_max; ++n) {
            if (A.contains_int(Int(static_cast<unsigned long>(n)))) ++count;
            if (n < n_min) continue;
            Ratio r = make_ratio(Int(static_cast<unsigned long>(count)),
                                 Int(static_cast<unsigned long>(n)));
            if (r > est.value) {
                est.value = r;
                est.arg = n;
            }
        }
        return est;
    }
    for (std::size_t n = n_min; n <= n_max; ++n) {
        std::vector<Element> w = family.window(n);
        Ratio r = make_ratio(Int(static_cast<unsigned long>(window_count(A, w))),
                             Int(static_cast<unsigned long>(w.size())));
        if (r > est.value) {
            est.value = r;
            est.arg = n;
        }
    }
    return est;
}

/// Banach-density lower bound: max over all length-L intervals inside [1..N]
/// of |A n I| / L. Labeled an estimate from below; the true sup over all
/// Folner families is not computable.
inline DensityEstimate banach_upper_density_est(const SetSpec& A, std::size_t N, std::size_t L) {
    if (L < 1 || L > N) throw LengthError("banach_upper_density_est needs 1 <= L <= N");
    DensityEstimate est;
    est.n_min = 1;
    est.n_max = N;
    est.family = "all length-" + std::to_string(L) + " intervals in [1.." + std::to_string(N) + "]";
    est.estimator = "max-interval-lower-bound";
    std::size_t count = 0;
    for (std::size_t i = 1; i <= L; ++i)
        if (A.contains_int(Int(static_cast<unsigned long>(i)))) ++count;
    std::size_t best = count;
    est.arg = 1;
    for (std::size_t start = 2; start + L - 1 <= N; ++start) {
        if (A.contains_int(Int(static_cast<unsigned long>(start - 1)))) --count;
        if (A.contains_int(Int(static_cast<unsigned long>(start + L - 1)))) ++count;
        if (count > best) {
            best = count;
            est.arg = start;
        }
    }
    est.value = make_ratio(Int(static_cast<unsigned long>(best)),
                           Int(static_cast<unsigned long>(L)));
    return est;
}

struct DilationProbeResult {
    DensityEstimate base;
    DensityEstimate dilated;
    Ratio abs_diff;
};

/// Densities of A and factor*A under one family, with their gap: finite-scale
/// evidence for or against dilation invariance of the density.
inline DilationProbeResult dilation_invariance_probe(const SetSpec& A, const Element& factor,
                                                     const FolnerFamily& family,
                                                     std::size_t n_max, std::size_t n_min = 1) {
    DilationProbeResult out{upper_density(A, family, n_max, n_min),
                            upper_density(SetSpec::dilation(factor, A), family, n_max, n_min),
                            0};
    out.abs_diff = abs(out.base.value - out.dilated.value);
    return out;
}

}  // namespace ipstar
