#pragma once

// Definable subsets of ordinal intervals and the Icard topologies on them.
//
// A Band constrains the iterated end-logarithms of a point: level k holds a
// half-open interval [lo, hi) for ell^k(x), level 0 being x itself. ell of 0
// is read as 0, so shifted bands (the ell-images of a band) may contain 0.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glp/ordinal.hpp"

namespace glp {

struct Interval {
    Ordinal lo;                 // inclusive
    std::optional<Ordinal> hi;  // exclusive; nullopt is infinity

    static Interval all() { return {}; }
    static Interval closed(const Ordinal& a, const Ordinal& b) { return {a, succ(b)}; }
    // The constraint c < v <= d of the textual syntax; c = nullopt reads as -1.
    static Interval left_open(const std::optional<Ordinal>& c, const std::optional<Ordinal>& d);

    bool contains(const Ordinal& v) const { return lo <= v && (!hi || v < *hi); }
    bool is_all() const { return lo.is_zero() && !hi; }
    bool trivially_empty() const { return hi && *hi <= lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

Interval intersect(const Interval& a, const Interval& b);

class Band {
public:
    Band() : levels_{Interval::all()} {}
    explicit Band(std::vector<Interval> levels);
    static Band closed(const Ordinal& lo, const Ordinal& hi) { return Band({Interval::closed(lo, hi)}); }
    static Band point(const Ordinal& x) { return closed(x, x); }

    // Number of stored levels; levels beyond are unconstrained.
    std::size_t depth() const { return levels_.size(); }
    const Interval& level(std::size_t k) const;
    const std::vector<Interval>& levels() const { return levels_; }
    Band with_level(std::size_t k, const Interval& iv) const;

    // The band of ell-values: level k+1 becomes level k.
    Band shift() const;
    // Preimage under ell^k with the given interval for x itself.
    Band lift(std::size_t k, const Interval& base = Interval::all()) const;

    bool contains(const Ordinal& x) const;
    bool trivially_empty() const;

    friend bool operator==(const Band&, const Band&) = default;

private:
    void trim();
    std::vector<Interval> levels_;
};

Band intersect(const Band& a, const Band& b);
// Least member that is >= t.
std::optional<Ordinal> least_at_or_above(const Band& b, const Ordinal& t);
// Disjoint bands covering a minus b.
std::vector<Band> subtract(const Band& a, const Band& b);

// The subspace [lo, hi] of the ordinals the topologies live on.
struct Domain {
    Ordinal lo{1};
    Ordinal hi;
    Band band() const { return Band::closed(lo, hi); }
};

class BandSet {
public:
    BandSet() = default;
    explicit BandSet(std::vector<Band> bands);
    static BandSet of(const Band& b) { return BandSet(std::vector<Band>{b}); }
    static BandSet full(const Domain& d) { return of(d.band()); }

    const std::vector<Band>& bands() const { return bands_; }
    bool empty_syntactically() const { return bands_.empty(); }

private:
    std::vector<Band> bands_;
};

bool member(const Ordinal& x, const BandSet& s);
BandSet unite(const BandSet& a, const BandSet& b);
BandSet intersect(const BandSet& a, const BandSet& b);
BandSet subtract(const BandSet& a, const BandSet& b);
BandSet complement_within(const BandSet& s, const Domain& d);
bool is_empty(const BandSet& s);
std::optional<Ordinal> min_witness(const BandSet& s);
bool subset(const BandSet& a, const BandSet& b);
bool equal(const BandSet& a, const BandSet& b);
// Drops empty and subsumed bands, merges bands that differ in one level only
// and sorts the rest. Extensionally the identity.
BandSet simplify(const BandSet& s);
// Preimage under x -> ell^k(x), restricted to the given domain.
BandSet lift(const BandSet& s, std::size_t k, const Domain& d);

// Icard level as a machine integer; infinite levels are out of scope.
unsigned finite_level(const Ordinal& lambda);

Ordinal rank(const Ordinal& x, unsigned lambda);
BandSet derived_set(const BandSet& s, unsigned lambda, const Domain& d);
bool member_of_derived(const Ordinal& x, const BandSet& s, unsigned lambda, const Domain& d);
// Transfinite iterate for alpha < omega^2. Limit stages extrapolate endpoint
// progressions and throw NonStabilizing if none shows up within max_steps.
BandSet derived_iter(const BandSet& s, unsigned lambda, const Ordinal& alpha, const Domain& d,
                     unsigned max_steps = 64);
bool is_open(const BandSet& s, unsigned lambda, const Domain& d);
BandSet separating_nbhd(const Ordinal& x, unsigned lambda, const Domain& d);

std::string to_string(const Interval& iv);
std::string to_string(const Band& b);
std::string to_string(const BandSet& s);
Band parse_band(std::string_view text);
BandSet parse_bandset(std::string_view text);

}  // namespace glp
