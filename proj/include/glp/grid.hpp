#pragma once

// Point sets on [1, theta] for theta <= w^3, stored on a finite window of CNF
// coordinates x = w^2*a + w*b + c. Coordinates that run to infinity are cut
// at lead + 2*window; sets are required to repeat with a period dividing the
// window on the last two windows, and limits are read off the last window.
// Under that periodicity the order-topology derivative is exact, and higher
// Icard levels are discrete below w^w.

#include <cstddef>
#include <functional>
#include <map>
#include <vector>

#include "glp/logic.hpp"
#include "glp/mapexpr.hpp"
#include "glp/ordinal.hpp"

namespace glp {

class GridSpace {
public:
    struct Options {
        unsigned window = 12;
        unsigned lead = 8;
    };
    using Set = std::vector<char>;

    explicit GridSpace(const Ordinal& theta) : GridSpace(theta, Options{}) {}
    GridSpace(const Ordinal& theta, Options opt);
    static bool fits(const Ordinal& theta);

    const Ordinal& theta() const { return theta_; }
    std::size_t size() const { return points_.size(); }
    const Ordinal& point(std::size_t i) const { return points_[i]; }
    std::size_t top() const { return top_; }

    Set none() const { return Set(size(), 0); }
    Set full() const { return Set(size(), 1); }
    Set where(const std::function<bool(const Ordinal&)>& pred) const;

    Set derived(const Set& s, unsigned level) const;
    // Throws NotRepresentable unless s repeats across the last two windows of
    // every truncated coordinate.
    void check_periodic(const Set& s) const;

private:
    struct Coord {
        unsigned a, b, c;
    };
    long at(unsigned a, unsigned b, unsigned c) const;
    bool row_open(unsigned a, unsigned b) const;  // c runs to the cut
    bool slab_open(unsigned a) const;             // b runs to the cut

    Ordinal theta_;
    Options opt_;
    unsigned cut_ = 0;
    bool cube_ = false;  // theta = w^3
    Nat A_ = 0, B_ = 0, C_ = 0;
    unsigned na_ = 0;
    std::vector<Ordinal> points_;
    std::vector<Coord> coords_;
    std::vector<long> index_;
    std::size_t top_ = 0;
};

GridSpace::Set grid_union(const GridSpace::Set& a, const GridSpace::Set& b);
GridSpace::Set grid_intersect(const GridSpace::Set& a, const GridSpace::Set& b);
GridSpace::Set grid_minus(const GridSpace::Set& a, const GridSpace::Set& b);
bool grid_empty(const GridSpace::Set& a);
bool grid_subset(const GridSpace::Set& a, const GridSpace::Set& b);

// Node of every grid point under f.
std::vector<int> grid_labels(const GridSpace& g, const MapExpr& f);
GridSpace::Set grid_fiber(const std::vector<int>& labels, const NodeSet& nodes);

using GridValuation = std::map<unsigned, GridSpace::Set>;
GridSpace::Set eval_grid(const Formula& f, const GridSpace& g, const std::vector<Ordinal>& levels, const GridValuation& v);

}  // namespace glp
