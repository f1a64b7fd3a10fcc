#pragma once

// Checks that a map expression from [1, theta] onto a J-tree satisfies the
// four J-map conditions, relation k read at Icard level levels[k].
//
// Evidence is exact over band preimages when every fiber is representable,
// exact on the coordinate grid when theta <= w^3 and the fibers settle, and
// sampled otherwise (rank preservation at the top level only).

#include <cstdint>
#include <string>
#include <vector>

#include "glp/grid.hpp"
#include "glp/jtree.hpp"
#include "glp/mapexpr.hpp"

namespace glp {

enum class Evidence { Exact, Grid, Sampled, Skipped };
const char* evidence_name(Evidence e);

struct CheckResult {
    std::string name;
    Evidence evidence = Evidence::Exact;
    bool passed = true;
    std::string detail;  // first failure, if any
};

struct JmapReport {
    Evidence evidence = Evidence::Exact;
    std::vector<CheckResult> checks;
    bool passed() const;
    std::string summary() const;
};

struct JmapOptions {
    std::size_t samples = 64;
    std::uint64_t seed = 1;
    GridSpace::Options grid{};
    bool use_bands = true;
    bool use_grid = true;
};

// Height of t under relation k: the longest chain of k-successors above it.
unsigned tree_rank(const JFrame& t, std::size_t k, int node);

JmapReport jmap_check(const MapExpr& f, const PolySpace& space, const JFrame& t, const JmapOptions& opt = {});

}  // namespace glp
