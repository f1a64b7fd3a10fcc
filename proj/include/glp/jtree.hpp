#pragma once

// Finite polymodal frames: the J-frame conditions, planes, J-trees and a
// bounded search for J-tree models of a formula.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "glp/frame.hpp"
#include "glp/logic.hpp"

namespace glp {

struct FrameViolation {
    enum class Kind { Reflexive, NotTransitive, MonotoneI, MonotoneJ };
    Kind kind;
    std::size_t m = 0, n = 0;  // relation indices involved
    int x = 0, y = 0, z = 0;
    std::string describe(const JFrame& f) const;
};

struct FrameReport {
    std::vector<FrameViolation> violations;
    bool valid() const { return violations.empty(); }
};

FrameReport validate_jframe(const JFrame& f);
// Adds the edges that transitivity, (I) and (J) force, until nothing changes.
// The result may still be invalid (a forced loop).
JFrame jclose(JFrame f);
// Relation k becomes the union of relations k, k+1, ...; truth along J-maps
// transfers for this frame, whose relations shrink as the index grows.
JFrame monotone_closure(JFrame f);

struct PlaneDecomposition {
    std::size_t level = 0;
    std::vector<NodeSet> planes;     // the level-planes
    std::vector<int> plane_of;       // node -> index into planes
    std::vector<NodeSet> subplanes;  // the (level+1)-planes
    std::vector<int> subplane_of;
    // precedes[a][b]: some x in subplane a relates to some y in subplane b at `level`.
    std::vector<std::vector<char>> precedes;
};

// Relations with index >= the frame's modality count are empty, so planes past
// the top level are singletons.
PlaneDecomposition planes(const JFrame& f, std::size_t n);
bool is_jtree(const JFrame& f);

// x is a hereditary (k+1)-root when nothing reaches it through a relation of
// index > k, i.e. it is the root of its (k+1)-plane.
NodeSet hereditary_roots(const JFrame& f, std::size_t k);
// Everything reachable from x through relations of index >= k.
NodeSet upper_cone(const JFrame& f, std::size_t k, int x);
// x together with everything above it through any relation.
NodeSet generated(const JFrame& f, int x);
// The subframe on `nodes`; node names carry over.
JFrame restrict_frame(const JFrame& f, const NodeSet& nodes);
// The unique node with no predecessor, or -1.
int frame_root(const JFrame& f);

// Conjunction of <j>a -> <i>a over diamonds <i>a in f and i < j < modalities,
// boxed at every modality as well. J proves guard(f) -> f exactly when GLP
// proves f, and J-maps carry f from a root satisfying f and its guard.
Formula monotonicity_guard(const Formula& f, std::size_t modalities);

// J-trees with `modalities` relations and `size` nodes, up to isomorphism, root 0.
std::vector<JFrame> enumerate_jtrees(std::size_t modalities, std::size_t size);

struct JTreeModel {
    JFrame tree;
    int node = 0;
    KripkeValuation valuation;
};

struct SearchOptions {
    std::size_t max_nodes = 5;
    // Cap on valuation evaluations; the search gives up once it is spent.
    std::size_t budget = 50'000'000;
};

struct SearchResult {
    std::optional<JTreeModel> model;
    bool exhausted = false;  // budget ran out before the bound was covered
    std::size_t evaluations = 0;
};

// Looks for a J-tree whose root satisfies phi and its monotonicity guard, so
// that a hit certifies GLP-consistency. Absence means unknown.
SearchResult find_jtree_model(const Formula& phi, const SearchOptions& opt = {});

nlohmann::json frame_to_json(const JFrame& f);
JFrame frame_from_json(const nlohmann::json& j);
nlohmann::json valuation_to_json(const KripkeValuation& v, const JFrame& f);
KripkeValuation valuation_from_json(const nlohmann::json& j, const JFrame& f);

}  // namespace glp
