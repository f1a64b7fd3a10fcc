#pragma once

// Countermodels on ordinal intervals: maps from [1, theta] with consecutive
// Icard levels onto finite J-trees, built by recursion over the tree's planes.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "glp/jmap.hpp"
#include "glp/jtree.hpp"
#include "glp/logic.hpp"
#include "glp/mapexpr.hpp"

namespace glp {

struct GlEmbedding {
    Ordinal theta;
    MapExpr fmap;
};

// d-map from ([1, theta], order topology) onto the tree under relation
// `modality`, the root going to theta. Children of a node are laid out
// cyclically along the omega-blocks below it.
GlEmbedding gl_embed(const JFrame& tree, std::size_t modality = 0);

// One cell of the down part: [alpha, beta], its first half copying the largest
// block and its second half the block of `kind`.
struct Cell {
    Ordinal alpha;
    Ordinal beta;
    std::size_t kind;  // 1-based block index
};

struct ProductStructure {
    std::vector<Ordinal> kappas;   // ascending
    Ordinal lambda;
    std::vector<Ordinal> markers;  // partial sums: markers[i-1] is the top of block i
    std::vector<Ordinal> offsets;  // cell boundaries within one group, offsets.back() = period
    Ordinal period;
    Ordinal xi;
    Ordinal theta;
    BandSet x_down;
    BandSet x_up;
    MapExpr pi0;  // x_down onto [1, sum of kappas]
    MapExpr pi1;  // x_up onto [1, lambda]
    BandSet s_set;

    std::size_t blocks() const { return kappas.size(); }
    // Cell w*b + n for b < lambda.
    Cell cell(const Ordinal& index) const;
    // The position within a group of the cell whose top maps to marker i.
    std::size_t cell_of_block(std::size_t i) const;
    // A point of (below, u] sent to marker i, for u in x_up.
    Ordinal density_witness(std::size_t i, const Ordinal& u, const Ordinal& below) const;
};

// kappas need not be sorted; they are sorted on the way in.
ProductStructure product(std::vector<Ordinal> kappas, const Ordinal& lambda);

struct Countermodel {
    Ordinal theta;
    std::vector<Ordinal> levels;  // Icard level of each relation
    std::vector<Ordinal> sigma;   // modality indices the relations stand for
    JFrame tree;
    MapExpr fmap;
    KripkeValuation valuation;
    std::map<int, Ordinal> witnesses;  // one preimage per node
    std::map<std::string, BandSet> algebra;

    PolySpace space() const { return {theta, levels}; }
    friend bool operator==(const Countermodel&, const Countermodel&);
};

// levels: strictly increasing finite Icard levels, one per relation of the tree.
Countermodel embed(const JFrame& tree, const std::vector<Ordinal>& levels);

// The bound theta < e^(top level + 1)(1) every constructed model meets.
Ordinal theta_bound(const std::vector<Ordinal>& levels);

TopoValuation countermodel_valuation(const Countermodel& cm, const KripkeValuation& v);

struct VerifyReport {
    std::vector<CheckResult> stages;
    bool passed() const;
    std::string summary() const;
};

struct VerifyOptions {
    std::size_t budget = 200000;  // cap on map size times formula size
    std::size_t samples = 48;
    std::uint64_t seed = 1;
};

// phi uses modalities 0..n matching the tree's relations.
VerifyReport verify_countermodel(const Countermodel& cm, const Formula& phi, const VerifyOptions& opt = {});

nlohmann::json countermodel_to_json(const Countermodel& cm);
Countermodel countermodel_from_json(const nlohmann::json& j);

}  // namespace glp
