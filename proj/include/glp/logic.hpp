#pragma once

// GLP formulas, their topological and Kripke semantics, and formula generators.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "glp/frame.hpp"
#include "glp/ordinal.hpp"
#include "glp/topology.hpp"

namespace glp {

class Formula {
public:
    enum class Kind { Var, Top, Bot, Not, And, Or, Implies, Box, Dia };

    static Formula var(unsigned i);
    static Formula top();
    static Formula bot();
    static Formula neg(const Formula& a);
    static Formula conj(const Formula& a, const Formula& b);
    static Formula disj(const Formula& a, const Formula& b);
    static Formula implies(const Formula& a, const Formula& b);
    static Formula box(const Ordinal& index, const Formula& a);
    static Formula dia(const Ordinal& index, const Formula& a);
    // Folds with T / F as the empty case.
    static Formula conj_all(const std::vector<Formula>& fs);
    static Formula disj_all(const std::vector<Formula>& fs);

    Kind kind() const;
    unsigned var_index() const;
    const Ordinal& index() const;
    const Formula& left() const;   // the operand of unary nodes
    const Formula& right() const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);

std::set<unsigned> variables(const Formula& f);
std::set<Ordinal> modal_indices(const Formula& f);
unsigned modal_depth(const Formula& f);

struct Condensed {
    Formula formula;
    std::vector<Ordinal> sigma;
};
Condensed condense(const Formula& f);

// Modality k is read as the Icard topology at levels[k] on [1, theta].
struct PolySpace {
    Ordinal theta;
    std::vector<Ordinal> levels;
    Domain domain() const { return Domain{1, theta}; }
};

using TopoValuation = std::map<unsigned, BandSet>;
using KripkeValuation = std::map<unsigned, NodeSet>;

BandSet eval_topo(const Formula& f, const PolySpace& space, const TopoValuation& v);
NodeSet eval_kripke(const Formula& f, const JFrame& frame, const KripkeValuation& v);

// Endpoint pool for random valuations: successors and limits of every small
// ell-rank below theta.
std::vector<Ordinal> stratified_pool(const Ordinal& theta);
TopoValuation random_valuation(std::uint64_t seed, const PolySpace& space, const std::set<unsigned>& vars);
Formula random_formula(std::uint64_t seed, unsigned vars, unsigned modalities, unsigned depth);

enum class Schema { K, Lob, Monotone, Persistence };
const char* schema_name(Schema s);
Formula schema_instance(Schema s, unsigned xi, unsigned zeta, const Formula& a, const Formula& b);

struct SchemaReport {
    Schema schema;
    unsigned instances = 0;
    unsigned failures = 0;
    std::string counterexample;  // formula and valuation of the first failure
};
struct AxiomReport {
    std::vector<SchemaReport> schemas;
    bool all_valid() const;
};
AxiomReport check_axioms(const PolySpace& space, unsigned trials, std::uint64_t seed);

// The probe <0>p -> <1>p fails when p is the set of successors: omega is an
// order limit of successors but not an I_2 limit of them. Returns a point
// outside the probe's extension, if any.
std::optional<Ordinal> probe_lower_to_higher(const PolySpace& space, const BandSet& p);

// Characteristic formula of a finite tree under relation `modality` (node 0 is the
// root unless `root` says otherwise); variable p_t names node t.
Formula tree_formula(const JFrame& tree, int root = 0, std::size_t modality = 0);
std::vector<Formula> gamma_fragment(unsigned n);

}  // namespace glp
