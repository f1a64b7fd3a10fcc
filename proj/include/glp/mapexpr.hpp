#pragma once

// Symbolic maps out of ordinal intervals: chains of ordinal operations ending
// in the identity (an ordinal-valued map) or in a tree node, with case splits
// over band sets.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "glp/frame.hpp"
#include "glp/ordinal.hpp"
#include "glp/topology.hpp"

namespace glp {

class MapExpr {
public:
    enum class Kind { Identity, Const, Step, Dispatch };
    enum class Op {
        AddLeft,     // x -> g + x
        SubLeft,     // x -> -g + x, for x > g
        EllIter,     // x -> ell^g(x)
        OtypUp,      // w^g * y -> y, for ell(x) >= g
        CellOffset,  // g * q + s -> s with 0 < s <= g
    };
    struct Piece;

    MapExpr();  // the identity
    static MapExpr identity();
    static MapExpr constant(int node);
    // x -> then(op(x))
    static MapExpr step(Op op, const Ordinal& param, const MapExpr& then);
    // The first piece whose region holds x decides; regions should not overlap.
    static MapExpr dispatch(std::vector<Piece> pieces);

    Kind kind() const;
    int node() const;
    Op op() const;
    const Ordinal& param() const;
    const MapExpr& then() const;
    const std::vector<Piece>& pieces() const;

    friend bool operator==(const MapExpr& a, const MapExpr& b);

private:
    struct Node;
    explicit MapExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct MapExpr::Piece {
    BandSet region;
    MapExpr branch;
    friend bool operator==(const Piece& a, const Piece& b);
};

const char* op_name(MapExpr::Op op);
Ordinal apply_op(MapExpr::Op op, const Ordinal& param, const Ordinal& x);

using MapValue = std::variant<Ordinal, int>;
MapValue apply(const MapExpr& f, const Ordinal& x);
// apply for node-valued maps; throws OutOfRange otherwise.
int apply_node(const MapExpr& f, const Ordinal& x);

// x -> outer(inner(x)); inner must be ordinal-valued wherever it is used.
MapExpr compose(const MapExpr& outer, const MapExpr& inner);

// Exact preimages among positive ordinals. Throw NotRepresentable when the
// preimage is no finite union of bands.
BandSet preimage(const MapExpr& f, const NodeSet& nodes);
BandSet preimage(const MapExpr& f, const BandSet& values);
// Pullback of a set of values through one operation. Arguments range over all
// ordinals where the operation is defined, 0 included.
BandSet pull_back(MapExpr::Op op, const Ordinal& param, const BandSet& values);

std::size_t expr_size(const MapExpr& f);
std::string to_string(const MapExpr& f);

nlohmann::json map_to_json(const MapExpr& f);
MapExpr map_from_json(const nlohmann::json& j);

}  // namespace glp
