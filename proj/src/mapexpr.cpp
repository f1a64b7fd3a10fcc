#include "glp/mapexpr.hpp"

#include <functional>

#include "glp/error.hpp"

namespace glp {

struct MapExpr::Node {
    Kind kind;
    int node = -1;
    Op op = Op::AddLeft;
    Ordinal param{};
    std::vector<MapExpr> then{};  // one entry for steps
    std::vector<Piece> pieces{};
};

MapExpr::MapExpr() : node_(std::make_shared<const Node>(Node{Kind::Identity})) {}

MapExpr MapExpr::identity() { return MapExpr(std::make_shared<const Node>(Node{Kind::Identity})); }

MapExpr MapExpr::constant(int node) {
    Node n{Kind::Const};
    n.node = node;
    return MapExpr(std::make_shared<const Node>(std::move(n)));
}

MapExpr MapExpr::step(Op op, const Ordinal& param, const MapExpr& then) {
    Node n{Kind::Step};
    n.op = op;
    n.param = param;
    n.then.push_back(then);
    return MapExpr(std::make_shared<const Node>(std::move(n)));
}

MapExpr MapExpr::dispatch(std::vector<Piece> pieces) {
    Node n{Kind::Dispatch};
    n.pieces = std::move(pieces);
    return MapExpr(std::make_shared<const Node>(std::move(n)));
}

MapExpr::Kind MapExpr::kind() const { return node_->kind; }
int MapExpr::node() const { return node_->node; }
MapExpr::Op MapExpr::op() const { return node_->op; }
const Ordinal& MapExpr::param() const { return node_->param; }
const MapExpr& MapExpr::then() const { return node_->then.at(0); }
const std::vector<MapExpr::Piece>& MapExpr::pieces() const { return node_->pieces; }

bool operator==(const MapExpr& a, const MapExpr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case MapExpr::Kind::Identity: return true;
        case MapExpr::Kind::Const: return a.node() == b.node();
        case MapExpr::Kind::Step:
            return a.op() == b.op() && a.param() == b.param() && a.then() == b.then();
        case MapExpr::Kind::Dispatch: return a.pieces() == b.pieces();
    }
    return false;
}

bool operator==(const MapExpr::Piece& a, const MapExpr::Piece& b) {
    return a.branch == b.branch && equal(a.region, b.region);
}

const char* op_name(MapExpr::Op op) {
    switch (op) {
        case MapExpr::Op::AddLeft: return "add_left";
        case MapExpr::Op::SubLeft: return "sub_left";
        case MapExpr::Op::EllIter: return "ell_iter";
        case MapExpr::Op::OtypUp: return "otyp_up";
        case MapExpr::Op::CellOffset: return "cell_offset";
    }
    return "?";
}

namespace {

MapExpr::Op op_from_name(const std::string& s) {
    for (auto op : {MapExpr::Op::AddLeft, MapExpr::Op::SubLeft, MapExpr::Op::EllIter, MapExpr::Op::OtypUp,
                    MapExpr::Op::CellOffset})
        if (s == op_name(op)) return op;
    throw OutOfRange("unknown map operation " + s);
}

// y with w^xi * y = x.
Ordinal divide_out_power(const Ordinal& xi, const Ordinal& x) {
    std::vector<Term> out;
    for (const Term& t : x.terms()) {
        if (t.exponent < xi) throw OutOfRange(to_string(x) + " is not a multiple of w^" + to_string(xi));
        out.push_back(Term{left_subtract(xi, t.exponent), t.coefficient});
    }
    return from_normal_terms(std::move(out));
}

}  // namespace

Ordinal apply_op(MapExpr::Op op, const Ordinal& g, const Ordinal& x) {
    switch (op) {
        case MapExpr::Op::AddLeft: return g + x;
        case MapExpr::Op::SubLeft:
            if (x <= g) throw OutOfRange(to_string(x) + " is not above " + to_string(g));
            return left_subtract(g, x);
        case MapExpr::Op::EllIter: return ell_iter(g, x);
        case MapExpr::Op::OtypUp: return divide_out_power(g, x);
        case MapExpr::Op::CellOffset: {
            const Division d = divide(x, g);
            if (!d.remainder.is_zero()) return d.remainder;
            if (d.quotient.is_zero() || d.quotient.is_limit())
                throw OutOfRange(to_string(x) + " has no offset modulo " + to_string(g));
            return g;
        }
    }
    return x;
}

MapValue apply(const MapExpr& f, const Ordinal& x) {
    switch (f.kind()) {
        case MapExpr::Kind::Identity: return x;
        case MapExpr::Kind::Const: return f.node();
        case MapExpr::Kind::Step: {
            const Ordinal y = apply_op(f.op(), f.param(), x);
            return apply(f.then(), y);
        }
        case MapExpr::Kind::Dispatch:
            for (const auto& p : f.pieces())
                if (member(x, p.region)) return apply(p.branch, x);
            throw OutOfRange("no case covers " + to_string(x));
    }
    return x;
}

int apply_node(const MapExpr& f, const Ordinal& x) {
    const MapValue v = apply(f, x);
    if (!std::holds_alternative<int>(v)) throw OutOfRange("map yields an ordinal at " + to_string(x));
    return std::get<int>(v);
}

MapExpr compose(const MapExpr& outer, const MapExpr& inner) {
    switch (inner.kind()) {
        case MapExpr::Kind::Identity: return outer;
        case MapExpr::Kind::Const: return inner;
        case MapExpr::Kind::Step: return MapExpr::step(inner.op(), inner.param(), compose(outer, inner.then()));
        case MapExpr::Kind::Dispatch: {
            std::vector<MapExpr::Piece> ps;
            for (const auto& p : inner.pieces()) ps.push_back({p.region, compose(outer, p.branch)});
            return MapExpr::dispatch(std::move(ps));
        }
    }
    return inner;
}

namespace {

Band positive() { return Band({Interval{Ordinal(1), std::nullopt}}); }

std::optional<Ordinal> add_hi(const Ordinal& g, const std::optional<Ordinal>& hi) {
    if (!hi) return std::nullopt;
    return g + *hi;
}

std::vector<Interval> levels_of(const Band& b, std::size_t at_least) {
    std::vector<Interval> ls = b.levels();
    while (ls.size() < at_least) ls.push_back(Interval::all());
    return ls;
}

// Positive arguments only; the caller handles 0.
std::optional<Band> pull_add_left(const Ordinal& g, const Band& b) {
    std::vector<Interval> ls = levels_of(b, 1);
    Interval& base = ls[0];
    if (base.hi && *base.hi <= g) return std::nullopt;
    const Ordinal lo = base.lo <= g ? Ordinal(1) : std::max(Ordinal(1), left_subtract(g, base.lo));
    std::optional<Ordinal> hi;
    if (base.hi) hi = left_subtract(g, *base.hi);
    base = Interval{lo, hi};
    return Band(std::move(ls));
}

Band pull_sub_left(const Ordinal& g, const Band& b) {
    std::vector<Interval> ls = levels_of(b, 1);
    ls[0] = intersect(Interval{g + ls[0].lo, add_hi(g, ls[0].hi)}, Interval{succ(g), std::nullopt});
    return Band(std::move(ls));
}

// x = w^xi * y. Levels above the first agree with those of y unless y is a
// successor, where ell(x) = xi pins everything above.
std::vector<Band> pull_otyp_up(const Ordinal& xi, const Band& b) {
    std::vector<Band> out;
    const Ordinal unit = omega_pow(xi);
    const Interval& base = b.level(0);
    const Interval x_base{unit * base.lo, base.hi ? std::optional<Ordinal>(unit * *base.hi) : std::nullopt};
    const Interval& l1 = b.level(1);
    if (auto lim = intersect(l1, Interval{Ordinal(1), std::nullopt}); !lim.trivially_empty()) {
        std::vector<Interval> ls = levels_of(b, 2);
        ls[0] = x_base;
        ls[1] = Interval{xi + lim.lo, add_hi(xi, lim.hi)};
        out.emplace_back(std::move(ls));
    }
    bool zero_everywhere = true;
    for (std::size_t k = 1; k < std::max<std::size_t>(2, b.depth()); ++k)
        zero_everywhere = zero_everywhere && b.level(k).contains(Ordinal());
    if (zero_everywhere) out.emplace_back(std::vector<Interval>{x_base, Interval::closed(xi, xi)});
    return out;
}

}  // namespace

BandSet pull_back(MapExpr::Op op, const Ordinal& g, const BandSet& values) {
    std::vector<Band> out;
    switch (op) {
        case MapExpr::Op::AddLeft:
            for (const auto& b : values.bands()) {
                if (auto p = pull_add_left(g, b)) out.push_back(*p);
                if (b.contains(g)) out.push_back(Band::point(0));
            }
            break;
        case MapExpr::Op::SubLeft:
            for (const auto& b : values.bands()) out.push_back(pull_sub_left(g, b));
            break;
        case MapExpr::Op::EllIter: {
            const auto k = g.as_nat();
            if (!k) throw UnsupportedLevel("transfinite ell iteration in a map");
            for (const auto& b : values.bands()) out.push_back(b.lift(k->convert_to<std::size_t>()));
            break;
        }
        case MapExpr::Op::OtypUp:
            for (const auto& b : values.bands())
                for (auto& p : pull_otyp_up(g, b)) out.push_back(std::move(p));
            break;
        case MapExpr::Op::CellOffset: {
            // The offset keeps every ell-level of x, so a preimage exists only
            // when the value set within (0, g] is cut out by ell-levels alone.
            const BandSet cell = BandSet::of(Band::closed(1, g));
            const BandSet inside = intersect(values, cell);
            std::vector<Band> loose;
            for (const auto& b : inside.bands()) loose.push_back(b.with_level(0, Interval::all()));
            if (!equal(intersect(BandSet(loose), cell), inside)) {
                // Band by band, a point may still be the only one of its ell-value in the cell.
                loose.clear();
                for (const auto& b : inside.bands()) {
                    Band l = b.with_level(0, Interval::all());
                    if (b.depth() == 1 && b.level(0).hi && *b.level(0).hi == succ(b.level(0).lo)) {
                        const Ordinal e = ell(b.level(0).lo);
                        l = Band({Interval::all(), Interval::closed(e, e)});
                    }
                    if (!equal(intersect(BandSet::of(l), cell), BandSet::of(b)))
                        throw NotRepresentable("values " + to_string(values) + " are not periodic modulo " + to_string(g));
                    loose.push_back(std::move(l));
                }
            }
            const Band domain({Interval{Ordinal(1), std::nullopt}, Interval{Ordinal(), succ(big_l(g))}});
            for (const auto& b : loose) out.push_back(intersect(b, domain));
            break;
        }
    }
    return simplify(BandSet(std::move(out)));
}

namespace {

using Target = std::variant<NodeSet, BandSet>;

BandSet pre(const MapExpr& f, const Target& target) {
    switch (f.kind()) {
        case MapExpr::Kind::Identity:
            if (!std::holds_alternative<BandSet>(target)) throw OutOfRange("ordinal-valued map asked for node preimage");
            return std::get<BandSet>(target);
        case MapExpr::Kind::Const:
            if (!std::holds_alternative<NodeSet>(target)) throw OutOfRange("node-valued map asked for band preimage");
            return std::get<NodeSet>(target).count(f.node()) ? BandSet::of(Band()) : BandSet();
        case MapExpr::Kind::Step: return pull_back(f.op(), f.param(), pre(f.then(), target));
        case MapExpr::Kind::Dispatch: {
            BandSet out;
            BandSet earlier;
            for (const auto& p : f.pieces()) {
                out = unite(out, subtract(intersect(p.region, pre(p.branch, target)), earlier));
                earlier = unite(earlier, p.region);
            }
            return simplify(out);
        }
    }
    return {};
}

}  // namespace

BandSet preimage(const MapExpr& f, const NodeSet& nodes) {
    return simplify(intersect(pre(f, nodes), BandSet::of(positive())));
}
BandSet preimage(const MapExpr& f, const BandSet& values) {
    return simplify(intersect(pre(f, values), BandSet::of(positive())));
}

std::size_t expr_size(const MapExpr& f) {
    switch (f.kind()) {
        case MapExpr::Kind::Identity:
        case MapExpr::Kind::Const: return 1;
        case MapExpr::Kind::Step: return 1 + expr_size(f.then());
        case MapExpr::Kind::Dispatch: {
            std::size_t n = 1;
            for (const auto& p : f.pieces()) n += expr_size(p.branch);
            return n;
        }
    }
    return 1;
}

std::string to_string(const MapExpr& f) {
    switch (f.kind()) {
        case MapExpr::Kind::Identity: return "id";
        case MapExpr::Kind::Const: return "node " + std::to_string(f.node());
        case MapExpr::Kind::Step:
            return to_string(f.then()) + " . " + op_name(f.op()) + "(" + to_string(f.param()) + ")";
        case MapExpr::Kind::Dispatch: {
            std::string s = "{";
            for (const auto& p : f.pieces()) {
                if (s.size() > 1) s += " | ";
                s += to_string(p.region) + " -> " + to_string(p.branch);
            }
            return s + "}";
        }
    }
    return "?";
}

nlohmann::json map_to_json(const MapExpr& f) {
    switch (f.kind()) {
        case MapExpr::Kind::Identity: return {{"map", "identity"}};
        case MapExpr::Kind::Const: return {{"map", "const"}, {"node", f.node()}};
        case MapExpr::Kind::Step:
            return {{"map", "step"},
                    {"op", op_name(f.op())},
                    {"param", to_string(f.param())},
                    {"then", map_to_json(f.then())}};
        case MapExpr::Kind::Dispatch: {
            nlohmann::json ps = nlohmann::json::array();
            for (const auto& p : f.pieces()) ps.push_back({{"region", to_string(p.region)}, {"then", map_to_json(p.branch)}});
            return {{"map", "dispatch"}, {"pieces", ps}};
        }
    }
    return {};
}

MapExpr map_from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("map").get<std::string>();
        if (kind == "identity") return MapExpr::identity();
        if (kind == "const") return MapExpr::constant(j.at("node").get<int>());
        if (kind == "step")
            return MapExpr::step(op_from_name(j.at("op").get<std::string>()), parse_ordinal(j.at("param").get<std::string>()),
                                 map_from_json(j.at("then")));
        if (kind == "dispatch") {
            std::vector<MapExpr::Piece> ps;
            for (const auto& p : j.at("pieces"))
                ps.push_back({parse_bandset(p.at("region").get<std::string>()), map_from_json(p.at("then"))});
            return MapExpr::dispatch(std::move(ps));
        }
        throw OutOfRange("unknown map kind " + kind);
    } catch (const nlohmann::json::exception& e) {
        throw OutOfRange(std::string("malformed map: ") + e.what());
    }
}

}  // namespace glp
