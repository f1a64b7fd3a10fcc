#include "glp/embed.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "glp/error.hpp"
#include "glp/grid.hpp"

namespace glp {

namespace {

using Op = MapExpr::Op;

// A subtree of the input frame whose relation k is the frame's relation base + k.
struct View {
    const JFrame* frame;
    NodeSet nodes;
    std::size_t base;

    std::size_t relations() const { return frame->modalities() - base; }
    bool rel(std::size_t k, int a, int b) const { return frame->related(base + k, a, b); }
    bool any_rel(std::size_t from, int a, int b) const {
        for (std::size_t k = from; k < relations(); ++k)
            if (rel(k, a, b)) return true;
        return false;
    }
    int root() const {
        for (int x : nodes) {
            bool has_pred = false;
            for (int y : nodes) has_pred = has_pred || any_rel(0, y, x);
            if (!has_pred) return x;
        }
        throw NotAJTree("subtree has no root");
    }
    // x and everything above it through relations >= from.
    NodeSet closure(int x, std::size_t from) const {
        NodeSet out{x};
        std::vector<int> todo{x};
        while (!todo.empty()) {
            const int a = todo.back();
            todo.pop_back();
            for (int b : nodes)
                if (!out.count(b) && any_rel(from, a, b)) {
                    out.insert(b);
                    todo.push_back(b);
                }
        }
        return out;
    }
    View sub(NodeSet ns) const { return {frame, std::move(ns), base}; }
};

struct Piece {
    Ordinal theta;
    MapExpr fmap;
    std::map<int, Ordinal> witnesses;
};

// x -> f(1 + ell^k(x)) on [1, e^k(theta)].
Piece lift(Piece inner, unsigned k) {
    if (k == 0 || inner.theta == Ordinal(1)) return inner;
    Piece out;
    out.theta = e_iter(k, inner.theta);
    out.fmap = MapExpr::step(Op::EllIter, k, MapExpr::step(Op::AddLeft, 1, inner.fmap));
    for (const auto& [node, w] : inner.witnesses) {
        if (w == Ordinal(1))
            out.witnesses[node] = 1;
        else if (w.is_finite())
            out.witnesses[node] = e_iter(k, left_subtract(Ordinal(1), w));
        else
            out.witnesses[node] = e_iter(k, w);
    }
    return out;
}

Piece single(int node) { return {1, MapExpr::constant(node), {{node, 1}}}; }

// gl embedding of the view under its relation 0.
Piece gl_view(const View& v, int t) {
    std::vector<int> children;
    for (int c : v.nodes) {
        if (!v.rel(0, t, c)) continue;
        bool immediate = true;
        for (int m : v.nodes) immediate = immediate && !(v.rel(0, t, m) && v.rel(0, m, c));
        if (immediate) children.push_back(c);
    }
    if (children.empty()) return single(t);
    Ordinal block;
    std::vector<MapExpr::Piece> cases;
    Piece out;
    for (int c : children) {
        Piece p = gl_view(v, c);
        const Ordinal start = block;
        block = block + p.theta;
        cases.push_back({BandSet::of(Band({Interval{succ(start), succ(block)}})),
                         MapExpr::step(Op::SubLeft, start, p.fmap)});
        for (const auto& [node, w] : p.witnesses) out.witnesses.emplace(node, start + w);
    }
    out.theta = block * Ordinal::omega();
    out.witnesses[t] = out.theta;
    out.fmap = MapExpr::dispatch(
        {{BandSet::of(Band::point(out.theta)), MapExpr::constant(t)},
         {BandSet::of(Band({Interval{Ordinal(1), out.theta}})),
          MapExpr::step(Op::CellOffset, block, MapExpr::dispatch(std::move(cases)))}});
    return out;
}

struct Builder {
    std::map<std::string, BandSet> algebra;
    bool top = true;

    Piece run(const View& v, std::vector<Ordinal> levels) {
        const bool outermost = top;
        top = false;
        if (levels.size() != v.relations()) throw IndexOutOfRange("one level per relation expected");
        const unsigned first = finite_level(levels[0]);
        if (first > 1) {
            for (Ordinal& l : levels) l = left_subtract(Ordinal(first - 1), l);
            return lift(run(v, levels), first - 1);
        }
        const int r = v.root();
        if (v.nodes.size() == 1) return single(r);
        if (levels.size() == 1) return gl_view(v, r);

        bool has_zero = false;
        for (int a : v.nodes)
            for (int b : v.nodes) has_zero = has_zero || v.rel(0, a, b);
        if (!has_zero) {
            std::vector<Ordinal> rest;
            for (std::size_t k = 1; k < levels.size(); ++k) rest.push_back(left_subtract(Ordinal(1), levels[k]));
            return lift(run(View{v.frame, v.nodes, v.base + 1}, rest), 1);
        }

        // Blocks above the root: the generated subtrees of its 0-successors
        // that start a 1-plane.
        struct Block {
            Ordinal kappa;
            Piece piece;
        };
        std::vector<Block> blocks;
        for (int x : v.nodes) {
            if (!v.rel(0, r, x)) continue;
            bool plane_root = true;
            for (int y : v.nodes) plane_root = plane_root && !v.any_rel(1, y, x);
            if (!plane_root) continue;
            Piece p = run(v.sub(v.closure(x, 0)), levels);
            blocks.push_back({p.theta, std::move(p)});
        }
        Piece base_part = run(v.sub(v.closure(r, 1)), levels);

        std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.kappa < b.kappa; });
        std::vector<Ordinal> kappas;
        for (const Block& b : blocks) kappas.push_back(b.kappa);
        const ProductStructure ps = product(kappas, base_part.theta);

        Piece out;
        out.theta = ps.theta;
        std::vector<MapExpr::Piece> by_block;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            const Ordinal start = i == 0 ? Ordinal() : ps.markers[i - 1];
            by_block.push_back({BandSet::of(Band({Interval{succ(start), succ(ps.markers[i])}})),
                                MapExpr::step(Op::SubLeft, start, blocks[i].piece.fmap)});
            const std::size_t p = ps.cell_of_block(i + 1);
            for (const auto& [node, w] : blocks[i].piece.witnesses)
                out.witnesses.emplace(node, ps.offsets[p] + ps.kappas.back() + w);
        }
        for (const auto& [node, w] : base_part.witnesses) out.witnesses[node] = omega_pow(ps.xi) * w;
        const MapExpr down = compose(MapExpr::dispatch(std::move(by_block)), ps.pi0);
        const MapExpr up = compose(base_part.fmap, ps.pi1);
        out.fmap = MapExpr::dispatch({{ps.x_down, down}, {ps.x_up, up}});
        if (outermost) {
            algebra["x_down"] = ps.x_down;
            algebra["x_up"] = ps.x_up;
            algebra["s_set"] = ps.s_set;
        }
        return out;
    }
};

void check_levels(const std::vector<Ordinal>& levels) {
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (!levels[k].is_finite()) throw UnsupportedSigma("level " + to_string(levels[k]) + " needs limit products");
        if (levels[k].is_zero()) throw UnsupportedSigma("levels must be nonzero");
        if (k > 0 && levels[k] <= levels[k - 1]) throw UnsupportedSigma("levels must increase");
    }
}

}  // namespace

GlEmbedding gl_embed(const JFrame& tree, std::size_t modality) {
    if (tree.size() == 0) throw EmptyTree("gl_embed needs a node");
    if (modality >= tree.modalities()) throw IndexOutOfRange("no relation " + std::to_string(modality));
    JFrame single(tree.size(), 1);
    for (int a = 0; a < static_cast<int>(tree.size()); ++a) {
        single.set_name(a, tree.name(a));
        for (int b = 0; b < static_cast<int>(tree.size()); ++b)
            if (tree.related(modality, a, b)) single.relate(0, a, b);
    }
    if (!is_jtree(single)) throw NotAJTree("relation " + std::to_string(modality) + " is not a tree");
    NodeSet all;
    for (int a = 0; a < static_cast<int>(tree.size()); ++a) all.insert(a);
    const View v{&single, all, 0};
    Piece p = gl_view(v, v.root());
    return {p.theta, p.fmap};
}

Ordinal theta_bound(const std::vector<Ordinal>& levels) {
    check_levels(levels);
    if (levels.empty()) throw IndexOutOfRange("no levels");
    return e_iter(finite_level(levels.back()) + 1, Ordinal(1));
}

Countermodel embed(const JFrame& tree, const std::vector<Ordinal>& levels) {
    if (tree.size() == 0) throw EmptyTree("embed needs a node");
    if (!is_jtree(tree)) throw NotAJTree("embed needs a J-tree");
    check_levels(levels);
    if (levels.size() != tree.modalities())
        throw IndexOutOfRange("the tree has " + std::to_string(tree.modalities()) + " relations but " +
                              std::to_string(levels.size()) + " levels were given");
    NodeSet all;
    for (int a = 0; a < static_cast<int>(tree.size()); ++a) all.insert(a);
    Builder b;
    Piece p = b.run(View{&tree, all, 0}, levels);

    Countermodel cm;
    cm.theta = p.theta;
    cm.levels = levels;
    for (const Ordinal& l : levels) cm.sigma.push_back(left_subtract(Ordinal(1), l));
    cm.tree = tree;
    cm.fmap = p.fmap;
    cm.witnesses = std::move(p.witnesses);
    cm.algebra = std::move(b.algebra);
    for (int a = 0; a < static_cast<int>(tree.size()); ++a) {
        try {
            cm.algebra["node " + tree.name(a)] = simplify(intersect(preimage(cm.fmap, NodeSet{a}), BandSet::of(Band::closed(1, cm.theta))));
        } catch (const NotRepresentable&) {
        }
    }
    return cm;
}

bool operator==(const Countermodel& a, const Countermodel& b) {
    if (a.algebra.size() != b.algebra.size()) return false;
    for (const auto& [name, s] : a.algebra) {
        auto it = b.algebra.find(name);
        if (it == b.algebra.end() || !equal(s, it->second)) return false;
    }
    return a.theta == b.theta && a.levels == b.levels && a.sigma == b.sigma && a.tree == b.tree && a.fmap == b.fmap &&
           a.valuation == b.valuation && a.witnesses == b.witnesses;
}

TopoValuation countermodel_valuation(const Countermodel& cm, const KripkeValuation& v) {
    const BandSet whole = BandSet::of(Band::closed(1, cm.theta));
    TopoValuation out;
    for (const auto& [var, nodes] : v) {
        BandSet acc;
        for (int t : nodes) {
            try {
                acc = unite(acc, intersect(preimage(cm.fmap, NodeSet{t}), whole));
            } catch (const NotRepresentable& e) {
                throw NotRepresentable("the preimage of node " + cm.tree.name(t) + " is no band set: " + e.what());
            }
        }
        out[var] = simplify(acc);
    }
    return out;
}

bool VerifyReport::passed() const {
    return std::all_of(stages.begin(), stages.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::summary() const {
    std::ostringstream os;
    for (const auto& c : stages) {
        os << c.name << ": " << (c.passed ? "pass" : "FAIL") << " [" << evidence_name(c.evidence) << "]";
        if (!c.detail.empty()) os << " " << c.detail;
        os << "\n";
    }
    return os.str();
}

namespace {

std::size_t formula_size(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::Var:
        case K::Top:
        case K::Bot: return 1;
        case K::Not:
        case K::Box:
        case K::Dia: return 1 + formula_size(f.left());
        default: return 1 + formula_size(f.left()) + formula_size(f.right());
    }
}

CheckResult topo_stage(const Countermodel& cm, const Formula& phi) {
    CheckResult r{"c topological truth at theta", Evidence::Exact, true, {}};
    KripkeValuation kv;
    for (unsigned i : variables(phi)) {
        auto it = cm.valuation.find(i);
        kv[i] = it == cm.valuation.end() ? NodeSet{} : it->second;
    }
    try {
        const BandSet truth = eval_topo(phi, cm.space(), countermodel_valuation(cm, kv));
        if (!member(cm.theta, truth)) {
            r.passed = false;
            r.detail = "theta is outside the extension";
        }
        return r;
    } catch (const NotRepresentable&) {
    } catch (const NonStabilizing&) {
    }
    if (!GridSpace::fits(cm.theta)) {
        r.evidence = Evidence::Skipped;
        r.detail = "valuation is no band set and theta exceeds w^3";
        return r;
    }
    r.evidence = Evidence::Grid;
    const GridSpace g(cm.theta);
    const std::vector<int> labels = grid_labels(g, cm.fmap);
    GridValuation gv;
    for (const auto& [i, nodes] : kv) gv[i] = grid_fiber(labels, nodes);
    try {
        if (!eval_grid(phi, g, cm.levels, gv)[g.top()]) {
            r.passed = false;
            r.detail = "theta is outside the extension";
        }
    } catch (const NotRepresentable& e) {
        r.evidence = Evidence::Skipped;
        r.detail = e.what();
    }
    return r;
}

}  // namespace

VerifyReport verify_countermodel(const Countermodel& cm, const Formula& phi, const VerifyOptions& opt) {
    const std::size_t work = expr_size(cm.fmap) * formula_size(phi);
    if (work > opt.budget)
        throw BudgetExceeded("verification needs " + std::to_string(work) + " units, budget is " + std::to_string(opt.budget));
    for (const Ordinal& i : modal_indices(phi)) {
        auto k = i.as_nat();
        if (!k || *k >= cm.levels.size()) throw IndexOutOfRange("modality " + to_string(i) + " has no relation");
    }
    VerifyReport rep;
    const int root = frame_root(cm.tree);
    const NodeSet kripke = eval_kripke(phi, cm.tree, cm.valuation);
    const NodeSet guarded = eval_kripke(monotonicity_guard(phi, cm.tree.modalities()), cm.tree, cm.valuation);
    CheckResult a{"a Kripke truth at the root", Evidence::Exact, true, {}};
    if (!kripke.count(root)) {
        a.passed = false;
        a.detail = "root " + cm.tree.name(root) + " falsifies the formula";
    } else if (!guarded.count(root)) {
        a.passed = false;
        a.detail = "root " + cm.tree.name(root) + " falsifies the monotonicity guard";
    }
    rep.stages.push_back(a);

    CheckResult b{"b J-map conditions", Evidence::Exact, true, {}};
    try {
        JmapOptions jo;
        jo.seed = opt.seed;
        const JmapReport jr = jmap_check(cm.fmap, cm.space(), cm.tree, jo);
        b.evidence = jr.evidence;
        b.passed = jr.passed();
        for (const auto& c : jr.checks)
            if (!c.passed) {
                b.detail = c.name + ": " + c.detail;
                break;
            }
    } catch (const Error& e) {
        b.passed = false;
        b.detail = e.what();
    }
    rep.stages.push_back(b);

    try {
        rep.stages.push_back(topo_stage(cm, phi));
    } catch (const Error& e) {
        rep.stages.push_back({"c topological truth at theta", Evidence::Exact, false, e.what()});
    }
    return rep;
}

nlohmann::json countermodel_to_json(const Countermodel& cm) {
    nlohmann::json j;
    j["theta"] = to_string(cm.theta);
    for (const Ordinal& l : cm.levels) j["levels"].push_back(to_string(l));
    for (const Ordinal& s : cm.sigma) j["sigma"].push_back(to_string(s));
    j["tree"] = frame_to_json(cm.tree);
    j["map"] = map_to_json(cm.fmap);
    j["valuation"] = valuation_to_json(cm.valuation, cm.tree);
    j["witnesses"] = nlohmann::json::object();
    for (const auto& [node, w] : cm.witnesses) j["witnesses"][cm.tree.name(node)] = to_string(w);
    j["algebra"] = nlohmann::json::object();
    for (const auto& [name, s] : cm.algebra) j["algebra"][name] = to_string(s);
    return j;
}

Countermodel countermodel_from_json(const nlohmann::json& j) {
    try {
        Countermodel cm;
        cm.theta = parse_ordinal(j.at("theta").get<std::string>());
        for (const auto& l : j.at("levels")) cm.levels.push_back(parse_ordinal(l.get<std::string>()));
        if (j.contains("sigma"))
            for (const auto& s : j.at("sigma")) cm.sigma.push_back(parse_ordinal(s.get<std::string>()));
        cm.tree = frame_from_json(j.at("tree"));
        cm.fmap = map_from_json(j.at("map"));
        if (j.contains("valuation")) cm.valuation = valuation_from_json(j.at("valuation"), cm.tree);
        if (j.contains("witnesses"))
            for (const auto& [name, w] : j.at("witnesses").items()) {
                const int node = cm.tree.find(name);
                if (node < 0) throw OutOfRange("witness for unknown node " + name);
                cm.witnesses[node] = parse_ordinal(w.get<std::string>());
            }
        if (j.contains("algebra"))
            for (const auto& [name, s] : j.at("algebra").items()) cm.algebra[name] = parse_bandset(s.get<std::string>());
        return cm;
    } catch (const nlohmann::json::exception& e) {
        throw OutOfRange(std::string("malformed countermodel: ") + e.what());
    }
}

}  // namespace glp
