#include "glp/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <random>
#include <sstream>

#include "glp/error.hpp"

namespace glp {

struct Formula::Node {
    Kind kind;
    unsigned var = 0;
    Ordinal index;
    std::optional<Formula> left, right;
};

namespace {

int precedence(Formula::Kind k) {
    switch (k) {
        case Formula::Kind::Implies: return 1;
        case Formula::Kind::Or: return 2;
        case Formula::Kind::And: return 3;
        case Formula::Kind::Not:
        case Formula::Kind::Box:
        case Formula::Kind::Dia: return 4;
        default: return 5;
    }
}

}  // namespace

Formula Formula::var(unsigned i) { return Formula(std::make_shared<const Node>(Node{Kind::Var, i, {}, {}, {}})); }
Formula Formula::top() { return Formula(std::make_shared<const Node>(Node{Kind::Top, 0, {}, {}, {}})); }
Formula Formula::bot() { return Formula(std::make_shared<const Node>(Node{Kind::Bot, 0, {}, {}, {}})); }
Formula Formula::neg(const Formula& a) { return Formula(std::make_shared<const Node>(Node{Kind::Not, 0, {}, a, {}})); }
Formula Formula::conj(const Formula& a, const Formula& b) {
    return Formula(std::make_shared<const Node>(Node{Kind::And, 0, {}, a, b}));
}
Formula Formula::disj(const Formula& a, const Formula& b) {
    return Formula(std::make_shared<const Node>(Node{Kind::Or, 0, {}, a, b}));
}
Formula Formula::implies(const Formula& a, const Formula& b) {
    return Formula(std::make_shared<const Node>(Node{Kind::Implies, 0, {}, a, b}));
}
Formula Formula::box(const Ordinal& index, const Formula& a) {
    return Formula(std::make_shared<const Node>(Node{Kind::Box, 0, index, a, {}}));
}
Formula Formula::dia(const Ordinal& index, const Formula& a) {
    return Formula(std::make_shared<const Node>(Node{Kind::Dia, 0, index, a, {}}));
}

Formula Formula::conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

Formula::Kind Formula::kind() const { return node_->kind; }
unsigned Formula::var_index() const { return node_->var; }
const Ordinal& Formula::index() const { return node_->index; }
const Formula& Formula::left() const { return *node_->left; }
const Formula& Formula::right() const { return *node_->right; }

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Formula::Kind::Var: return a.var_index() == b.var_index();
        case Formula::Kind::Top:
        case Formula::Kind::Bot: return true;
        case Formula::Kind::Not: return a.left() == b.left();
        case Formula::Kind::Box:
        case Formula::Kind::Dia: return a.index() == b.index() && a.left() == b.left();
        default: return a.left() == b.left() && a.right() == b.right();
    }
}

namespace {

class FormulaParser {
public:
    explicit FormulaParser(std::string_view s) : s_(s) {}

    Formula parse() {
        Formula f = implication();
        if (peek() != '\0') fail("trailing input");
        return f;
    }

private:
    Formula implication() {
        Formula lhs = disjunction();
        if (peek() == '-') {
            if (s_.substr(pos_, 2) != "->") fail("expected '->'");
            pos_ += 2;
            return Formula::implies(lhs, implication());
        }
        return lhs;
    }

    Formula disjunction() {
        Formula acc = conjunction();
        while (accept('|')) acc = Formula::disj(acc, conjunction());
        return acc;
    }

    Formula conjunction() {
        Formula acc = unary();
        while (accept('&')) acc = Formula::conj(acc, unary());
        return acc;
    }

    Formula unary() {
        if (accept('~')) return Formula::neg(unary());
        if (accept('[')) {
            Ordinal i = parse_ordinal_prefix(s_, pos_);
            expect(']');
            return Formula::box(i, unary());
        }
        if (accept('<')) {
            Ordinal i = parse_ordinal_prefix(s_, pos_);
            expect('>');
            return Formula::dia(i, unary());
        }
        return atom();
    }

    Formula atom() {
        const char c = peek();
        if (c == 'T') {
            ++pos_;
            return Formula::top();
        }
        if (c == 'F') {
            ++pos_;
            return Formula::bot();
        }
        if (c == 'p') {
            ++pos_;
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected variable number");
            if (pos_ - start > 6) fail("variable number too large");
            return Formula::var(static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
        }
        if (accept('(')) {
            Formula f = implication();
            expect(')');
            return f;
        }
        fail(c ? std::string("unexpected '") + c + "'" : std::string("unexpected end of input"));
    }

    char peek() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& what) { throw SyntaxError(what, pos_); }

    std::string_view s_;
    std::size_t pos_ = 0;
};

void print(const Formula& f, int min_prec, std::string& out) {
    const int p = precedence(f.kind());
    const bool wrap = p < min_prec;
    if (wrap) out += '(';
    switch (f.kind()) {
        case Formula::Kind::Var: out += "p" + std::to_string(f.var_index()); break;
        case Formula::Kind::Top: out += 'T'; break;
        case Formula::Kind::Bot: out += 'F'; break;
        case Formula::Kind::Not:
            out += '~';
            print(f.left(), 4, out);
            break;
        case Formula::Kind::Box:
            out += "[" + to_string(f.index()) + "]";
            print(f.left(), 4, out);
            break;
        case Formula::Kind::Dia:
            out += "<" + to_string(f.index()) + ">";
            print(f.left(), 4, out);
            break;
        case Formula::Kind::And:
            print(f.left(), 3, out);
            out += " & ";
            print(f.right(), 4, out);
            break;
        case Formula::Kind::Or:
            print(f.left(), 2, out);
            out += " | ";
            print(f.right(), 3, out);
            break;
        case Formula::Kind::Implies:
            print(f.left(), 2, out);
            out += " -> ";
            print(f.right(), 1, out);
            break;
    }
    if (wrap) out += ')';
}

template <class Fn>
void visit(const Formula& f, Fn&& fn) {
    fn(f);
    switch (f.kind()) {
        case Formula::Kind::Var:
        case Formula::Kind::Top:
        case Formula::Kind::Bot: return;
        case Formula::Kind::Not:
        case Formula::Kind::Box:
        case Formula::Kind::Dia: visit(f.left(), fn); return;
        default:
            visit(f.left(), fn);
            visit(f.right(), fn);
    }
}

std::size_t modality_position(const Ordinal& index, std::size_t count) {
    auto n = index.as_nat();
    if (!n || *n >= count)
        throw IndexOutOfRange("modality " + to_string(index) + " has no interpretation among " + std::to_string(count));
    return n->convert_to<std::size_t>();
}

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

std::string to_string(const Formula& f) {
    std::string out;
    print(f, 0, out);
    return out;
}

std::set<unsigned> variables(const Formula& f) {
    std::set<unsigned> out;
    visit(f, [&](const Formula& g) {
        if (g.kind() == Formula::Kind::Var) out.insert(g.var_index());
    });
    return out;
}

std::set<Ordinal> modal_indices(const Formula& f) {
    std::set<Ordinal> out;
    visit(f, [&](const Formula& g) {
        if (g.kind() == Formula::Kind::Box || g.kind() == Formula::Kind::Dia) out.insert(g.index());
    });
    return out;
}

unsigned modal_depth(const Formula& f) {
    switch (f.kind()) {
        case Formula::Kind::Var:
        case Formula::Kind::Top:
        case Formula::Kind::Bot: return 0;
        case Formula::Kind::Not: return modal_depth(f.left());
        case Formula::Kind::Box:
        case Formula::Kind::Dia: return 1 + modal_depth(f.left());
        default: return std::max(modal_depth(f.left()), modal_depth(f.right()));
    }
}

Condensed condense(const Formula& f) {
    const std::set<Ordinal> idx = modal_indices(f);
    std::vector<Ordinal> sigma(idx.begin(), idx.end());
    std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
        switch (g.kind()) {
            case Formula::Kind::Var:
            case Formula::Kind::Top:
            case Formula::Kind::Bot: return g;
            case Formula::Kind::Not: return Formula::neg(go(g.left()));
            case Formula::Kind::Box:
            case Formula::Kind::Dia: {
                const auto pos = std::lower_bound(sigma.begin(), sigma.end(), g.index()) - sigma.begin();
                const Ordinal k(static_cast<long long>(pos));
                return g.kind() == Formula::Kind::Box ? Formula::box(k, go(g.left())) : Formula::dia(k, go(g.left()));
            }
            case Formula::Kind::And: return Formula::conj(go(g.left()), go(g.right()));
            case Formula::Kind::Or: return Formula::disj(go(g.left()), go(g.right()));
            case Formula::Kind::Implies: return Formula::implies(go(g.left()), go(g.right()));
        }
        return g;
    };
    return {go(f), sigma};
}

BandSet eval_topo(const Formula& f, const PolySpace& space, const TopoValuation& v) {
    const Domain dom = space.domain();
    std::vector<unsigned> levels;
    for (const auto& l : space.levels) levels.push_back(finite_level(l));
    std::function<BandSet(const Formula&)> go = [&](const Formula& g) -> BandSet {
        switch (g.kind()) {
            case Formula::Kind::Var: {
                auto it = v.find(g.var_index());
                if (it == v.end()) throw UnboundVariable("p" + std::to_string(g.var_index()) + " has no value");
                return intersect(it->second, BandSet::full(dom));
            }
            case Formula::Kind::Top: return BandSet::full(dom);
            case Formula::Kind::Bot: return {};
            case Formula::Kind::Not: return complement_within(go(g.left()), dom);
            case Formula::Kind::And: return intersect(go(g.left()), go(g.right()));
            case Formula::Kind::Or: return unite(go(g.left()), go(g.right()));
            case Formula::Kind::Implies: return unite(complement_within(go(g.left()), dom), go(g.right()));
            case Formula::Kind::Dia:
                return derived_set(go(g.left()), levels[modality_position(g.index(), levels.size())], dom);
            case Formula::Kind::Box: {
                const unsigned lv = levels[modality_position(g.index(), levels.size())];
                return complement_within(derived_set(complement_within(go(g.left()), dom), lv, dom), dom);
            }
        }
        return {};
    };
    return go(f);
}

NodeSet eval_kripke(const Formula& f, const JFrame& frame, const KripkeValuation& v) {
    const int n = static_cast<int>(frame.size());
    NodeSet all;
    for (int i = 0; i < n; ++i) all.insert(i);
    auto complement = [&](const NodeSet& s) {
        NodeSet out;
        std::set_difference(all.begin(), all.end(), s.begin(), s.end(), std::inserter(out, out.end()));
        return out;
    };
    auto pre = [&](std::size_t k, const NodeSet& s) {
        NodeSet out;
        for (int a = 0; a < n; ++a)
            for (int b : s)
                if (frame.related(k, a, b)) {
                    out.insert(a);
                    break;
                }
        return out;
    };
    std::function<NodeSet(const Formula&)> go = [&](const Formula& g) -> NodeSet {
        switch (g.kind()) {
            case Formula::Kind::Var: {
                auto it = v.find(g.var_index());
                if (it == v.end()) throw UnboundVariable("p" + std::to_string(g.var_index()) + " has no value");
                return it->second;
            }
            case Formula::Kind::Top: return all;
            case Formula::Kind::Bot: return {};
            case Formula::Kind::Not: return complement(go(g.left()));
            case Formula::Kind::And: {
                NodeSet a = go(g.left()), b = go(g.right()), out;
                std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
                return out;
            }
            case Formula::Kind::Or: {
                NodeSet a = go(g.left());
                NodeSet b = go(g.right());
                a.insert(b.begin(), b.end());
                return a;
            }
            case Formula::Kind::Implies: {
                NodeSet a = complement(go(g.left()));
                NodeSet b = go(g.right());
                a.insert(b.begin(), b.end());
                return a;
            }
            case Formula::Kind::Dia: return pre(modality_position(g.index(), frame.modalities()), go(g.left()));
            case Formula::Kind::Box:
                return complement(pre(modality_position(g.index(), frame.modalities()), complement(go(g.left()))));
        }
        return {};
    };
    return go(f);
}

std::vector<Ordinal> stratified_pool(const Ordinal& theta) {
    const Ordinal w = Ordinal::omega();
    const std::vector<Ordinal> exps{0, 1, 2, 3, w, w + Ordinal(1), w * Ordinal(2)};
    const std::vector<Ordinal> tails{0, 1, 2, w, w + Ordinal(1), omega_pow(2), omega_pow(w)};
    std::set<Ordinal> pts{theta};
    for (const auto& e : exps)
        for (long long c = 1; c <= 3; ++c)
            for (const auto& t : tails) {
                Ordinal x = omega_pow(e) * Ordinal(c) + t;
                if (x <= theta) pts.insert(x);
            }
    return {pts.begin(), pts.end()};
}

TopoValuation random_valuation(std::uint64_t seed, const PolySpace& space, const std::set<unsigned>& vars) {
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const auto pool = stratified_pool(space.theta);
    const Ordinal w = Ordinal::omega();
    const std::vector<std::optional<Ordinal>> cuts{std::nullopt, Ordinal(0), Ordinal(1), Ordinal(2), Ordinal(3), w};
    const std::size_t max_level = std::max<std::size_t>(space.levels.size() + 1, 2);
    TopoValuation out;
    for (unsigned var : vars) {
        std::vector<Band> bands;
        const int n = uni(1, 3);
        for (int i = 0; i < n; ++i) {
            Ordinal a = pool[static_cast<std::size_t>(uni(0, static_cast<int>(pool.size()) - 1))];
            Ordinal b = pool[static_cast<std::size_t>(uni(0, static_cast<int>(pool.size()) - 1))];
            if (b < a) std::swap(a, b);
            Band band = Band::closed(a, b);
            for (std::size_t k = 1; k <= max_level; ++k) {
                if (uni(0, 2) == 0) continue;
                int lo = uni(0, static_cast<int>(cuts.size()) - 2);
                int hi = uni(lo + 1, static_cast<int>(cuts.size()));
                std::optional<Ordinal> upper = hi == static_cast<int>(cuts.size()) ? std::nullopt : cuts[hi];
                band = band.with_level(k, Interval::left_open(cuts[lo], upper));
            }
            bands.push_back(std::move(band));
        }
        out[var] = intersect(BandSet(std::move(bands)), BandSet::full(space.domain()));
    }
    return out;
}

Formula random_formula(std::uint64_t seed, unsigned vars, unsigned modalities, unsigned depth) {
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    std::function<Formula(unsigned)> go = [&](unsigned d) -> Formula {
        const int choice = d == 0 ? uni(0, 1) : uni(0, 7);
        switch (choice) {
            case 0:
            case 1: {
                const int v = uni(-1, static_cast<int>(vars) - 1);
                if (v >= 0) return Formula::var(static_cast<unsigned>(v));
                return uni(0, 1) ? Formula::top() : Formula::bot();
            }
            case 2: return Formula::neg(go(d - 1));
            case 3: return Formula::conj(go(d - 1), go(d - 1));
            case 4: return Formula::disj(go(d - 1), go(d - 1));
            case 5: return Formula::implies(go(d - 1), go(d - 1));
            case 6: return Formula::dia(uni(0, static_cast<int>(modalities) - 1), go(d - 1));
            default: return Formula::box(uni(0, static_cast<int>(modalities) - 1), go(d - 1));
        }
    };
    return go(depth);
}

const char* schema_name(Schema s) {
    switch (s) {
        case Schema::K: return "distribution";
        case Schema::Lob: return "lob";
        case Schema::Monotone: return "monotonicity";
        case Schema::Persistence: return "persistence";
    }
    return "?";
}

Formula schema_instance(Schema s, unsigned xi, unsigned zeta, const Formula& a, const Formula& b) {
    using F = Formula;
    const Ordinal x(xi), z(zeta);
    switch (s) {
        case Schema::K: return F::implies(F::box(x, F::implies(a, b)), F::implies(F::box(x, a), F::box(x, b)));
        case Schema::Lob: return F::implies(F::box(x, F::implies(F::box(x, a), a)), F::box(x, a));
        case Schema::Monotone: return F::implies(F::box(x, a), F::box(z, a));
        case Schema::Persistence: return F::implies(F::dia(x, a), F::box(z, F::dia(x, a)));
    }
    return F::top();
}

bool AxiomReport::all_valid() const {
    return std::all_of(schemas.begin(), schemas.end(), [](const SchemaReport& r) { return r.failures == 0; });
}

AxiomReport check_axioms(const PolySpace& space, unsigned trials, std::uint64_t seed) {
    AxiomReport report;
    const unsigned m = static_cast<unsigned>(space.levels.size());
    for (Schema s : {Schema::K, Schema::Lob, Schema::Monotone, Schema::Persistence}) report.schemas.push_back({s, 0, 0, {}});
    if (m == 0) return report;
    const BandSet full = BandSet::full(space.domain());
    std::mt19937_64 rng(seed);
    for (unsigned t = 0; t < trials; ++t) {
        const TopoValuation v = random_valuation(rng(), space, {0, 1});
        for (auto& r : report.schemas) {
            const bool two = r.schema == Schema::Monotone || r.schema == Schema::Persistence;
            if (two && m < 2) continue;
            unsigned xi = static_cast<unsigned>(rng() % m);
            unsigned zeta = xi;
            if (two) {
                xi = static_cast<unsigned>(rng() % (m - 1));
                zeta = xi + 1 + static_cast<unsigned>(rng() % (m - 1 - xi));
            }
            const Formula a = random_formula(rng(), 2, m, 1);
            const Formula b = random_formula(rng(), 2, m, 1);
            const Formula inst = schema_instance(r.schema, xi, zeta, a, b);
            ++r.instances;
            if (!equal(eval_topo(inst, space, v), full)) {
                if (r.failures++ == 0) {
                    std::ostringstream os;
                    os << to_string(inst) << " with";
                    for (const auto& [var, set] : v) os << " p" << var << " = " << to_string(set) << ";";
                    r.counterexample = os.str();
                }
            }
        }
    }
    return report;
}

std::optional<Ordinal> probe_lower_to_higher(const PolySpace& space, const BandSet& p) {
    const Formula probe = Formula::implies(Formula::dia(0, Formula::var(0)), Formula::dia(1, Formula::var(0)));
    const BandSet holds = eval_topo(probe, space, {{0, p}});
    return min_witness(complement_within(holds, space.domain()));
}

Formula tree_formula(const JFrame& tree, int root, std::size_t modality) {
    using F = Formula;
    const int n = static_cast<int>(tree.size());
    const Ordinal k(static_cast<long long>(modality));
    auto p = [](int t) { return F::var(static_cast<unsigned>(t)); };
    auto below = [&](int s, int t) { return tree.related(modality, s, t); };
    std::vector<F> parts{p(root)};
    for (int s = 0; s < n; ++s)
        if (s != root) parts.push_back(F::neg(p(s)));
    for (int t = 0; t < n; ++t)
        if (t != root) parts.push_back(F::dia(k, p(t)));
    std::vector<F> any;
    for (int t = 0; t < n; ++t) any.push_back(p(t));
    parts.push_back(F::box(k, F::disj_all(any)));
    parts.push_back(F::box(k, F::neg(p(root))));
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            if (s != t) parts.push_back(F::box(k, F::implies(p(s), F::neg(p(t)))));
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            if (below(s, t))
                parts.push_back(F::box(k, F::implies(p(s), F::dia(k, p(t)))));
            else
                parts.push_back(F::box(k, F::implies(p(s), F::neg(F::dia(k, p(t))))));
        }
    for (int t = 0; t < n; ++t) {
        std::vector<F> above;
        for (int s = 0; s < n; ++s)
            if (below(t, s)) above.push_back(p(s));
        parts.push_back(F::box(k, F::implies(p(t), F::box(k, F::disj_all(above)))));
    }
    return F::conj_all(parts);
}

std::vector<Formula> gamma_fragment(unsigned n) {
    using F = Formula;
    std::vector<F> out{F::dia(0, F::var(0))};
    for (unsigned i = 0; i < n; ++i) out.push_back(F::box(0, F::implies(F::var(i), F::dia(0, F::var(i + 1)))));
    return out;
}

}  // namespace glp
