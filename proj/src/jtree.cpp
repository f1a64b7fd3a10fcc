#include "glp/jtree.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "glp/error.hpp"

namespace glp {

namespace {

int count(const JFrame& f) { return static_cast<int>(f.size()); }

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void join(int a, int b) { parent[find(a)] = find(b); }
};

// Classes of the equivalence generated by relations with index >= from.
void classes(const JFrame& f, std::size_t from, std::vector<NodeSet>& out, std::vector<int>& of) {
    const int n = count(f);
    UnionFind uf(n);
    for (std::size_t k = from; k < f.modalities(); ++k)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (f.related(k, a, b)) uf.join(a, b);
    std::map<int, int> index;
    of.assign(static_cast<std::size_t>(n), -1);
    out.clear();
    for (int a = 0; a < n; ++a) {
        auto [it, fresh] = index.emplace(uf.find(a), static_cast<int>(out.size()));
        if (fresh) out.emplace_back();
        out[static_cast<std::size_t>(it->second)].insert(a);
        of[static_cast<std::size_t>(a)] = it->second;
    }
}

unsigned finite_index(const Ordinal& i) {
    auto n = i.as_nat();
    if (!n || *n > 64) throw IndexOutOfRange("modality " + to_string(i) + " is not a small natural");
    return static_cast<unsigned>(*n);
}

}  // namespace

std::string FrameViolation::describe(const JFrame& f) const {
    std::ostringstream os;
    auto nm = [&](int a) { return f.name(a); };
    switch (kind) {
        case Kind::Reflexive: os << "irreflexivity: " << nm(x) << " <" << m << " " << nm(x); break;
        case Kind::NotTransitive:
            os << "transitivity: " << nm(x) << " <" << m << " " << nm(y) << " <" << m << " " << nm(z) << " but not "
               << nm(x) << " <" << m << " " << nm(z);
            break;
        case Kind::MonotoneI:
            os << "(I): " << nm(x) << " <" << n << " " << nm(y) << " but " << nm(z) << " is a <" << m
               << "-successor of only one of them";
            break;
        case Kind::MonotoneJ:
            os << "(J): " << nm(x) << " <" << m << " " << nm(y) << " <" << n << " " << nm(z) << " but not " << nm(x)
               << " <" << m << " " << nm(z);
            break;
    }
    return os.str();
}

FrameReport validate_jframe(const JFrame& f) {
    FrameReport r;
    const int n = count(f);
    const std::size_t mods = f.modalities();
    using K = FrameViolation::Kind;
    for (std::size_t k = 0; k < mods; ++k)
        for (int x = 0; x < n; ++x) {
            if (f.related(k, x, x)) r.violations.push_back({K::Reflexive, k, k, x, x, x});
            for (int y = 0; y < n; ++y)
                if (f.related(k, x, y))
                    for (int z = 0; z < n; ++z)
                        if (f.related(k, y, z) && !f.related(k, x, z))
                            r.violations.push_back({K::NotTransitive, k, k, x, y, z});
        }
    for (std::size_t hi = 1; hi < mods; ++hi)
        for (std::size_t lo = 0; lo < hi; ++lo)
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    for (int z = 0; z < n; ++z) {
                        if (f.related(hi, x, y) && f.related(lo, x, z) != f.related(lo, y, z))
                            r.violations.push_back({K::MonotoneI, lo, hi, x, y, z});
                        if (f.related(lo, x, y) && f.related(hi, y, z) && !f.related(lo, x, z))
                            r.violations.push_back({K::MonotoneJ, lo, hi, x, y, z});
                    }
    return r;
}

JFrame jclose(JFrame f) {
    const int n = count(f);
    const std::size_t mods = f.modalities();
    for (bool changed = true; changed;) {
        changed = false;
        auto add = [&](std::size_t k, int a, int b) {
            if (!f.related(k, a, b)) {
                f.relate(k, a, b);
                changed = true;
            }
        };
        f.close_transitively();
        for (std::size_t hi = 1; hi < mods; ++hi)
            for (std::size_t lo = 0; lo < hi; ++lo)
                for (int x = 0; x < n; ++x)
                    for (int y = 0; y < n; ++y)
                        for (int z = 0; z < n; ++z) {
                            if (f.related(hi, x, y) && f.related(lo, x, z)) add(lo, y, z);
                            if (f.related(hi, x, y) && f.related(lo, y, z)) add(lo, x, z);
                            if (f.related(lo, x, y) && f.related(hi, y, z)) add(lo, x, z);
                        }
    }
    return f;
}

PlaneDecomposition planes(const JFrame& f, std::size_t n) {
    if (!validate_jframe(f).valid()) throw InvalidFrame("planes: not a J-frame");
    PlaneDecomposition d;
    d.level = n;
    classes(f, n, d.planes, d.plane_of);
    classes(f, n + 1, d.subplanes, d.subplane_of);
    const std::size_t m = d.subplanes.size();
    d.precedes.assign(m, std::vector<char>(m, 0));
    if (n < f.modalities())
        for (int a = 0; a < count(f); ++a)
            for (int b = 0; b < count(f); ++b)
                if (f.related(n, a, b)) d.precedes[d.subplane_of[a]][d.subplane_of[b]] = 1;
    return d;
}

bool is_jtree(const JFrame& f) {
    if (f.size() == 0) return false;
    for (std::size_t n = 0; n < f.modalities(); ++n) {
        const PlaneDecomposition d = planes(f, n);
        if (n == 0 && d.planes.size() != 1) return false;
        const auto& pre = d.precedes;
        for (const NodeSet& plane : d.planes) {
            std::set<int> subs;
            for (int x : plane) subs.insert(d.subplane_of[x]);
            int roots = 0;
            for (int b : subs) {
                if (pre[b][b]) return false;
                std::vector<int> below;
                for (int a : subs)
                    if (pre[a][b]) below.push_back(a);
                if (below.empty()) ++roots;
                for (int a : below)
                    for (int c : below)
                        if (a != c && !pre[a][c] && !pre[c][a]) return false;
                for (int a : below)
                    for (int x : d.subplanes[a])
                        for (int y : d.subplanes[b])
                            if (!f.related(n, x, y)) return false;
            }
            if (roots != 1) return false;
        }
    }
    return true;
}

NodeSet hereditary_roots(const JFrame& f, std::size_t k) {
    NodeSet out;
    for (int x = 0; x < count(f); ++x) {
        bool root = true;
        for (std::size_t j = k + 1; j < f.modalities() && root; ++j)
            for (int y = 0; y < count(f) && root; ++y) root = !f.related(j, y, x);
        if (root) out.insert(x);
    }
    return out;
}

NodeSet upper_cone(const JFrame& f, std::size_t k, int x) {
    NodeSet seen;
    std::vector<int> todo{x};
    while (!todo.empty()) {
        const int a = todo.back();
        todo.pop_back();
        for (std::size_t j = k; j < f.modalities(); ++j)
            for (int b = 0; b < count(f); ++b)
                if (f.related(j, a, b) && seen.insert(b).second) todo.push_back(b);
    }
    seen.erase(x);
    return seen;
}

NodeSet generated(const JFrame& f, int x) {
    NodeSet out = upper_cone(f, 0, x);
    out.insert(x);
    return out;
}

JFrame monotone_closure(JFrame f) {
    const int n = static_cast<int>(f.size());
    for (std::size_t k = f.modalities(); k-- > 1;)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (f.related(k, a, b)) f.relate(k - 1, a, b);
    return f;
}

JFrame restrict_frame(const JFrame& f, const NodeSet& nodes) {
    const std::vector<int> keep(nodes.begin(), nodes.end());
    JFrame out(keep.size(), f.modalities());
    for (std::size_t i = 0; i < keep.size(); ++i) out.set_name(static_cast<int>(i), f.name(keep[i]));
    for (std::size_t k = 0; k < f.modalities(); ++k)
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (std::size_t j = 0; j < keep.size(); ++j)
                if (f.related(k, keep[i], keep[j])) out.relate(k, static_cast<int>(i), static_cast<int>(j));
    return out;
}

int frame_root(const JFrame& f) {
    int found = -1;
    for (int x = 0; x < count(f); ++x) {
        bool has_pred = false;
        for (std::size_t k = 0; k < f.modalities() && !has_pred; ++k)
            for (int y = 0; y < count(f) && !has_pred; ++y) has_pred = f.related(k, y, x);
        if (!has_pred) {
            if (found >= 0) return -1;
            found = x;
        }
    }
    return found;
}

Formula monotonicity_guard(const Formula& f, std::size_t modalities) {
    std::vector<std::pair<unsigned, Formula>> dias;
    std::function<void(const Formula&)> collect = [&](const Formula& g) {
        switch (g.kind()) {
            case Formula::Kind::Var:
            case Formula::Kind::Top:
            case Formula::Kind::Bot: return;
            case Formula::Kind::Not: collect(g.left()); return;
            case Formula::Kind::And:
            case Formula::Kind::Or:
            case Formula::Kind::Implies:
                collect(g.left());
                collect(g.right());
                return;
            case Formula::Kind::Dia:
            case Formula::Kind::Box: {
                const Formula body = g.kind() == Formula::Kind::Dia ? g.left() : Formula::neg(g.left());
                std::pair<unsigned, Formula> key{finite_index(g.index()), body};
                if (std::find(dias.begin(), dias.end(), key) == dias.end()) dias.push_back(key);
                collect(g.left());
                return;
            }
        }
    };
    collect(f);
    std::vector<Formula> parts;
    for (const auto& [i, body] : dias)
        for (unsigned j = i + 1; j < modalities; ++j)
            parts.push_back(Formula::implies(Formula::dia(j, body), Formula::dia(i, body)));
    if (parts.empty()) return Formula::top();
    const Formula m = Formula::conj_all(parts);
    std::vector<Formula> guarded{m};
    for (std::size_t i = 0; i < modalities; ++i) guarded.push_back(Formula::box(static_cast<long long>(i), m));
    return Formula::conj_all(guarded);
}

namespace {

// A root plane (one relation fewer) with J-trees hanging off it through relation 0.
JFrame graft(const JFrame& plane, const std::vector<const JFrame*>& children, std::size_t modalities) {
    std::size_t total = plane.size();
    for (auto* c : children) total += c->size();
    JFrame out(total, modalities);
    const int p = count(plane);
    for (std::size_t k = 0; k < plane.modalities(); ++k)
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b)
                if (plane.related(k, a, b)) out.relate(k + 1, a, b);
    int offset = p;
    for (auto* c : children) {
        for (std::size_t k = 0; k < modalities; ++k)
            for (int a = 0; a < count(*c); ++a)
                for (int b = 0; b < count(*c); ++b)
                    if (c->related(k, a, b)) out.relate(k, offset + a, offset + b);
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < count(*c); ++b) out.relate(0, a, offset + b);
        offset += count(*c);
    }
    return out;
}

class TreeCatalog {
public:
    const std::vector<JFrame>& get(std::size_t mods, std::size_t size) {
        auto key = std::make_pair(mods, size);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::vector<JFrame> out;
        if (mods == 0) {
            if (size == 1) out.emplace_back(1, 0);
        } else {
            for (std::size_t s0 = 1; s0 <= size; ++s0)
                for (const JFrame& plane : std::vector<JFrame>(get(mods - 1, s0))) {
                    std::vector<const JFrame*> kids;
                    forests(mods, size - s0, 1, 0, kids, [&] { out.push_back(graft(plane, kids, mods)); });
                }
        }
        return memo_[key] = std::move(out);
    }

private:
    // Multisets of J-trees with the given total size, listed by (size, index)
    // non-decreasing so that each multiset appears once.
    void forests(std::size_t mods, std::size_t left, std::size_t min_size, std::size_t min_index,
                 std::vector<const JFrame*>& kids, const std::function<void()>& emit) {
        if (left == 0) {
            emit();
            return;
        }
        for (std::size_t s = min_size; s <= left; ++s) {
            const std::size_t count = get(mods, s).size();
            for (std::size_t i = s == min_size ? min_index : 0; i < count; ++i) {
                kids.push_back(&get(mods, s)[i]);
                forests(mods, left - s, s, i, kids, emit);
                kids.pop_back();
            }
        }
    }

    std::map<std::pair<std::size_t, std::size_t>, std::vector<JFrame>> memo_;
};

// Formula compiled for evaluation over node bitmasks (at most 32 nodes).
class BitEvaluator {
public:
    BitEvaluator(const Formula& f, const std::vector<unsigned>& vars) {
        for (std::size_t i = 0; i < vars.size(); ++i) slot_[vars[i]] = i;
        compile(f);
    }

    void bind(const JFrame& frame) {
        n_ = count(frame);
        all_ = n_ == 32 ? ~0u : ((1u << n_) - 1);
        succ_.assign(frame.modalities(), std::vector<std::uint32_t>(static_cast<std::size_t>(n_), 0));
        for (std::size_t k = 0; k < frame.modalities(); ++k)
            for (int a = 0; a < n_; ++a)
                for (int b = 0; b < n_; ++b)
                    if (frame.related(k, a, b)) succ_[k][a] |= 1u << b;
    }

    std::uint32_t eval(const std::vector<std::uint32_t>& val) {
        stack_.clear();
        for (const Op& op : ops_) {
            std::uint32_t a = 0, b = 0;
            switch (op.code) {
                case Code::Var: stack_.push_back(val[op.arg]); break;
                case Code::Top: stack_.push_back(all_); break;
                case Code::Bot: stack_.push_back(0); break;
                case Code::Not: stack_.back() = ~stack_.back() & all_; break;
                case Code::And:
                    b = pop();
                    stack_.back() &= b;
                    break;
                case Code::Or:
                    b = pop();
                    stack_.back() |= b;
                    break;
                case Code::Implies:
                    b = pop();
                    a = pop();
                    stack_.push_back((~a & all_) | b);
                    break;
                case Code::Dia: stack_.back() = dia(op.arg, stack_.back()); break;
                case Code::Box: stack_.back() = ~dia(op.arg, ~stack_.back() & all_) & all_; break;
            }
        }
        return stack_.back();
    }

    std::size_t modalities_used() const { return max_mod_; }

private:
    enum class Code { Var, Top, Bot, Not, And, Or, Implies, Dia, Box };
    struct Op {
        Code code;
        std::size_t arg = 0;
    };

    std::uint32_t pop() {
        const std::uint32_t v = stack_.back();
        stack_.pop_back();
        return v;
    }

    std::uint32_t dia(std::size_t k, std::uint32_t s) const {
        std::uint32_t out = 0;
        if (k >= succ_.size()) return 0;
        for (int a = 0; a < n_; ++a)
            if (succ_[k][a] & s) out |= 1u << a;
        return out;
    }

    void compile(const Formula& g) {
        using FK = Formula::Kind;
        switch (g.kind()) {
            case FK::Var: ops_.push_back({Code::Var, slot_.at(g.var_index())}); return;
            case FK::Top: ops_.push_back({Code::Top}); return;
            case FK::Bot: ops_.push_back({Code::Bot}); return;
            case FK::Not:
                compile(g.left());
                ops_.push_back({Code::Not});
                return;
            case FK::And:
            case FK::Or:
            case FK::Implies:
                compile(g.left());
                compile(g.right());
                ops_.push_back({g.kind() == FK::And ? Code::And : g.kind() == FK::Or ? Code::Or : Code::Implies});
                return;
            case FK::Dia:
            case FK::Box: {
                compile(g.left());
                const std::size_t k = finite_index(g.index());
                max_mod_ = std::max(max_mod_, k + 1);
                ops_.push_back({g.kind() == FK::Dia ? Code::Dia : Code::Box, k});
                return;
            }
        }
    }

    std::map<unsigned, std::size_t> slot_;
    std::vector<Op> ops_;
    std::vector<std::uint32_t> stack_;
    std::vector<std::vector<std::uint32_t>> succ_;
    std::size_t max_mod_ = 0;
    int n_ = 0;
    std::uint32_t all_ = 0;
};

}  // namespace

std::vector<JFrame> enumerate_jtrees(std::size_t modalities, std::size_t size) {
    TreeCatalog cat;
    return cat.get(modalities, size);
}

SearchResult find_jtree_model(const Formula& phi, const SearchOptions& opt) {
    if (opt.max_nodes > 16) throw OutOfRange("search bound above 16 nodes");
    std::size_t mods = 1;
    for (const Ordinal& i : modal_indices(phi)) mods = std::max<std::size_t>(mods, finite_index(i) + 1);
    const Formula target = Formula::conj(phi, monotonicity_guard(phi, mods));
    const std::set<unsigned> var_set = variables(target);
    const std::vector<unsigned> vars(var_set.begin(), var_set.end());
    BitEvaluator ev(target, vars);

    SearchResult res;
    TreeCatalog cat;
    std::vector<std::uint32_t> val(vars.size());
    for (std::size_t size = 1; size <= opt.max_nodes; ++size) {
        for (const JFrame& tree : cat.get(mods, size)) {
            ev.bind(tree);
            const std::size_t bits = size * vars.size();
            if (bits >= 63) {
                res.exhausted = true;
                return res;
            }
            const std::uint64_t total = std::uint64_t{1} << bits;
            const std::uint32_t mask = (1u << size) - 1;
            for (std::uint64_t code = 0; code < total; ++code) {
                if (++res.evaluations > opt.budget) {
                    res.exhausted = true;
                    return res;
                }
                for (std::size_t v = 0; v < vars.size(); ++v)
                    val[v] = static_cast<std::uint32_t>(code >> (v * size)) & mask;
                if (ev.eval(val) & 1u) {
                    JTreeModel m{tree, 0, {}};
                    for (std::size_t v = 0; v < vars.size(); ++v)
                        for (int a = 0; a < static_cast<int>(size); ++a)
                            if (val[v] >> a & 1u) m.valuation[vars[v]].insert(a);
                    for (unsigned v : vars) m.valuation.try_emplace(v);
                    res.model = std::move(m);
                    return res;
                }
            }
        }
    }
    return res;
}

namespace {

nlohmann::json name_json(const std::string& name) {
    if (!name.empty() && name.size() < 10 && std::all_of(name.begin(), name.end(), ::isdigit) &&
        (name == "0" || name[0] != '0'))
        return std::stoi(name);
    return name;
}

int node_of(const nlohmann::json& j, const JFrame& f) {
    const std::string name = j.is_number_integer() ? std::to_string(j.get<long long>()) : j.get<std::string>();
    const int a = f.find(name);
    if (a < 0) throw InvalidFrame("unknown node " + name);
    return a;
}

}  // namespace

nlohmann::json frame_to_json(const JFrame& f) {
    nlohmann::json nodes = nlohmann::json::array(), rels = nlohmann::json::array();
    for (int a = 0; a < count(f); ++a) nodes.push_back(name_json(f.name(a)));
    for (std::size_t k = 0; k < f.modalities(); ++k) {
        nlohmann::json edges = nlohmann::json::array();
        for (int a = 0; a < count(f); ++a)
            for (int b = 0; b < count(f); ++b)
                if (f.related(k, a, b)) edges.push_back({name_json(f.name(a)), name_json(f.name(b))});
        rels.push_back(edges);
    }
    return {{"nodes", nodes}, {"rels", rels}};
}

JFrame frame_from_json(const nlohmann::json& j) {
    try {
        const auto& nodes = j.at("nodes");
        const auto& rels = j.at("rels");
        JFrame f(nodes.size(), rels.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const auto& n = nodes[i];
            f.set_name(static_cast<int>(i), n.is_number_integer() ? std::to_string(n.get<long long>()) : n.get<std::string>());
        }
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f.find(f.name(static_cast<int>(i))) != static_cast<int>(i)) throw InvalidFrame("duplicate node " + f.name(static_cast<int>(i)));
        for (std::size_t k = 0; k < rels.size(); ++k)
            for (const auto& e : rels[k]) f.relate(k, node_of(e.at(0), f), node_of(e.at(1), f));
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidFrame(std::string("malformed frame: ") + e.what());
    }
}

nlohmann::json valuation_to_json(const KripkeValuation& v, const JFrame& f) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [var, nodes] : v) {
        nlohmann::json arr = nlohmann::json::array();
        for (int a : nodes) arr.push_back(name_json(f.name(a)));
        out["p" + std::to_string(var)] = arr;
    }
    return out;
}

KripkeValuation valuation_from_json(const nlohmann::json& j, const JFrame& f) {
    KripkeValuation v;
    try {
        for (const auto& [key, arr] : j.items()) {
            if (key.size() < 2 || key[0] != 'p') throw InvalidFrame("bad variable name " + key);
            NodeSet& s = v[static_cast<unsigned>(std::stoul(key.substr(1)))];
            for (const auto& n : arr) s.insert(node_of(n, f));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidFrame(std::string("malformed valuation: ") + e.what());
    }
    return v;
}

}  // namespace glp
