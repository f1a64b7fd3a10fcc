#include "glp/jmap.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "glp/error.hpp"

namespace glp {

const char* evidence_name(Evidence e) {
    switch (e) {
        case Evidence::Exact: return "EXACT";
        case Evidence::Grid: return "EXACT-GRID";
        case Evidence::Sampled: return "SAMPLED";
        case Evidence::Skipped: return "SKIPPED";
    }
    return "?";
}

bool JmapReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string JmapReport::summary() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << c.name << ": " << (c.passed ? "pass" : "FAIL") << " [" << evidence_name(c.evidence) << "]";
        if (!c.detail.empty()) os << " " << c.detail;
        os << "\n";
    }
    return os.str();
}

unsigned tree_rank(const JFrame& t, std::size_t k, int node) {
    unsigned best = 0;
    for (int s : t.successors(k, node)) best = std::max(best, tree_rank(t, k, s) + 1);
    return best;
}

namespace {

struct BandAlgebra {
    using Set = BandSet;
    static constexpr Evidence evidence = Evidence::Exact;
    const MapExpr& f;
    Domain dom;

    Set full() const { return BandSet::full(dom); }
    Set pre(const NodeSet& nodes) const { return intersect(preimage(f, nodes), full()); }
    Set d(const Set& s, const Ordinal& level) const { return derived_set(s, finite_level(level), dom); }
    Set unite(const Set& a, const Set& b) const { return glp::unite(a, b); }
    Set inter(const Set& a, const Set& b) const { return intersect(a, b); }
    Set minus(const Set& a, const Set& b) const { return subtract(a, b); }
    bool empty(const Set& a) const { return is_empty(a); }
    std::string witness(const Set& a) const {
        auto w = min_witness(a);
        return w ? to_string(*w) : "?";
    }
};

struct GridAlgebra {
    using Set = GridSpace::Set;
    static constexpr Evidence evidence = Evidence::Grid;
    const GridSpace& g;
    std::vector<int> labels;

    Set full() const { return g.full(); }
    Set pre(const NodeSet& nodes) const {
        Set s = grid_fiber(labels, nodes);
        g.check_periodic(s);
        return s;
    }
    Set d(const Set& s, const Ordinal& level) const {
        Set out = g.derived(s, finite_level(level));
        g.check_periodic(out);
        return out;
    }
    Set unite(const Set& a, const Set& b) const { return grid_union(a, b); }
    Set inter(const Set& a, const Set& b) const { return grid_intersect(a, b); }
    Set minus(const Set& a, const Set& b) const { return grid_minus(a, b); }
    bool empty(const Set& a) const { return grid_empty(a); }
    std::string witness(const Set& a) const {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i]) return to_string(g.point(i));
        return "?";
    }
};

NodeSet predecessors(const JFrame& t, std::size_t k, int node) {
    NodeSet out;
    for (int a = 0; a < static_cast<int>(t.size()); ++a)
        if (t.related(k, a, node)) out.insert(a);
    return out;
}

template <class Alg>
std::vector<CheckResult> run_checks(const Alg& alg, const PolySpace& space, const JFrame& t) {
    using Set = typename Alg::Set;
    const int size = static_cast<int>(t.size());
    const std::size_t top = t.modalities() - 1;
    std::vector<Set> fiber;
    for (int x = 0; x < size; ++x) fiber.push_back(alg.pre({x}));
    auto pre = [&](const NodeSet& s) {
        Set out = alg.minus(alg.full(), alg.full());
        for (int x : s) out = alg.unite(out, fiber[static_cast<std::size_t>(x)]);
        return out;
    };
    auto result = [&](const char* name) { return CheckResult{name, Alg::evidence, true, {}}; };
    auto fail = [](CheckResult& r, const std::string& what) {
        if (r.passed) r.detail = what;
        r.passed = false;
    };
    std::vector<CheckResult> out;

    CheckResult total = result("total");
    {
        NodeSet all;
        for (int x = 0; x < size; ++x) all.insert(x);
        const Set missing = alg.minus(alg.full(), pre(all));
        if (!alg.empty(missing)) fail(total, "no node for " + alg.witness(missing));
        for (int x = 0; x < size; ++x)
            if (alg.empty(fiber[x])) fail(total, "node " + t.name(x) + " is never hit");
    }
    out.push_back(total);

    CheckResult j1 = result("j1 d-map at the top level");
    for (int x = 0; x < size; ++x) {
        const Set lhs = pre(predecessors(t, top, x));
        const Set rhs = alg.d(fiber[x], space.levels[top]);
        const Set diff = alg.unite(alg.minus(lhs, rhs), alg.minus(rhs, lhs));
        if (!alg.empty(diff)) fail(j1, "derived set of the fiber of " + t.name(x) + " is off at " + alg.witness(diff));
    }
    out.push_back(j1);

    CheckResult j2 = result("j2 openness");
    for (std::size_t k = 0; k <= top; ++k)
        for (int x = 0; x < size; ++x) {
            const Set limits = alg.d(fiber[x], space.levels[k]);
            for (int s : predecessors(t, k, x)) {
                const Set gap = alg.minus(fiber[s], limits);
                if (!alg.empty(gap))
                    fail(j2, t.name(s) + " <" + std::to_string(k) + " " + t.name(x) + " but " + alg.witness(gap) +
                                 " is no limit of the fiber of " + t.name(x));
            }
        }
    out.push_back(j2);

    CheckResult j3 = result("j3 cones are open");
    CheckResult j4 = result("j4 root fibers are discrete");
    for (std::size_t k = 0; k < top; ++k)
        for (int x : hereditary_roots(t, k)) {
            const Set cone = pre(upper_cone(t, k, x));
            for (const Set& u : {cone, alg.unite(cone, fiber[x])}) {
                const Set bad = alg.inter(u, alg.d(alg.minus(alg.full(), u), space.levels[k]));
                if (!alg.empty(bad))
                    fail(j3, "cone of " + t.name(x) + " at level " + std::to_string(k) + " not open at " + alg.witness(bad));
            }
            const Set bad = alg.inter(fiber[x], alg.d(fiber[x], space.levels[k]));
            if (!alg.empty(bad))
                fail(j4, "fiber of " + t.name(x) + " accumulates at " + alg.witness(bad) + " at level " + std::to_string(k));
        }
    out.push_back(j3);
    out.push_back(j4);
    return out;
}

std::vector<CheckResult> sampled_checks(const MapExpr& f, const PolySpace& space, const JFrame& t, const JmapOptions& opt) {
    const std::size_t top = t.modalities() - 1;
    const unsigned level = finite_level(space.levels[top]);
    std::vector<Ordinal> pts;
    for (const Ordinal& x : stratified_pool(space.theta))
        if (!x.is_zero() && x <= space.theta) pts.push_back(x);
    std::mt19937_64 rng(opt.seed);
    std::shuffle(pts.begin(), pts.end(), rng);
    if (pts.size() > opt.samples) pts.resize(opt.samples);
    pts.push_back(space.theta);

    CheckResult total{"total", Evidence::Sampled, true, {}};
    CheckResult j1{"j1 d-map at the top level", Evidence::Sampled, true, {}};
    for (const Ordinal& y : pts) {
        int node = -1;
        try {
            node = apply_node(f, y);
        } catch (const Error& e) {
            if (total.passed) total.detail = "undefined at " + to_string(y) + ": " + e.what();
            total.passed = false;
            continue;
        }
        if (node < 0 || node >= static_cast<int>(t.size())) {
            if (total.passed) total.detail = "no such node at " + to_string(y);
            total.passed = false;
            continue;
        }
        const Ordinal want = rank(y, level);
        const Ordinal got(static_cast<long long>(tree_rank(t, top, node)));
        if (want != got && j1.passed) {
            j1.passed = false;
            j1.detail = to_string(y) + " has rank " + to_string(want) + " but its image " + t.name(node) + " has rank " +
                        to_string(got);
        }
    }
    const std::string why = "needs representable fibers or theta <= w^3";
    return {total, j1, {"j2 openness", Evidence::Skipped, true, why}, {"j3 cones are open", Evidence::Skipped, true, why},
            {"j4 root fibers are discrete", Evidence::Skipped, true, why}};
}

}  // namespace

JmapReport jmap_check(const MapExpr& f, const PolySpace& space, const JFrame& t, const JmapOptions& opt) {
    if (!is_jtree(t)) throw NotAJTree("jmap_check needs a J-tree");
    if (space.levels.size() != t.modalities())
        throw IndexOutOfRange("the tree has " + std::to_string(t.modalities()) + " relations but the space " +
                              std::to_string(space.levels.size()) + " levels");
    JmapReport rep;
    if (opt.use_bands) {
        try {
            rep.checks = run_checks(BandAlgebra{f, space.domain()}, space, t);
            rep.evidence = Evidence::Exact;
            return rep;
        } catch (const NotRepresentable&) {
        }
    }
    if (opt.use_grid && GridSpace::fits(space.theta)) {
        try {
            const GridSpace g(space.theta, opt.grid);
            rep.checks = run_checks(GridAlgebra{g, grid_labels(g, f)}, space, t);
            rep.evidence = Evidence::Grid;
            return rep;
        } catch (const NotRepresentable&) {
        }
    }
    rep.checks = sampled_checks(f, space, t, opt);
    rep.evidence = Evidence::Sampled;
    return rep;
}

}  // namespace glp
