#include <doctest.h>

#include "glp/error.hpp"
#include "glp/grid.hpp"
#include "support/gen.hpp"

using namespace glp;
using glp::testing::Rng;

namespace {

Ordinal P(const char* s) { return parse_ordinal(s); }
Formula phi(const char* s) { return parse_formula(s); }

GridSpace::Set on_grid(const GridSpace& g, const BandSet& s) {
    return g.where([&](const Ordinal& x) { return member(x, s); });
}

}  // namespace

TEST_CASE("grid layout") {
    const GridSpace g(P("w^2+w*2+3"));
    CHECK(g.point(g.top()) == P("w^2+w*2+3"));
    CHECK(g.point(0) == Ordinal(1));
    const GridSpace cube(omega_pow(3));
    CHECK(cube.point(cube.top()) == omega_pow(3));
    CHECK(GridSpace(Ordinal(1)).size() == 1);
    CHECK_THROWS_AS(GridSpace(P("w^3+1")), OutOfRange);
    CHECK_FALSE(GridSpace::fits(P("w^w")));
}

TEST_CASE("grid derivative matches band derivative") {
    Rng rng(41);
    const std::vector<Ordinal> pool{0, 1, 2, 3, 5, P("w"), P("w+3"), P("w*2"), P("w*4+1"), P("w^2"), P("w^2+w"), P("w^2*2"), P("w^3")};
    for (const char* theta : {"w", "w*3+2", "w^2", "w^2*2+w*2+3", "w^3"}) {
        const GridSpace g(P(theta));
        const Domain dom{1, P(theta)};
        for (int trial = 0; trial < 40; ++trial) {
            const BandSet s = intersect(glp::testing::random_bandset(rng, pool, 3, 2, 3), BandSet::full(dom));
            const GridSpace::Set gs = on_grid(g, s);
            g.check_periodic(gs);
            for (unsigned level : {1u, 2u}) {
                INFO(theta << " level " << level << " set " << to_string(s));
                CHECK(g.derived(gs, level) == on_grid(g, derived_set(s, level, dom)));
            }
        }
    }
}

TEST_CASE("grid evaluation matches band evaluation") {
    Rng rng(7);
    for (const char* theta : {"w^2+w", "w^3"}) {
        const PolySpace sp{P(theta), {1, 2}};
        const GridSpace g(sp.theta);
        for (int trial = 0; trial < 30; ++trial) {
            const TopoValuation v = random_valuation(rng(), sp, {0, 1});
            GridValuation gv;
            for (const auto& [k, s] : v) gv[k] = on_grid(g, s);
            const Formula f = random_formula(rng(), 2, 2, 3);
            INFO(to_string(f));
            CHECK(eval_grid(f, g, sp.levels, gv) == on_grid(g, eval_topo(f, sp, v)));
        }
    }
}

TEST_CASE("grid notices sets that do not settle") {
    const GridSpace g(P("w^2"));
    // A set that is empty past a late cut is invisible to the window rule.
    const GridSpace::Set late = g.where([](const Ordinal& x) { return x.finite_part() == 20; });
    CHECK_THROWS_AS(g.check_periodic(late), NotRepresentable);
    const GridSpace::Set odd = g.where([](const Ordinal& x) { return x.finite_part() % 2 == 1; });
    CHECK_NOTHROW(g.check_periodic(odd));
    const GridSpace::Set d = g.derived(odd, 1);
    CHECK(d == g.where([](const Ordinal& x) { return x.is_limit(); }));
    CHECK(eval_grid(phi("<0>p0"), g, {1}, {{0, odd}}) == d);
    CHECK_THROWS_AS(g.derived(odd, 0), UnsupportedLevel);
}
