#include <doctest.h>

#include "glp/error.hpp"
#include "glp/topology.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace glp;
using glp::testing::Rng;

namespace {

Ordinal P(const char* s) { return parse_ordinal(s); }
BandSet S(const char* s) { return parse_bandset(s); }
Domain upto(const char* s) { return Domain{1, P(s)}; }

const std::vector<Ordinal>& pool() {
    static const std::vector<Ordinal> p = glp::testing::cubic_universe();
    return p;
}

}  // namespace

TEST_CASE("membership") {
    const BandSet succs = S("[1,w^2] & l^1 in (-1,0]");
    CHECK(member(5, succs));
    CHECK_FALSE(member(Ordinal::omega(), succs));
    CHECK(member(Ordinal::omega(), S("[1,w^2]")));
    CHECK(member(P("w^2"), S("[1,w^2]")));
    CHECK_FALSE(member(P("w^2+1"), S("[1,w^2]")));
}

TEST_CASE("boolean operations") {
    const Domain d = upto("w^2");
    const BandSet succs = S("[1,w^2] & l^1 in (-1,0]");
    const BandSet lims = complement_within(succs, d);
    CHECK(equal(lims, S("[1,w^2] & l^1 in (0,inf)")));
    CHECK(is_empty(intersect(succs, BandSet{})));
    CHECK(equal(unite(succs, lims), BandSet::full(d)));
    CHECK(to_string(unite(succs, lims)) == "[1,w^2]");
}

TEST_CASE("emptiness and least witnesses") {
    CHECK(is_empty(S("[1,w] & l in (1,2]")));
    CHECK_FALSE(is_empty(S("[1,w^2] & l in (0,1]")));
    CHECK(is_empty(BandSet::of(Band({Interval{P("w"), Ordinal(3)}}))));
    CHECK(min_witness(S("[1,w^w] & l in (0,1]")) == Ordinal::omega());
    CHECK(min_witness(S("[1,w^w] & l^2 in (0,1]")) == P("w^w"));
    CHECK_FALSE(min_witness(BandSet{}));
    // Brute force over a grid: the least member is the least grid point inside.
    Rng rng(23);
    const auto grid = glp::testing::quadratic_grid(6);
    for (int i = 0; i < 300; ++i) {
        Band b = glp::testing::random_band(rng, pool(), 2, 2);
        std::optional<Ordinal> brute;
        for (const auto& y : grid)
            if (!y.is_zero() && b.contains(y)) {
                brute = y;
                break;
            }
        auto got = least_at_or_above(b, 0);
        if (brute)
            CHECK(got == brute);
        else
            CHECK((!got || *got > grid.back()));
        if (got) CHECK(b.contains(*got));
    }
}

TEST_CASE("rank") {
    CHECK(rank(P("w^3*2"), 1) == Ordinal(3));
    CHECK(rank(5, 1) == Ordinal(0));
    CHECK(rank(P("w^w"), 2) == Ordinal(1));
    CHECK(rank(P("w+2"), 0) == P("w+2"));
    CHECK(rank(3, 0) == Ordinal(2));
}

TEST_CASE("openness") {
    CHECK(is_open(S("[w+1,w*2]"), 1, upto("w^2")));
    CHECK_FALSE(is_open(S("{w}"), 1, upto("w^2")));
    CHECK(is_open(S("[w,w] & l in (0,1]"), 2, upto("w^2")));
    CHECK(is_open(S("[1,w*3]"), 0, upto("w^2")));
    CHECK_FALSE(is_open(S("[3,w]"), 0, upto("w^2")));
}

TEST_CASE("derived sets") {
    const Domain d = upto("w^2");
    CHECK(equal(derived_set(S("[1,w^2] & l in (-1,0]"), 1, d), S("[1,w^2] & l in (0,inf)")));
    CHECK(is_empty(derived_set(BandSet{}, 2, d)));
    CHECK(is_empty(derived_set(S("[1,w^w] & l in (0,1]"), 2, upto("w^w"))));
    CHECK(equal(derived_set(S("[1,w^w] & l in (0,1]"), 1, upto("w^w")), S("[1,w^w] & l in (1,inf)")));
    CHECK(equal(derived_set(S("[1,5]"), 0, d), S("[2,w^2]")));
}

TEST_CASE("iterated derived sets") {
    CHECK(equal(derived_iter(S("[1,w^2]"), 1, 2, upto("w^2")), S("{w^2}")));
    const BandSet s = S("[2,w*3] & l in (-1,0]");
    CHECK(equal(derived_iter(s, 1, 0, upto("w^2")), s));
    const Domain d = upto("w^w");
    CHECK(equal(derived_iter(BandSet::full(d), 1, Ordinal::omega(), d), S("[1,w^w] & l in [w,inf)")));
    CHECK(is_empty(derived_iter(BandSet::full(d), 1, P("w+1"), d)));
    CHECK(equal(derived_iter(BandSet::full(d), 2, Ordinal::omega(), d), S("[1,w^w] & l^2 in [w,inf)")));
    CHECK_THROWS_AS(derived_iter(BandSet::full(d), 1, P("w^2"), d), UnsupportedLevel);
}

TEST_CASE("scatteredness") {
    // Only tops that carry the largest rank of their domain at every level.
    for (const char* theta : {"7", "w^2", "w^3*2", "w^w", "w^w*2", "w^(w*2)"})
        for (unsigned lambda = 0; lambda <= 3; ++lambda) {
            const Domain d = upto(theta);
            if (lambda == 0 && !d.hi.is_finite()) continue;
            const Ordinal top = rank(d.hi, lambda);
            const BandSet before = derived_iter(BandSet::full(d), lambda, top, d);
            CHECK_FALSE(is_empty(before));
            INFO("theta=" << theta << " lambda=" << lambda);
            CHECK(is_empty(derived_iter(BandSet::full(d), lambda, succ(top), d)));
        }
}

TEST_CASE("separating neighbourhoods") {
    const Domain d = upto("w^w");
    CHECK(equal(separating_nbhd(Ordinal::omega(), 1, d), S("[1,w]")));
    CHECK(equal(separating_nbhd(5, 1, d), S("{5}")));
    CHECK(equal(separating_nbhd(P("w^w"), 2, d), S("[1,w^w] & l in (0,w]")));
    Rng rng(29);
    const auto grid = glp::testing::quadratic_grid(5);
    for (int i = 0; i < 60; ++i) {
        const Ordinal x = glp::testing::random_positive(rng, 3, 3, 3);
        if (!d.band().contains(x)) continue;
        for (unsigned lambda = 1; lambda <= 3; ++lambda) {
            const BandSet u = separating_nbhd(x, lambda, d);
            CHECK(member(x, u));
            CHECK(is_open(u, lambda, d));
            for (const auto& y : grid)
                if (y != x && member(y, u)) CHECK(rank(y, lambda) < rank(x, lambda));
        }
    }
}

TEST_CASE("derived set laws on random sets") {
    Rng rng(31);
    const Domain d = upto("w^3");
    for (int i = 0; i < 80; ++i) {
        const BandSet a = glp::testing::random_bandset(rng, pool());
        const BandSet b = glp::testing::random_bandset(rng, pool());
        for (unsigned lambda = 0; lambda <= 3; ++lambda) {
            const BandSet da = derived_set(a, lambda, d), db = derived_set(b, lambda, d);
            CHECK(equal(derived_set(unite(a, b), lambda, d), unite(da, db)));
            CHECK(subset(derived_set(intersect(a, b), lambda, d), da));
            CHECK(subset(derived_set(a, lambda + 1, d), da));
            CHECK(subset(derived_set(da, lambda, d), da));
            const BandSet c = complement_within(a, d);
            CHECK(is_open(a, lambda, d) == subset(derived_set(c, lambda, d), c));
        }
    }
}

TEST_CASE("pointwise and symbolic derived sets agree with brute force") {
    const auto oracle = glp::testing::AccumulationOracle::standard();
    const auto& witnesses = oracle.witnesses();
    const Domain d = upto("w^3");
    Rng rng(37);
    for (int i = 0; i < 40; ++i) {
        const BandSet a = intersect(glp::testing::random_bandset(rng, pool()), BandSet::full(d));
        std::vector<char> mem(witnesses.size());
        for (std::size_t j = 0; j < witnesses.size(); ++j) mem[j] = !witnesses[j].is_zero() && member(witnesses[j], a);
        for (unsigned lambda = 1; lambda <= 3; ++lambda) {
            const BandSet da = derived_set(a, lambda, d);
            for (const auto& x : pool()) {
                const bool brute = oracle.in_derived_cached(x, mem, lambda);
                CHECK(member_of_derived(x, a, lambda, d) == brute);
                CHECK(member(x, da) == brute);
            }
        }
    }
}

TEST_CASE("ell is a d-map one level down") {
    // ell : ([1, w^w], I_2) -> ([0, w], I_1) pulls derived sets back to derived sets.
    Rng rng(41);
    const Domain src = upto("w^w");
    const Domain dst{0, Ordinal::omega()};
    std::vector<Ordinal> pts;
    for (int n = 0; n <= 6; ++n) pts.push_back(n);
    pts.push_back(Ordinal::omega());
    for (int i = 0; i < 60; ++i) {
        const BandSet a = intersect(glp::testing::random_bandset(rng, pts, 2, 2, 2), BandSet::full(dst));
        const BandSet lhs = lift(derived_set(a, 1, dst), 1, src);
        const BandSet rhs = derived_set(lift(a, 1, src), 2, src);
        CHECK(equal(lhs, rhs));
    }
}

TEST_CASE("text syntax") {
    CHECK(to_string(S("[1,w^2] & l^1 in (-1,0]")) == "[1,w^2] & l^1 in (-1,0]");
    CHECK(to_string(S("{w}")) == "{w}");
    CHECK(to_string(S("empty")) == "empty");
    CHECK(equal(S("l in (0,1]"), S("[1,inf) & l^1 in [1,2)")));
    CHECK_THROWS_AS(S("[1,w"), SyntaxError);
    CHECK_THROWS_AS(S("[1,w] & x"), SyntaxError);
    Rng rng(43);
    for (int i = 0; i < 200; ++i) {
        const BandSet a = simplify(glp::testing::random_bandset(rng, pool()));
        CHECK(equal(S(to_string(a).c_str()), a));
    }
}
