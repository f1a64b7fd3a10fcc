#include <doctest.h>

#include <set>

#include "glp/error.hpp"
#include "glp/ordinal.hpp"
#include "support/gen.hpp"
#include "support/small_ord.hpp"

using namespace glp;
using glp::testing::Rng;

namespace {

Ordinal P(const char* s) { return parse_ordinal(s); }
const Ordinal w = Ordinal::omega();

// Order type of the limit ordinals below omega^2*m + omega*n, for the
// counting reading of pounds. Enumerates limits as pairs (i, j) -> omega^2*i + omega*j.
Ordinal count_limits_below_limit_part(long long m, long long n) {
    long long tail = 0;
    for (long long j = 0; j < n; ++j)
        if (m > 0 || j > 0) ++tail;
    return add(multiply(w, Ordinal(m)), Ordinal(tail));
}

// Terms of a fundamental sequence for a limit ordinal.
Ordinal fundamental(const Ordinal& lam, long long n) {
    const Ordinal head = drop_last_term(lam);
    const Term& t = lam.terms().back();
    const Ordinal rest = t.coefficient > 1 ? add(head, omega_pow_times(t.exponent, t.coefficient - 1)) : head;
    const Ordinal& ex = t.exponent;
    if (ex.is_successor()) return add(rest, multiply(omega_pow(drop_last_term(ex) + Ordinal::from_nat(ex.finite_part() - 1)), Ordinal(n)));
    return add(rest, omega_pow(fundamental(ex, n)));
}

}  // namespace

TEST_CASE("normalize merges and absorbs") {
    CHECK(normalize({Term{0, 1}, Term{0, 2}}) == Ordinal(3));
    CHECK(normalize({Term{0, 1}, Term{1, 1}}) == w);
    CHECK(normalize({}) == Ordinal(0));
    Rng rng(7);
    for (int i = 0; i < 300; ++i) {
        Ordinal a = glp::testing::random_ordinal(rng, 3);
        CHECK(normalize(a.terms()) == a);
    }
}

TEST_CASE("compare") {
    CHECK(w == P("w"));
    CHECK(P("w+1") < P("w*2"));
    CHECK(P("w^w") > P("w^3*9+5"));
    // Small surrogate well-orders: tuples compared lexicographically.
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        auto a = glp::testing::random_small(rng), b = glp::testing::random_small(rng);
        CHECK((a < b) == (to_ordinal(a) < to_ordinal(b)));
        CHECK((a == b) == (to_ordinal(a) == to_ordinal(b)));
    }
}

TEST_CASE("add and left_subtract") {
    CHECK(Ordinal(1) + w == w);
    CHECK(w + Ordinal(1) == P("w+1"));
    CHECK(P("w^2+w") + P("w^2") == P("w^2*2"));
    CHECK(left_subtract(1, w) == w);
    CHECK(left_subtract(w, P("w+5")) == Ordinal(5));
    CHECK(left_subtract(w, P("w^2")) == P("w^2"));
    CHECK_THROWS_AS(left_subtract(P("w+1"), w), Underflow);
    Rng rng(3);
    for (int i = 0; i < 2000; ++i) {
        Ordinal a = glp::testing::random_ordinal(rng, 3), b = glp::testing::random_ordinal(rng, 3);
        if (a > b) std::swap(a, b);
        CHECK(a + left_subtract(a, b) == b);
    }
}

TEST_CASE("multiply against repeated addition") {
    CHECK(Ordinal(2) * w == w);
    CHECK(P("w+1") * w == P("w^2"));
    CHECK(P("w^2") * Ordinal(0) == Ordinal(0));
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        auto a = glp::testing::random_small(rng), b = glp::testing::random_small(rng);
        CHECK(to_ordinal(small_mul(a, b)) == to_ordinal(a) * to_ordinal(b));
        CHECK(to_ordinal(small_add(a, b)) == to_ordinal(a) + to_ordinal(b));
    }
}

TEST_CASE("left division") {
    CHECK(divide(P("w*2+3"), P("w+5")).quotient == Ordinal(1));
    CHECK(divide(P("w*2+3"), P("w+5")).remainder == P("w+3"));
    CHECK(divide(P("w^2"), Ordinal(3)).quotient == P("w^2"));
    CHECK(divide(P("w^3+w*2"), P("w^2*2+1")).quotient == w);
    CHECK(divide(P("w^3+w^2*5"), P("w^2*2+1")).quotient == P("w+2"));
    CHECK_THROWS_AS(divide(w, Ordinal(0)), ZeroArgument);
    Rng rng(17);
    for (int i = 0; i < 3000; ++i) {
        const Ordinal a = glp::testing::random_ordinal(rng, 3);
        const Ordinal p = glp::testing::random_positive(rng, 3);
        const Division d = divide(a, p);
        CHECK(p * d.quotient + d.remainder == a);
        CHECK(d.remainder < p);
    }
}

TEST_CASE("powers and hyperexponentials") {
    CHECK(omega_pow(0) == Ordinal(1));
    CHECK(omega_pow(1) == w);
    CHECK(omega_pow(w) == P("w^w"));
    CHECK(e(0) == Ordinal(0));
    CHECK(e(1) == w);
    CHECK(e(w) == P("w^w"));
    CHECK(e_iter(0u, P("w+3")) == P("w+3"));
    CHECK(e_iter(2u, 1) == P("w^w"));
    CHECK(e_iter(3u, 1) == P("w^(w^w)"));
    CHECK_THROWS_AS(e_iter(w, 1), NotationSupport);
    CHECK_THROWS_AS(e_iter(100u, 1), DepthExceeded);
    set_depth_cap(200);
    CHECK(depth(e_iter(100u, 1)) == 101);
    set_depth_cap(64);
}

TEST_CASE("logarithms") {
    CHECK(ell(P("w^w*3+w^2")) == Ordinal(2));
    CHECK(ell(5) == Ordinal(0));
    CHECK(ell(w) == Ordinal(1));
    CHECK(big_l(P("w^2+w")) == Ordinal(2));
    CHECK(big_l(5) == Ordinal(0));
    CHECK(big_l(P("w^w")) == w);
    CHECK_THROWS_AS(ell(0), ZeroArgument);
    CHECK_THROWS_AS(big_l(0), ZeroArgument);
    CHECK(ell_iter(Ordinal(0), P("w^w")) == P("w^w"));
    CHECK(ell_iter(Ordinal(2), P("w^(w^3)")) == Ordinal(3));
    CHECK(ell_iter(w, P("w^w*7+w")) == Ordinal(0));
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        Ordinal a = glp::testing::random_positive(rng, 4);
        CHECK(ell(a) < a);
    }
}

TEST_CASE("pounds") {
    CHECK(pounds(w) == Ordinal(0));
    CHECK(pounds(P("w*5+3")) == Ordinal(4));
    CHECK(pounds(P("w^2")) == w);
    for (long long m = 0; m <= 4; ++m)
        for (long long n = 0; n <= 4; ++n)
            for (long long k = 0; k <= 2; ++k) {
                Ordinal a = P("w^2") * Ordinal(m) + w * Ordinal(n) + Ordinal(k);
                CHECK(pounds(a) == count_limits_below_limit_part(m, n));
            }
    Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        Ordinal a = glp::testing::random_ordinal(rng, 3), b = glp::testing::random_ordinal(rng, 3);
        if (a > b) std::swap(a, b);
        CHECK(pounds(a) <= pounds(b));
        // Additivity needs the right summand to be finite or at least omega^2.
        if (b.is_finite() || b >= P("w^2")) CHECK(pounds(a + b) == pounds(a) + pounds(b));
        if (b.is_limit() && ell(b) >= Ordinal(2)) {
            // Continuity along a fundamental sequence: the values climb to pounds(b).
            Ordinal prev = pounds(fundamental(b, 1));
            for (long long n = 2; n < 6; ++n) {
                Ordinal cur = pounds(fundamental(b, n));
                CHECK(prev < cur);
                CHECK(cur < pounds(b));
                prev = cur;
            }
        }
    }
}

TEST_CASE("indecomposables") {
    CHECK(is_add_indec(P("w^2")));
    CHECK_FALSE(is_mult_indec(P("w^2")));
    CHECK(is_add_indec(P("w^w")));
    CHECK(is_mult_indec(P("w^w")));
    CHECK_FALSE(is_add_indec(P("w*2")));
    CHECK_FALSE(is_mult_indec(P("w*2")));
    // beta * s == s for 0 < beta < s, checked on small betas.
    for (const char* s : {"w", "w^w", "w^(w^2)"}) {
        Ordinal v = P(s);
        REQUIRE(is_mult_indec(v));
        for (const char* b : {"1", "3", "w", "w^2+1"})
            if (P(b) < v) CHECK(P(b) * v == v);
    }
}

TEST_CASE("char_seq") {
    CHECK(char_seq({1, 7}, 0) == Ordinal(0));
    CHECK_THROWS_AS(char_seq({1, 7}, 3), OutOfRange);
    CHECK(char_seq({P("w^w"), 2}, P("w*3+2")) == Ordinal(8));
    CHECK(char_seq({P("w^w"), 5}, 4) == Ordinal(4));
    CHECK_THROWS_AS(char_seq({P("w*2"), 1}, 0), OutOfRange);
    CHECK_THROWS_AS(char_seq({P("w^w"), 1}, P("w^w")), OutOfRange);
}

TEST_CASE("text round trip") {
    CHECK(to_string(P("w^(w^2*3+1)*2+w+5")) == "w^(w^2*3+1)*2+w+5");
    CHECK(to_string(0) == "0");
    CHECK(to_string(P("1+w")) == "w");
    CHECK(P("w^w^2") == P("w^(w^2)"));
    CHECK_THROWS_AS(P("w^"), SyntaxError);
    CHECK_THROWS_AS(P("w+)"), SyntaxError);
    Rng rng(19);
    for (int i = 0; i < 1000; ++i) {
        Ordinal a = glp::testing::random_ordinal(rng, 4);
        CHECK(P(to_string(a).c_str()) == a);
    }
}

TEST_CASE("big coefficients stay exact") {
    Ordinal big = Ordinal::from_nat(Nat("123456789012345678901234567890"));
    CHECK(to_string(big * big) == "15241578753238836750495351562536198787501905199875019052100");
    CHECK(left_subtract(big, big + big) == big);
}
