#pragma once

// Ordinals below epsilon_0 in Cantor normal form.

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace glp {

using Nat = boost::multiprecision::cpp_int;

struct Term;

class Ordinal {
public:
    Ordinal() = default;
    Ordinal(long long n);  // NOLINT: small naturals read naturally as ordinals
    static Ordinal from_nat(const Nat& n);
    static Ordinal omega();

    // Terms in strictly decreasing exponent order; empty for zero.
    const std::vector<Term>& terms() const;
    std::size_t size() const;

    bool is_zero() const { return !terms_; }
    bool is_finite() const;
    bool is_successor() const;
    bool is_limit() const;
    // Value when finite, otherwise nullopt.
    std::optional<Nat> as_nat() const;
    // Coefficient of the omega^0 term.
    Nat finite_part() const;

    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
    friend bool operator==(const Ordinal& a, const Ordinal& b);

private:
    explicit Ordinal(std::vector<Term> terms);
    friend Ordinal from_normal_terms(std::vector<Term> terms);

    std::shared_ptr<const std::vector<Term>> terms_;
};

struct Term {
    Ordinal exponent;
    Nat coefficient;
    friend bool operator==(const Term&, const Term&) = default;
};

// Builds an ordinal from terms already in normal form (caller's promise).
Ordinal from_normal_terms(std::vector<Term> terms);
// Sums arbitrary terms left to right; zero coefficients vanish.
Ordinal normalize(const std::vector<Term>& raw);

Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal multiply(const Ordinal& a, const Ordinal& b);
// The gamma with a + gamma = b; throws Underflow when a > b.
Ordinal left_subtract(const Ordinal& a, const Ordinal& b);

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }
inline Ordinal operator*(const Ordinal& a, const Ordinal& b) { return multiply(a, b); }

// Nesting depth: 0 for zero, 1 for positive naturals, 2 for omega, ...
int depth(const Ordinal& a);
int depth_cap();
void set_depth_cap(int cap);

Ordinal omega_pow(const Ordinal& a);
Ordinal omega_pow_times(const Ordinal& a, const Nat& c);
Ordinal e(const Ordinal& a);
Ordinal e_iter(unsigned n, const Ordinal& a);
// Transfinite iteration counts are not representable below epsilon_0.
Ordinal e_iter(const Ordinal& n, const Ordinal& a);

Ordinal ell(const Ordinal& a);
Ordinal big_l(const Ordinal& a);
// ell applied n times; ell(0) is read as 0 once the chain bottoms out.
Ordinal ell_iter(unsigned n, const Ordinal& a);
Ordinal ell_iter(const Ordinal& xi, const Ordinal& a);
// Number of ell steps needed to reach 0.
unsigned ell_height(const Ordinal& a);

Ordinal pounds(const Ordinal& a);

bool is_add_indec(const Ordinal& a);
bool is_mult_indec(const Ordinal& a);

// a without its last term (0 for zero or single-term ordinals).
Ordinal drop_last_term(const Ordinal& a);
Ordinal last_term(const Ordinal& a);
// a = omega * quotient + remainder with remainder finite.
struct OmegaDivision {
    Ordinal quotient;
    Nat remainder;
};
OmegaDivision divide_by_omega(const Ordinal& a);
// a = divisor * quotient + remainder with remainder < divisor.
struct Division {
    Ordinal quotient;
    Ordinal remainder;
};
Division divide(const Ordinal& a, const Ordinal& divisor);
Ordinal succ(const Ordinal& a);
// Coefficient of the omega^exponent term (0 when absent).
Nat coefficient_at(const Ordinal& a, const Ordinal& exponent);

struct CharSeqParams {
    Ordinal varsigma;
    Ordinal nu;
};
Ordinal char_seq(const CharSeqParams& params, const Ordinal& iota);

std::string to_string(const Ordinal& a);
Ordinal parse_ordinal(std::string_view text);
// Parses a maximal ordinal expression starting at pos and advances pos.
Ordinal parse_ordinal_prefix(std::string_view text, std::size_t& pos);

}  // namespace glp
