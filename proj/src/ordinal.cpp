#include "glp/ordinal.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>

#include "glp/error.hpp"

namespace glp {

namespace {

const std::vector<Term>& empty_terms() {
    static const std::vector<Term> none;
    return none;
}

std::atomic<int> g_depth_cap{64};

Ordinal single_term(const Ordinal& exponent, const Nat& c) {
    if (c == 0) return {};
    return from_normal_terms({Term{exponent, c}});
}

Ordinal slice(const std::vector<Term>& ts, std::size_t from) {
    if (from >= ts.size()) return {};
    return from_normal_terms(std::vector<Term>(ts.begin() + static_cast<std::ptrdiff_t>(from), ts.end()));
}

// -1 + e, which is e-1 for finite nonzero e and e otherwise.
Ordinal minus_one_plus(const Ordinal& e) {
    if (auto n = e.as_nat()) return n == 0 ? Ordinal{} : Ordinal::from_nat(*n - 1);
    return e;
}

}  // namespace

Ordinal::Ordinal(std::vector<Term> terms) {
    if (!terms.empty()) terms_ = std::make_shared<const std::vector<Term>>(std::move(terms));
}

Ordinal from_normal_terms(std::vector<Term> terms) { return Ordinal(std::move(terms)); }

Ordinal::Ordinal(long long n) {
    if (n < 0) throw Underflow("negative natural " + std::to_string(n));
    if (n > 0) terms_ = std::make_shared<const std::vector<Term>>(std::vector<Term>{Term{Ordinal{}, Nat(n)}});
}

Ordinal Ordinal::from_nat(const Nat& n) {
    if (n < 0) throw Underflow("negative natural");
    return single_term(Ordinal{}, n);
}

Ordinal Ordinal::omega() {
    static const Ordinal w = single_term(Ordinal(1), 1);
    return w;
}

const std::vector<Term>& Ordinal::terms() const { return terms_ ? *terms_ : empty_terms(); }

std::size_t Ordinal::size() const { return terms_ ? terms_->size() : 0; }

bool Ordinal::is_finite() const { return !terms_ || (terms_->size() == 1 && terms_->front().exponent.is_zero()); }

bool Ordinal::is_successor() const { return terms_ && terms_->back().exponent.is_zero(); }

bool Ordinal::is_limit() const { return terms_ && !terms_->back().exponent.is_zero(); }

std::optional<Nat> Ordinal::as_nat() const {
    if (!terms_) return Nat(0);
    if (is_finite()) return terms_->front().coefficient;
    return std::nullopt;
}

Nat Ordinal::finite_part() const { return is_successor() ? terms_->back().coefficient : Nat(0); }

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    if (a.terms_ == b.terms_) return std::strong_ordering::equal;
    const auto& x = a.terms();
    const auto& y = b.terms();
    const std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (auto c = x[i].exponent <=> y[i].exponent; c != 0) return c;
        if (x[i].coefficient != y[i].coefficient)
            return x[i].coefficient < y[i].coefficient ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return x.size() <=> y.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return (a <=> b) == 0; }

Ordinal normalize(const std::vector<Term>& raw) {
    Ordinal out;
    for (const auto& t : raw) out = add(out, single_term(t.exponent, t.coefficient));
    return out;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    const auto& x = a.terms();
    const auto& y = b.terms();
    const Ordinal& lead = y.front().exponent;
    std::vector<Term> out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0;
    for (; i < x.size() && x[i].exponent > lead; ++i) out.push_back(x[i]);
    if (i < x.size() && x[i].exponent == lead) {
        out.push_back(Term{lead, x[i].coefficient + y.front().coefficient});
        out.insert(out.end(), y.begin() + 1, y.end());
    } else {
        out.insert(out.end(), y.begin(), y.end());
    }
    return from_normal_terms(std::move(out));
}

Ordinal multiply(const Ordinal& a, const Ordinal& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const auto& x = a.terms();
    const Ordinal& lead = x.front().exponent;
    std::vector<Term> out;
    for (const auto& t : b.terms()) {
        if (!t.exponent.is_zero()) {
            out.push_back(Term{add(lead, t.exponent), t.coefficient});
        } else {
            out.push_back(Term{lead, x.front().coefficient * t.coefficient});
            out.insert(out.end(), x.begin() + 1, x.end());
        }
    }
    return from_normal_terms(std::move(out));
}

Ordinal left_subtract(const Ordinal& a, const Ordinal& b) {
    const auto& x = a.terms();
    const auto& y = b.terms();
    std::size_t i = 0;
    while (i < x.size() && i < y.size() && x[i] == y[i]) ++i;
    if (i == x.size()) return slice(y, i);
    if (i < y.size()) {
        if (y[i].exponent > x[i].exponent) return slice(y, i);
        if (y[i].exponent == x[i].exponent && y[i].coefficient > x[i].coefficient)
            return add(single_term(y[i].exponent, y[i].coefficient - x[i].coefficient), slice(y, i + 1));
    }
    throw Underflow("cannot subtract " + to_string(a) + " from " + to_string(b));
}

int depth(const Ordinal& a) {
    int d = 0;
    for (const auto& t : a.terms()) d = std::max(d, depth(t.exponent));
    return a.is_zero() ? 0 : d + 1;
}

int depth_cap() { return g_depth_cap.load(); }

void set_depth_cap(int cap) {
    if (cap < 1) throw OutOfRange("depth cap must be positive");
    g_depth_cap.store(cap);
}

Ordinal omega_pow_times(const Ordinal& a, const Nat& c) {
    if (depth(a) + 1 > depth_cap())
        throw DepthExceeded("omega^a nests deeper than " + std::to_string(depth_cap()));
    return single_term(a, c);
}

Ordinal omega_pow(const Ordinal& a) { return omega_pow_times(a, 1); }

Ordinal e(const Ordinal& a) { return a.is_zero() ? Ordinal{} : omega_pow(a); }

Ordinal e_iter(unsigned n, const Ordinal& a) {
    Ordinal out = a;
    for (unsigned i = 0; i < n && !out.is_zero(); ++i) out = e(out);
    return out;
}

Ordinal e_iter(const Ordinal& n, const Ordinal& a) {
    auto k = n.as_nat();
    if (!k) throw NotationSupport("transfinite hyperexponent needs epsilon numbers");
    if (*k > 1'000'000) throw DepthExceeded("hyperexponent count too large");
    return e_iter(k->convert_to<unsigned>(), a);
}

Ordinal ell(const Ordinal& a) {
    if (a.is_zero()) throw ZeroArgument("ell(0) is undefined");
    return a.terms().back().exponent;
}

Ordinal big_l(const Ordinal& a) {
    if (a.is_zero()) throw ZeroArgument("L(0) is undefined");
    return a.terms().front().exponent;
}

Ordinal ell_iter(unsigned n, const Ordinal& a) {
    Ordinal out = a;
    for (unsigned i = 0; i < n && !out.is_zero(); ++i) out = ell(out);
    return out;
}

Ordinal ell_iter(const Ordinal& xi, const Ordinal& a) {
    auto k = xi.as_nat();
    if (!k) return {};
    const unsigned h = ell_height(a);
    if (*k >= h) return {};
    return ell_iter(k->convert_to<unsigned>(), a);
}

unsigned ell_height(const Ordinal& a) {
    unsigned h = 0;
    for (Ordinal x = a; !x.is_zero(); x = ell(x)) ++h;
    return h;
}

Ordinal pounds(const Ordinal& a) {
    if (a <= Ordinal::omega()) return {};
    return minus_one_plus(divide_by_omega(a).quotient);
}

bool is_add_indec(const Ordinal& a) { return a.size() == 1 && a.terms().front().coefficient == 1; }

bool is_mult_indec(const Ordinal& a) {
    if (a == Ordinal(1)) return true;
    return is_add_indec(a) && is_add_indec(a.terms().front().exponent);
}

Ordinal drop_last_term(const Ordinal& a) {
    if (a.size() <= 1) return {};
    const auto& ts = a.terms();
    return from_normal_terms(std::vector<Term>(ts.begin(), ts.end() - 1));
}

Ordinal last_term(const Ordinal& a) {
    if (a.is_zero()) return {};
    return from_normal_terms({a.terms().back()});
}

OmegaDivision divide_by_omega(const Ordinal& a) {
    std::vector<Term> q;
    Nat r = 0;
    for (const auto& t : a.terms()) {
        if (t.exponent.is_zero())
            r = t.coefficient;
        else
            q.push_back(Term{minus_one_plus(t.exponent), t.coefficient});
    }
    // e -> -1+e is strictly increasing on e >= 1, so q stays normal.
    return {from_normal_terms(std::move(q)), r};
}

Division divide(const Ordinal& a, const Ordinal& divisor) {
    if (divisor.is_zero()) throw ZeroArgument("division by zero");
    const Term& lead = divisor.terms().front();
    std::vector<Term> q;
    Ordinal r = a;
    while (r >= divisor) {
        const Term& top = r.terms().front();
        if (top.exponent > lead.exponent) {
            // divisor * w^t swallows everything below the leading term.
            const Ordinal t = left_subtract(lead.exponent, top.exponent);
            q.push_back(Term{t, top.coefficient});
            r = slice(r.terms(), 1);
            continue;
        }
        Nat k = top.coefficient / lead.coefficient;
        Ordinal chunk = multiply(divisor, Ordinal::from_nat(k));
        if (chunk > r) chunk = multiply(divisor, Ordinal::from_nat(--k));
        q.push_back(Term{Ordinal(), k});
        r = left_subtract(chunk, r);
    }
    return {normalize(q), r};
}

Ordinal succ(const Ordinal& a) { return add(a, Ordinal(1)); }

Nat coefficient_at(const Ordinal& a, const Ordinal& exponent) {
    for (const auto& t : a.terms())
        if (t.exponent == exponent) return t.coefficient;
    return 0;
}

Ordinal char_seq(const CharSeqParams& params, const Ordinal& iota) {
    const Ordinal& s = params.varsigma;
    if (!(s == Ordinal(1) || (is_mult_indec(s) && s.is_limit())))
        throw OutOfRange("varsigma must be 1 or multiplicatively indecomposable, got " + to_string(s));
    if (iota >= s) throw OutOfRange("iota " + to_string(iota) + " is not below varsigma " + to_string(s));
    if (s == Ordinal(1)) return {};
    auto [iota0, k] = divide_by_omega(iota);
    return add(multiply(params.nu, iota0), Ordinal::from_nat(k));
}

namespace {

void append_exponent(std::string& out, const Ordinal& e) {
    if (e.is_finite()) {
        out += to_string(e);
    } else if (e == Ordinal::omega()) {
        out += 'w';
    } else {
        out += '(';
        out += to_string(e);
        out += ')';
    }
}

class OrdinalParser {
public:
    OrdinalParser(std::string_view text, std::size_t pos) : s_(text), pos_(pos) {}

    Ordinal sum() {
        Ordinal acc = product();
        while (peek() == '+') {
            ++pos_;
            acc = add(acc, product());
        }
        return acc;
    }

    std::size_t pos() const { return pos_; }

    char peek() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

private:
    Ordinal product() {
        Ordinal acc = factor();
        while (peek() == '*') {
            ++pos_;
            acc = multiply(acc, factor());
        }
        return acc;
    }

    Ordinal factor() {
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Ordinal::from_nat(Nat(std::string(s_.substr(start, pos_ - start))));
        }
        if (c == 'w') {
            ++pos_;
            if (peek() == '^') {
                ++pos_;
                return omega_pow(factor());
            }
            return Ordinal::omega();
        }
        if (c == '(') {
            ++pos_;
            Ordinal inner = sum();
            if (peek() != ')') throw SyntaxError("expected ')'", pos_);
            ++pos_;
            return inner;
        }
        throw SyntaxError(c ? std::string("unexpected '") + c + "'" : std::string("unexpected end of input"), pos_);
    }

    std::string_view s_;
    std::size_t pos_;
};

}  // namespace

std::string to_string(const Ordinal& a) {
    if (a.is_zero()) return "0";
    std::string out;
    for (const auto& t : a.terms()) {
        if (!out.empty()) out += '+';
        if (t.exponent.is_zero()) {
            out += t.coefficient.str();
            continue;
        }
        out += 'w';
        if (t.exponent != Ordinal(1)) {
            out += '^';
            append_exponent(out, t.exponent);
        }
        if (t.coefficient != 1) {
            out += '*';
            out += t.coefficient.str();
        }
    }
    return out;
}

Ordinal parse_ordinal_prefix(std::string_view text, std::size_t& pos) {
    OrdinalParser p(text, pos);
    Ordinal out = p.sum();
    pos = p.pos();
    return out;
}

Ordinal parse_ordinal(std::string_view text) {
    OrdinalParser p(text, 0);
    Ordinal out = p.sum();
    if (p.peek() != '\0') throw SyntaxError("trailing input", p.pos());
    return out;
}

}  // namespace glp
