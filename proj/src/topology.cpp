#include "glp/topology.hpp"

#include <algorithm>
#include <cctype>

#include "glp/error.hpp"

namespace glp {

namespace {

std::optional<Ordinal> min_hi(const std::optional<Ordinal>& a, const std::optional<Ordinal>& b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

bool hi_less(const std::optional<Ordinal>& a, const std::optional<Ordinal>& b) {
    if (!a) return false;
    if (!b) return true;
    return *a < *b;
}

Ordinal pred(const Ordinal& x) { return add(drop_last_term(x), Ordinal::from_nat(x.finite_part() - 1)); }

// x minus one copy of its last omega-power: y in (result, x] forces ell y <= ell x,
// with equality only at x.
Ordinal step_down(const Ordinal& x) {
    const Term& t = x.terms().back();
    return add(drop_last_term(x), omega_pow_times(t.exponent, t.coefficient - 1));
}

// Recursion for the derived set of one band: dB at level lambda is a single band or empty.
std::optional<Band> derived_band(const Band& b, unsigned lambda) {
    if (lambda == 0) {
        auto m = least_at_or_above(b, 0);
        if (!m) return std::nullopt;
        return Band({Interval{succ(*m), std::nullopt}});
    }
    auto inner = derived_band(b.shift(), lambda - 1);
    if (!inner) return std::nullopt;
    const Interval& base = b.level(0);
    Interval top{succ(base.lo), base.hi ? std::optional<Ordinal>(succ(*base.hi)) : std::nullopt};
    return inner->lift(1, top);
}

bool in_derived_band(const Ordinal& x, const Band& b, unsigned lambda) {
    if (lambda == 0) {
        auto m = least_at_or_above(b, 0);
        return m && *m < x;
    }
    const Interval& base = b.level(0);
    if (!(base.lo < x) || (base.hi && *base.hi < x)) return false;
    if (!x.is_limit()) return false;
    return in_derived_band(ell(x), b.shift(), lambda - 1);
}

bool band_subset(const Band& a, const Band& b) {
    for (const auto& piece : subtract(a, b))
        if (least_at_or_above(piece, 0)) return false;
    return true;
}

// Bands equal everywhere except at one level whose intervals overlap or touch
// merge into one.
std::optional<Band> try_merge(const Band& a, const Band& b) {
    const std::size_t n = std::max(a.depth(), b.depth());
    std::optional<std::size_t> diff;
    for (std::size_t k = 0; k < n; ++k) {
        if (a.level(k) == b.level(k)) continue;
        if (diff) return std::nullopt;
        diff = k;
    }
    if (!diff) return a;
    const Interval& x = a.level(*diff);
    const Interval& y = b.level(*diff);
    const bool touch = !hi_less(x.hi, std::optional<Ordinal>(y.lo)) && !hi_less(y.hi, std::optional<Ordinal>(x.lo));
    if (!touch) return std::nullopt;
    Interval u{std::min(x.lo, y.lo), hi_less(x.hi, y.hi) ? y.hi : x.hi};
    return a.with_level(*diff, u);
}

bool band_key_less(const Band& a, const Band& b) {
    const std::size_t n = std::max(a.depth(), b.depth());
    for (std::size_t k = 0; k < n; ++k) {
        const Interval& x = a.level(k);
        const Interval& y = b.level(k);
        if (x.lo != y.lo) return x.lo < y.lo;
        if (x.hi != y.hi) return hi_less(x.hi, y.hi);
    }
    return false;
}

}  // namespace

Interval Interval::left_open(const std::optional<Ordinal>& c, const std::optional<Ordinal>& d) {
    return {c ? succ(*c) : Ordinal{}, d ? std::optional<Ordinal>(succ(*d)) : std::nullopt};
}

Interval intersect(const Interval& a, const Interval& b) { return {std::max(a.lo, b.lo), min_hi(a.hi, b.hi)}; }

Band::Band(std::vector<Interval> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) levels_.push_back(Interval::all());
    trim();
}

void Band::trim() {
    while (levels_.size() > 1 && levels_.back().is_all()) levels_.pop_back();
}

const Interval& Band::level(std::size_t k) const {
    static const Interval unconstrained = Interval::all();
    return k < levels_.size() ? levels_[k] : unconstrained;
}

Band Band::with_level(std::size_t k, const Interval& iv) const {
    std::vector<Interval> ls = levels_;
    if (ls.size() <= k) ls.resize(k + 1, Interval::all());
    ls[k] = iv;
    return Band(std::move(ls));
}

Band Band::shift() const {
    if (levels_.size() <= 1) return Band();
    return Band(std::vector<Interval>(levels_.begin() + 1, levels_.end()));
}

Band Band::lift(std::size_t k, const Interval& base) const {
    std::vector<Interval> ls(k, Interval::all());
    ls.insert(ls.end(), levels_.begin(), levels_.end());
    ls[0] = intersect(ls[0], base);
    return Band(std::move(ls));
}

bool Band::contains(const Ordinal& x) const {
    Ordinal v = x;
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        if (k > 0 && !v.is_zero()) v = ell(v);
        if (!levels_[k].contains(v)) return false;
    }
    return true;
}

bool Band::trivially_empty() const {
    return std::any_of(levels_.begin(), levels_.end(), [](const Interval& iv) { return iv.trivially_empty(); });
}

Band intersect(const Band& a, const Band& b) {
    const std::size_t n = std::max(a.depth(), b.depth());
    std::vector<Interval> ls;
    ls.reserve(n);
    for (std::size_t k = 0; k < n; ++k) ls.push_back(intersect(a.level(k), b.level(k)));
    return Band(std::move(ls));
}

std::optional<Ordinal> least_at_or_above(const Band& b, const Ordinal& t) {
    if (b.trivially_empty()) return std::nullopt;
    const Interval& base = b.level(0);
    const Ordinal start = std::max(t, base.lo);
    if (base.hi && start >= *base.hi) return std::nullopt;
    if (b.contains(start)) return start;
    // The least x > start with ell x = v is start + omega^v, so take the least admissible v.
    auto v = least_at_or_above(b.shift(), 0);
    if (!v) return std::nullopt;
    Ordinal x = add(start, omega_pow(*v));
    if (base.hi && x >= *base.hi) return std::nullopt;
    return x;
}

std::vector<Band> subtract(const Band& a, const Band& b) {
    std::vector<Band> out;
    Band agree = a;  // a restricted to the levels of b already matched
    for (std::size_t k = 0; k < b.depth(); ++k) {
        const Interval& cut = b.level(k);
        const Interval& own = agree.level(k);
        if (cut.lo > own.lo) {
            Band below = agree.with_level(k, intersect(own, Interval{Ordinal{}, cut.lo}));
            if (!below.trivially_empty()) out.push_back(below);
        }
        if (cut.hi && hi_less(cut.hi, own.hi)) {
            Band above = agree.with_level(k, intersect(own, Interval{*cut.hi, std::nullopt}));
            if (!above.trivially_empty()) out.push_back(above);
        }
        agree = agree.with_level(k, intersect(own, cut));
        if (agree.trivially_empty()) break;
    }
    return out;
}

BandSet::BandSet(std::vector<Band> bands) {
    for (auto& b : bands)
        if (!b.trivially_empty()) bands_.push_back(std::move(b));
}

bool member(const Ordinal& x, const BandSet& s) {
    return std::any_of(s.bands().begin(), s.bands().end(), [&](const Band& b) { return b.contains(x); });
}

BandSet unite(const BandSet& a, const BandSet& b) {
    std::vector<Band> out = a.bands();
    out.insert(out.end(), b.bands().begin(), b.bands().end());
    return simplify(BandSet(std::move(out)));
}

BandSet intersect(const BandSet& a, const BandSet& b) {
    std::vector<Band> out;
    for (const auto& x : a.bands())
        for (const auto& y : b.bands()) {
            Band z = intersect(x, y);
            if (least_at_or_above(z, 0)) out.push_back(std::move(z));
        }
    return simplify(BandSet(std::move(out)));
}

BandSet subtract(const BandSet& a, const BandSet& b) {
    std::vector<Band> cur;
    for (const auto& x : a.bands())
        if (least_at_or_above(x, 0)) cur.push_back(x);
    for (const auto& y : b.bands()) {
        std::vector<Band> next;
        for (const auto& x : cur)
            for (auto& piece : subtract(x, y))
                if (least_at_or_above(piece, 0)) next.push_back(std::move(piece));
        cur = std::move(next);
        if (cur.empty()) break;
    }
    return simplify(BandSet(std::move(cur)));
}

BandSet complement_within(const BandSet& s, const Domain& d) { return subtract(BandSet::full(d), s); }

bool is_empty(const BandSet& s) { return !min_witness(s); }

std::optional<Ordinal> min_witness(const BandSet& s) {
    std::optional<Ordinal> best;
    for (const auto& b : s.bands())
        if (auto m = least_at_or_above(b, 0); m && (!best || *m < *best)) best = m;
    return best;
}

bool subset(const BandSet& a, const BandSet& b) { return is_empty(subtract(a, b)); }

bool equal(const BandSet& a, const BandSet& b) { return subset(a, b) && subset(b, a); }

BandSet simplify(const BandSet& s) {
    std::vector<Band> bands;
    for (const auto& b : s.bands())
        if (least_at_or_above(b, 0)) bands.push_back(b);

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < bands.size() && !changed; ++i)
            for (std::size_t j = 0; j < bands.size() && !changed; ++j) {
                if (i == j) continue;
                if (band_subset(bands[i], bands[j])) {
                    bands.erase(bands.begin() + static_cast<std::ptrdiff_t>(i));
                    changed = true;
                } else if (auto m = try_merge(bands[i], bands[j])) {
                    bands[i] = *m;
                    bands.erase(bands.begin() + static_cast<std::ptrdiff_t>(j));
                    changed = true;
                }
            }
    }
    std::sort(bands.begin(), bands.end(), band_key_less);
    return BandSet(std::move(bands));
}

BandSet lift(const BandSet& s, std::size_t k, const Domain& d) {
    std::vector<Band> out;
    for (const auto& b : s.bands()) out.push_back(b.lift(k, d.band().level(0)));
    return simplify(BandSet(std::move(out)));
}

unsigned finite_level(const Ordinal& lambda) {
    auto n = lambda.as_nat();
    if (!n || *n > 10000) throw UnsupportedLevel("Icard level " + to_string(lambda) + " is not a small natural");
    return n->convert_to<unsigned>();
}

Ordinal rank(const Ordinal& x, unsigned lambda) {
    // On [1, Theta] with the initial segment topology the rank of x counts the points below it.
    if (lambda == 0) return x.is_zero() ? Ordinal{} : left_subtract(1, x);
    return ell_iter(lambda, x);
}

BandSet derived_set(const BandSet& s, unsigned lambda, const Domain& d) {
    const Band dom = d.band();
    std::vector<Band> out;
    for (const auto& b : s.bands())
        if (auto r = derived_band(intersect(b, dom), lambda)) out.push_back(intersect(*r, dom));
    return simplify(BandSet(std::move(out)));
}

bool member_of_derived(const Ordinal& x, const BandSet& s, unsigned lambda, const Domain& d) {
    const Band dom = d.band();
    if (!dom.contains(x)) return false;
    return std::any_of(s.bands().begin(), s.bands().end(),
                       [&](const Band& b) { return in_derived_band(x, intersect(b, dom), lambda); });
}

namespace {

// Endpoints of a simplified band set in a fixed order, or nullopt when the
// shapes of two sets differ.
using Endpoints = std::vector<std::optional<Ordinal>>;

std::vector<std::size_t> shape(const BandSet& s) {
    std::vector<std::size_t> out;
    for (const auto& b : s.bands()) out.push_back(b.depth());
    return out;
}

Endpoints endpoints(const BandSet& s) {
    Endpoints out;
    for (const auto& b : s.bands())
        for (const auto& iv : b.levels()) {
            out.emplace_back(iv.lo);
            out.push_back(iv.hi);
        }
    return out;
}

// Intersection of the chain whose last members are `window`, assuming every
// endpoint moves by a constant step. Lower bounds climb to their supremum,
// upper bounds are taken from the earliest member.
std::optional<BandSet> extrapolate(const std::vector<BandSet>& window) {
    const auto sh = shape(window.front());
    std::vector<Endpoints> pts;
    for (const auto& w : window) {
        if (shape(w) != sh) return std::nullopt;
        pts.push_back(endpoints(w));
    }
    Endpoints limit(pts.front().size());
    for (std::size_t i = 0; i < limit.size(); ++i) {
        std::optional<Ordinal> step;
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
            const auto& a = pts[j][i];
            const auto& b = pts[j + 1][i];
            if (a.has_value() != b.has_value()) return std::nullopt;
            if (!a) continue;
            if (*b < *a) return std::nullopt;
            Ordinal delta = left_subtract(*a, *b);
            if (step && *step != delta) return std::nullopt;
            step = delta;
        }
        const bool is_lower = i % 2 == 0;
        if (!pts.back()[i]) continue;
        if (is_lower)
            limit[i] = step && !step->is_zero() ? add(*pts.back()[i], multiply(*step, Ordinal::omega())) : *pts.back()[i];
        else
            limit[i] = pts.front()[i];
    }
    std::vector<Band> bands;
    std::size_t at = 0;
    for (std::size_t depth : sh) {
        std::vector<Interval> ls;
        for (std::size_t k = 0; k < depth; ++k, at += 2) ls.push_back(Interval{*limit[at], limit[at + 1]});
        bands.emplace_back(std::move(ls));
    }
    return simplify(BandSet(std::move(bands)));
}

BandSet omega_limit(const BandSet& start, unsigned lambda, const Domain& d, unsigned max_steps) {
    constexpr std::size_t kWindow = 5;
    std::vector<BandSet> history{derived_set(start, lambda, d)};
    for (unsigned step = 0; step < max_steps; ++step) {
        const BandSet& cur = history.back();
        if (is_empty(cur)) return cur;
        BandSet next = derived_set(cur, lambda, d);
        if (equal(next, cur)) return cur;
        history.push_back(std::move(next));
        if (history.size() < kWindow) continue;
        std::vector<BandSet> window(history.end() - kWindow, history.end());
        if (auto lim = extrapolate(window); lim && subset(*lim, window.back())) return *lim;
    }
    throw NonStabilizing("derived set chain did not settle within " + std::to_string(max_steps) + " steps");
}

}  // namespace

BandSet derived_iter(const BandSet& s, unsigned lambda, const Ordinal& alpha, const Domain& d, unsigned max_steps) {
    if (!alpha.is_zero() && big_l(alpha) > Ordinal(1))
        throw UnsupportedLevel("derived_iter handles indices below omega^2, got " + to_string(alpha));
    const Nat limits = coefficient_at(alpha, 1);
    const Nat finite = alpha.finite_part();
    BandSet cur = intersect(s, BandSet::full(d));
    for (Nat i = 0; i < limits; ++i) cur = omega_limit(cur, lambda, d, max_steps);
    for (Nat i = 0; i < finite; ++i) {
        if (is_empty(cur)) break;
        cur = derived_set(cur, lambda, d);
    }
    return cur;
}

bool is_open(const BandSet& s, unsigned lambda, const Domain& d) {
    const BandSet inside = intersect(s, BandSet::full(d));
    return is_empty(intersect(inside, derived_set(complement_within(inside, d), lambda, d)));
}

BandSet separating_nbhd(const Ordinal& x, unsigned lambda, const Domain& d) {
    const Band dom = d.band();
    if (!dom.contains(x)) throw OutOfRange(to_string(x) + " lies outside the domain");
    if (lambda == 0) return BandSet::of(intersect(dom, Band::closed(d.lo, x)));
    std::vector<Interval> ls{Interval{succ(step_down(x)), succ(x)}};
    Ordinal z = x;
    for (unsigned k = 1; k < lambda; ++k) {
        z = ell(z);
        if (z.is_zero()) {
            ls.push_back(Interval{Ordinal{}, Ordinal(1)});
            break;
        }
        ls.push_back(Interval{succ(step_down(z)), succ(z)});
    }
    return BandSet::of(intersect(Band(std::move(ls)), dom));
}

std::string to_string(const Interval& iv) {
    std::string out;
    if (iv.lo.is_zero())
        out = "(-1";
    else if (iv.lo.is_successor())
        out = "(" + to_string(pred(iv.lo));
    else
        out = "[" + to_string(iv.lo);
    out += ',';
    if (!iv.hi)
        out += "inf)";
    else if (iv.hi->is_successor())
        out += to_string(pred(*iv.hi)) + "]";
    else
        out += to_string(*iv.hi) + ")";
    return out;
}

std::string to_string(const Band& b) {
    const Interval& base = b.level(0);
    std::string out;
    if (b.depth() == 1 && base.hi && *base.hi == succ(base.lo)) return "{" + to_string(base.lo) + "}";
    out = "[" + to_string(base.lo) + ",";
    if (!base.hi)
        out += "inf)";
    else if (base.hi->is_successor())
        out += to_string(pred(*base.hi)) + "]";
    else
        out += to_string(*base.hi) + ")";
    for (std::size_t k = 1; k < b.depth(); ++k) {
        if (b.level(k).is_all()) continue;
        out += " & l^" + std::to_string(k) + " in " + to_string(b.level(k));
    }
    return out;
}

std::string to_string(const BandSet& s) {
    if (s.bands().empty()) return "empty";
    std::string out;
    for (const auto& b : s.bands()) {
        if (!out.empty()) out += "; ";
        out += to_string(b);
    }
    return out;
}

namespace {

class BandParser {
public:
    explicit BandParser(std::string_view s) : s_(s) {}

    BandSet bandset() {
        if (accept_word("empty") || accept_word("\xE2\x88\x85")) {
            expect_end();
            return {};
        }
        std::vector<Band> bands{band()};
        while (accept(';')) bands.push_back(band());
        expect_end();
        return BandSet(std::move(bands));
    }

    Band single() {
        Band b = band();
        expect_end();
        return b;
    }

private:
    Band band() {
        Band b = Band({Interval{Ordinal(1), std::nullopt}});
        const char c = peek();
        if (c == '{') {
            ++pos_;
            Ordinal x = ordinal();
            expect('}');
            b = Band::point(x);
        } else if (c == '[' || c == '(') {
            b = Band({interval()});
        } else if (c != 'l') {
            fail("expected a band");
        }
        bool first = c == 'l';
        while (first || accept('&')) {
            first = false;
            if (!accept('l')) fail("expected 'l'");
            std::size_t k = 1;
            if (accept('^')) {
                const Ordinal lv = ordinal();
                auto n = lv.as_nat();
                if (!n || *n < 1 || *n > 10000) throw UnsupportedLevel("constraint level " + to_string(lv));
                k = n->convert_to<std::size_t>();
            }
            if (!accept_word("in")) fail("expected 'in'");
            b = b.with_level(k, intersect(b.level(k), interval()));
        }
        return b;
    }

    Interval interval() {
        const char open = peek();
        if (open != '[' && open != '(') fail("expected '[' or '('");
        ++pos_;
        Ordinal lo;
        if (peek() == '-') {
            ++pos_;
            if (peek() != '1' || open != '(') fail("only '(-1' is allowed as a negative bound");
            ++pos_;
        } else {
            Ordinal c = ordinal();
            lo = open == '(' ? succ(c) : c;
        }
        expect(',');
        std::optional<Ordinal> hi;
        const bool inf = accept_word("inf");
        Ordinal d = inf ? Ordinal{} : ordinal();
        const char close = peek();
        if (close != ']' && close != ')') fail("expected ']' or ')'");
        ++pos_;
        if (!inf) hi = close == ']' ? succ(d) : d;
        return Interval{lo, hi};
    }

    Ordinal ordinal() { return parse_ordinal_prefix(s_, pos_); }

    char peek() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    bool accept_word(std::string_view w) {
        peek();
        if (s_.substr(pos_, w.size()) != w) return false;
        pos_ += w.size();
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    void expect_end() {
        if (peek() != '\0') fail("trailing input");
    }
    [[noreturn]] void fail(const std::string& what) { throw SyntaxError(what, pos_); }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Band parse_band(std::string_view text) { return BandParser(text).single(); }

BandSet parse_bandset(std::string_view text) { return BandParser(text).bandset(); }

}  // namespace glp
