#include "glp/grid.hpp"

#include <algorithm>

#include "glp/error.hpp"

namespace glp {

bool GridSpace::fits(const Ordinal& theta) { return !theta.is_zero() && theta <= omega_pow(3); }

GridSpace::GridSpace(const Ordinal& theta, Options opt) : theta_(theta), opt_(opt) {
    if (!fits(theta)) throw OutOfRange("grid spaces need 0 < theta <= w^3, got " + to_string(theta));
    if (opt.window == 0) throw OutOfRange("grid window must be positive");
    cut_ = opt.lead + 2 * opt.window;
    cube_ = theta == omega_pow(3);
    if (!cube_) {
        A_ = coefficient_at(theta, 2);
        B_ = coefficient_at(theta, 1);
        C_ = coefficient_at(theta, 0);
        if (A_ >= cut_) throw OutOfRange("grid too small for " + to_string(theta));
    }
    na_ = cube_ ? cut_ : A_.convert_to<unsigned>() + 1;
    index_.assign(static_cast<std::size_t>(na_) * cut_ * cut_, -1);
    const Ordinal w = Ordinal::omega(), w2 = omega_pow(2);
    for (unsigned a = 0; a < na_; ++a) {
        const unsigned nb = slab_open(a) ? cut_ : B_.convert_to<unsigned>() + 1;
        if (nb > cut_) throw OutOfRange("grid too small for " + to_string(theta));
        for (unsigned b = 0; b < nb; ++b) {
            const unsigned nc = row_open(a, b) ? cut_ : C_.convert_to<unsigned>() + 1;
            if (nc > cut_) throw OutOfRange("grid too small for " + to_string(theta));
            for (unsigned c = 0; c < nc; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                index_[(static_cast<std::size_t>(a) * cut_ + b) * cut_ + c] = static_cast<long>(points_.size());
                points_.push_back(w2 * Ordinal(a) + w * Ordinal(b) + Ordinal(c));
                coords_.push_back({a, b, c});
            }
        }
    }
    if (cube_) {
        points_.push_back(theta);
        coords_.push_back({cut_, 0, 0});
    }
    top_ = points_.size() - 1;
}

bool GridSpace::slab_open(unsigned a) const { return cube_ || Nat(a) < A_; }
bool GridSpace::row_open(unsigned a, unsigned b) const { return slab_open(a) || Nat(b) < B_; }

long GridSpace::at(unsigned a, unsigned b, unsigned c) const {
    if (a >= na_ || b >= cut_ || c >= cut_) return -1;
    return index_[(static_cast<std::size_t>(a) * cut_ + b) * cut_ + c];
}

GridSpace::Set GridSpace::where(const std::function<bool(const Ordinal&)>& pred) const {
    Set s(size());
    for (std::size_t i = 0; i < size(); ++i) s[i] = pred(points_[i]);
    return s;
}

GridSpace::Set GridSpace::derived(const Set& s, unsigned level) const {
    if (level == 0) throw UnsupportedLevel("grid spaces carry Icard levels >= 1 only");
    Set out = none();
    if (level >= 2) return out;
    const unsigned from = cut_ - opt_.window;
    auto hit = [&](long i) { return i >= 0 && s[static_cast<std::size_t>(i)]; };
    auto row_cofinal = [&](unsigned a, unsigned b) {
        for (unsigned c = from; c < cut_; ++c)
            if (hit(at(a, b, c))) return true;
        return false;
    };
    auto slab_nonempty = [&](unsigned a, unsigned b) {
        for (unsigned c = 0; c < cut_; ++c)
            if (hit(at(a, b, c))) return true;
        return false;
    };
    auto slab_cofinal = [&](unsigned a) {
        for (unsigned b = from; b < cut_; ++b)
            if (slab_nonempty(a, b)) return true;
        return false;
    };
    auto slab_any = [&](unsigned a) {
        for (unsigned b = 0; b < cut_; ++b)
            if (slab_nonempty(a, b)) return true;
        return false;
    };
    for (std::size_t i = 0; i < size(); ++i) {
        const Coord& p = coords_[i];
        if (i == top_ && cube_) {
            for (unsigned a = from; a < cut_ && !out[i]; ++a) out[i] = slab_any(a);
            continue;
        }
        if (p.c > 0) continue;
        if (p.b > 0)
            out[i] = row_cofinal(p.a, p.b - 1);
        else if (p.a > 0)
            out[i] = slab_cofinal(p.a - 1);
    }
    return out;
}

void GridSpace::check_periodic(const Set& s) const {
    const unsigned w = opt_.window, lo = cut_ - 2 * w;
    auto val = [&](unsigned a, unsigned b, unsigned c) {
        const long i = at(a, b, c);
        return i >= 0 && s[static_cast<std::size_t>(i)];
    };
    auto fail = [&](const char* axis) {
        throw NotRepresentable(std::string("grid set does not settle along the ") + axis + " coordinate");
    };
    for (unsigned a = 0; a < na_; ++a)
        for (unsigned b = 0; b < cut_; ++b) {
            if (at(a, b, 1) < 0 || !row_open(a, b)) continue;
            for (unsigned c = lo; c < lo + w; ++c)
                if (val(a, b, c) != val(a, b, c + w)) fail("finite");
        }
    for (unsigned a = 0; a < na_; ++a) {
        if (!slab_open(a)) continue;
        for (unsigned b = lo; b < lo + w; ++b)
            for (unsigned c = 0; c < cut_; ++c)
                if (val(a, b, c) != val(a, b + w, c)) fail("omega");
    }
    if (cube_)
        for (unsigned a = lo; a < lo + w; ++a)
            for (unsigned b = 0; b < cut_; ++b)
                for (unsigned c = 0; c < cut_; ++c)
                    if (val(a, b, c) != val(a + w, b, c)) fail("omega^2");
}

GridSpace::Set grid_union(const GridSpace::Set& a, const GridSpace::Set& b) {
    GridSpace::Set out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] || b[i];
    return out;
}

GridSpace::Set grid_intersect(const GridSpace::Set& a, const GridSpace::Set& b) {
    GridSpace::Set out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
    return out;
}

GridSpace::Set grid_minus(const GridSpace::Set& a, const GridSpace::Set& b) {
    GridSpace::Set out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && !b[i];
    return out;
}

bool grid_empty(const GridSpace::Set& a) { return std::none_of(a.begin(), a.end(), [](char c) { return c; }); }

bool grid_subset(const GridSpace::Set& a, const GridSpace::Set& b) { return grid_empty(grid_minus(a, b)); }

std::vector<int> grid_labels(const GridSpace& g, const MapExpr& f) {
    std::vector<int> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = apply_node(f, g.point(i));
    return out;
}

GridSpace::Set grid_fiber(const std::vector<int>& labels, const NodeSet& nodes) {
    GridSpace::Set s(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) s[i] = nodes.count(labels[i]) > 0;
    return s;
}

GridSpace::Set eval_grid(const Formula& f, const GridSpace& g, const std::vector<Ordinal>& levels, const GridValuation& v) {
    using K = Formula::Kind;
    auto level = [&](const Ordinal& i) -> unsigned {
        auto n = i.as_nat();
        if (!n || *n >= levels.size()) throw IndexOutOfRange("modality " + to_string(i) + " has no level");
        return finite_level(levels[n->convert_to<std::size_t>()]);
    };
    auto d = [&](const GridSpace::Set& s, unsigned lv) {
        GridSpace::Set out = g.derived(s, lv);
        g.check_periodic(out);
        return out;
    };
    switch (f.kind()) {
        case K::Var: {
            auto it = v.find(f.var_index());
            if (it == v.end()) throw UnboundVariable("p" + std::to_string(f.var_index()) + " has no value");
            g.check_periodic(it->second);
            return it->second;
        }
        case K::Top: return g.full();
        case K::Bot: return g.none();
        case K::Not: return grid_minus(g.full(), eval_grid(f.left(), g, levels, v));
        case K::And: return grid_intersect(eval_grid(f.left(), g, levels, v), eval_grid(f.right(), g, levels, v));
        case K::Or: return grid_union(eval_grid(f.left(), g, levels, v), eval_grid(f.right(), g, levels, v));
        case K::Implies:
            return grid_union(grid_minus(g.full(), eval_grid(f.left(), g, levels, v)), eval_grid(f.right(), g, levels, v));
        case K::Dia: return d(eval_grid(f.left(), g, levels, v), level(f.index()));
        case K::Box:
            return grid_minus(g.full(), d(grid_minus(g.full(), eval_grid(f.left(), g, levels, v)), level(f.index())));
    }
    return g.none();
}

}  // namespace glp
