#include <algorithm>

#include "glp/embed.hpp"
#include "glp/error.hpp"

namespace glp {

namespace {

using Op = MapExpr::Op;

MapExpr shift(const Ordinal& from, const Ordinal& to) {
    return MapExpr::step(Op::SubLeft, from, MapExpr::step(Op::AddLeft, to, MapExpr::identity()));
}

// (lo, hi] among the level-0 values.
BandSet left_open(const Ordinal& lo, const Ordinal& hi) {
    return BandSet::of(Band({Interval{succ(lo), succ(hi)}}));
}

}  // namespace

std::size_t ProductStructure::cell_of_block(std::size_t i) const {
    if (i == 0 || i > blocks()) throw IndexOutOfRange("no block " + std::to_string(i));
    return i == blocks() ? 0 : i;
}

Cell ProductStructure::cell(const Ordinal& index) const {
    const OmegaDivision d = divide_by_omega(index);
    if (d.quotient >= lambda) throw OutOfRange("cell " + to_string(index) + " lies past theta");
    const Nat m = blocks();
    const std::size_t p = static_cast<std::size_t>(d.remainder % m);
    const Ordinal g = Ordinal::from_nat(d.remainder / m);
    const Ordinal base = omega_pow(xi) * d.quotient + period * g;
    return {base + offsets[p] + 1, base + offsets[p + 1], p == 0 ? blocks() : p};
}

Ordinal ProductStructure::density_witness(std::size_t i, const Ordinal& u, const Ordinal& below) const {
    if (!member(u, x_up)) throw OutOfRange(to_string(u) + " is not in the up part");
    if (below >= u) throw OutOfRange(to_string(below) + " is not below " + to_string(u));
    const std::size_t p = cell_of_block(i);
    const Ordinal block = omega_pow(xi);
    const Division outer = divide(below, block);
    const Division inner = divide(outer.remainder, period);
    return block * outer.quotient + period * succ(inner.quotient) + offsets[p + 1];
}

ProductStructure product(std::vector<Ordinal> kappas, const Ordinal& lambda) {
    if (kappas.empty()) throw OutOfRange("product needs at least one block");
    for (const Ordinal& k : kappas)
        if (k.is_zero()) throw OutOfRange("product blocks must be nonzero");
    if (lambda.is_zero()) throw OutOfRange("product needs lambda >= 1");
    std::sort(kappas.begin(), kappas.end());
    ProductStructure ps;
    ps.kappas = kappas;
    ps.lambda = lambda;
    const std::size_t m = kappas.size();
    Ordinal sum;
    for (const Ordinal& k : kappas) ps.markers.push_back(sum = sum + k);
    const Ordinal& largest = kappas.back();
    auto marker_before = [&](std::size_t i) { return i <= 1 ? Ordinal() : ps.markers[i - 2]; };

    std::vector<MapExpr::Piece> pieces;
    ps.offsets.push_back({});
    for (std::size_t p = 0; p < m; ++p) {
        const std::size_t kind = p == 0 ? m : p;
        const Ordinal& start = ps.offsets.back();
        const Ordinal mid = start + largest;
        const Ordinal end = mid + kappas[kind - 1];
        pieces.push_back({left_open(start, mid), shift(start, marker_before(m))});
        pieces.push_back({left_open(mid, end), shift(mid, marker_before(kind))});
        ps.offsets.push_back(end);
    }
    ps.period = ps.offsets.back();
    ps.xi = succ(big_l(ps.period));
    ps.theta = sum * Ordinal::omega() * lambda;
    if (ps.theta != omega_pow(ps.xi) * lambda) throw OutOfRange("product theta is off for " + to_string(sum));

    const Interval whole = Interval::closed(1, ps.theta);
    ps.x_down = BandSet::of(Band({whole, Interval{Ordinal(), ps.xi}}));
    ps.x_up = BandSet::of(Band({whole, Interval{ps.xi, std::nullopt}}));
    ps.pi0 = MapExpr::step(Op::CellOffset, ps.period, MapExpr::dispatch(std::move(pieces)));
    ps.pi1 = MapExpr::step(Op::OtypUp, ps.xi, MapExpr::identity());

    const Domain dom{1, ps.theta};
    const BandSet isolated_up = subtract(ps.x_up, derived_set(ps.x_up, 1, dom));
    const BandSet lambda_limits = derived_set(BandSet::of(Band::closed(1, lambda)), 1, Domain{1, lambda});
    ps.s_set = intersect(isolated_up, preimage(ps.pi1, lambda_limits));
    return ps;
}

}  // namespace glp
