#pragma once

// Dense coefficient vectors for ordinals below omega^omega. Used as an
// independent reference: multiplication goes through repeated addition and
// distributivity rather than the term-level rules of the library.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "glp/ordinal.hpp"

namespace glp::testing {

struct SmallOrd {
    std::vector<std::int64_t> c;  // c[k] is the coefficient of omega^k

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool zero() const { return c.empty(); }
    int lead() const { return static_cast<int>(c.size()) - 1; }

    friend bool operator==(const SmallOrd& a, const SmallOrd& b) { return a.c == b.c; }
    friend bool operator<(const SmallOrd& a, const SmallOrd& b) {
        if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
        for (int k = a.lead(); k >= 0; --k)
            if (a.c[k] != b.c[k]) return a.c[k] < b.c[k];
        return false;
    }
};

inline SmallOrd small_add(const SmallOrd& a, const SmallOrd& b) {
    if (b.zero()) return a;
    SmallOrd out;
    const int m = b.lead();
    out.c.assign(std::max(a.c.size(), b.c.size()), 0);
    for (int k = 0; k < static_cast<int>(out.c.size()); ++k) {
        const std::int64_t ak = k < static_cast<int>(a.c.size()) ? a.c[k] : 0;
        if (k > m) out.c[k] = ak;
        else if (k == m) out.c[k] = ak + b.c[k];
        else out.c[k] = b.c[k];
    }
    out.trim();
    return out;
}

inline SmallOrd small_mul(const SmallOrd& a, const SmallOrd& b) {
    if (a.zero() || b.zero()) return {};
    SmallOrd out;
    for (int k = b.lead(); k >= 0; --k) {
        const std::int64_t n = b.c[k];
        if (n == 0) continue;
        if (k == 0) {
            for (std::int64_t i = 0; i < n; ++i) out = small_add(out, a);
        } else {
            // a * omega^k is the supremum of a * omega^(k-1) * j, which has lead a.lead()+k.
            SmallOrd t;
            t.c.assign(a.lead() + k + 1, 0);
            t.c.back() = n;
            out = small_add(out, t);
        }
    }
    return out;
}

inline Ordinal to_ordinal(const SmallOrd& s) {
    std::vector<Term> ts;
    for (int k = s.lead(); k >= 0; --k)
        if (s.c[k] != 0) ts.push_back(Term{Ordinal(k), Nat(s.c[k])});
    return normalize(ts);
}

}  // namespace glp::testing
