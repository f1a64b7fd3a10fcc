#pragma once

// The glp command line: ord, band, eval, kripke, embed, verify, search.
//
// Exit codes: 0 success, 1 verification failed or formula false where a
// verdict is asked for, 2 unknown (search found nothing), 3 bad input.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glp/embed.hpp"
#include "glp/logic.hpp"
#include "glp/ordinal.hpp"

namespace glp {

enum ExitCode : int { kOk = 0, kFailed = 1, kUnknown = 2, kBadInput = 3 };

// Ordinal expressions: CNF syntax plus e(x), l(x), L(x), pounds(x),
// eiter(n, x), liter(x, y) and sub(a, b) = -a + b.
Ordinal eval_ordinal_expr(std::string_view text);

// Rewrites modality sigma[i] to i; throws IndexOutOfRange on other indices.
Formula reindex(const Formula& phi, const std::vector<Ordinal>& sigma);

// Search, embed at levels 1 + sigma and attach the found valuation. The
// returned formula is the condensed one the countermodel is checked against.
struct Pipeline {
    SearchResult search;
    Formula condensed = Formula::top();
    std::optional<Countermodel> model;
};
Pipeline search_and_embed(const Formula& phi, const SearchOptions& opt);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace glp
