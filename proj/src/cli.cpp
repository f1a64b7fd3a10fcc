#include "glp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include "glp/error.hpp"
#include "glp/jtree.hpp"

namespace glp {

namespace {

class ExprParser {
public:
    explicit ExprParser(std::string_view s) : s_(s) {}

    Ordinal parse() {
        Ordinal v = sum();
        if (peek() != '\0') throw SyntaxError("trailing input", pos_);
        return v;
    }

private:
    char peek() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    void expect(char c) {
        if (peek() != c) throw SyntaxError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }
    Ordinal sum() {
        Ordinal acc = product();
        while (peek() == '+') {
            ++pos_;
            acc = acc + product();
        }
        return acc;
    }
    Ordinal product() {
        Ordinal acc = factor();
        while (peek() == '*') {
            ++pos_;
            acc = acc * factor();
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
        if (c == '(') {
            ++pos_;
            Ordinal v = sum();
            expect(')');
            return v;
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) throw SyntaxError(c ? std::string("unexpected '") + c + "'" : "unexpected end of input", pos_);
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string name(s_.substr(start, pos_ - start));
        if (name == "w") {
            if (peek() == '^') {
                ++pos_;
                return omega_pow(factor());
            }
            return Ordinal::omega();
        }
        expect('(');
        std::vector<Ordinal> args{sum()};
        while (peek() == ',') {
            ++pos_;
            args.push_back(sum());
        }
        expect(')');
        return call(name, args, start);
    }
    static Ordinal call(const std::string& name, const std::vector<Ordinal>& a, std::size_t at) {
        auto arity = [&](std::size_t n) {
            if (a.size() != n) throw SyntaxError(name + " takes " + std::to_string(n) + " arguments", at);
        };
        if (name == "e") return arity(1), e(a[0]);
        if (name == "l") return arity(1), ell(a[0]);
        if (name == "L") return arity(1), big_l(a[0]);
        if (name == "pounds") return arity(1), pounds(a[0]);
        if (name == "eiter") return arity(2), e_iter(a[0], a[1]);
        if (name == "liter") return arity(2), ell_iter(a[0], a[1]);
        if (name == "sub") return arity(2), left_subtract(a[0], a[1]);
        throw SyntaxError("unknown function " + name, at);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::vector<Ordinal> parse_list(const std::string& text) {
    std::vector<Ordinal> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_ordinal(item));
    return out;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw OutOfRange("cannot read " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw OutOfRange(path + ": " + e.what());
    }
}

void write_json(const nlohmann::json& j, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(path);
    if (!f) throw OutOfRange("cannot write " + path);
    f << j.dump(2) << "\n";
}

TopoValuation topo_valuation_from_json(const nlohmann::json& j) {
    TopoValuation v;
    for (const auto& [name, text] : j.items()) {
        if (name.size() < 2 || name[0] != 'p') throw OutOfRange("valuation keys look like p0, got " + name);
        v[static_cast<unsigned>(std::stoul(name.substr(1)))] = parse_bandset(text.get<std::string>());
    }
    return v;
}

nlohmann::json checks_json(const std::vector<CheckResult>& cs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cs)
        arr.push_back({{"name", c.name}, {"evidence", evidence_name(c.evidence)}, {"passed", c.passed}, {"detail", c.detail}});
    return arr;
}

}  // namespace

Ordinal eval_ordinal_expr(std::string_view text) { return ExprParser(text).parse(); }

Formula reindex(const Formula& phi, const std::vector<Ordinal>& sigma) {
    using K = Formula::Kind;
    switch (phi.kind()) {
        case K::Var:
        case K::Top:
        case K::Bot: return phi;
        case K::Not: return Formula::neg(reindex(phi.left(), sigma));
        case K::And: return Formula::conj(reindex(phi.left(), sigma), reindex(phi.right(), sigma));
        case K::Or: return Formula::disj(reindex(phi.left(), sigma), reindex(phi.right(), sigma));
        case K::Implies: return Formula::implies(reindex(phi.left(), sigma), reindex(phi.right(), sigma));
        case K::Box:
        case K::Dia: {
            const auto it = std::find(sigma.begin(), sigma.end(), phi.index());
            if (it == sigma.end()) throw IndexOutOfRange("modality " + to_string(phi.index()) + " is not among the model's");
            const Ordinal k(static_cast<long long>(it - sigma.begin()));
            const Formula body = reindex(phi.left(), sigma);
            return phi.kind() == K::Box ? Formula::box(k, body) : Formula::dia(k, body);
        }
    }
    return phi;
}

Pipeline search_and_embed(const Formula& phi, const SearchOptions& opt) {
    Pipeline p;
    const Condensed c = condense(phi);
    p.condensed = c.formula;
    p.search = find_jtree_model(c.formula, opt);
    if (!p.search.model) return p;
    const JTreeModel& m = *p.search.model;
    std::vector<Ordinal> levels;
    for (const Ordinal& s : c.sigma) levels.push_back(Ordinal(1) + s);
    if (levels.empty()) levels.push_back(1);
    // The tree carries one relation per modality of the condensed formula.
    while (levels.size() < m.tree.modalities()) levels.push_back(levels.back() + Ordinal(1));
    Countermodel cm = embed(m.tree, levels);
    if (!c.sigma.empty()) cm.sigma = c.sigma;
    cm.valuation = m.valuation;
    p.model = std::move(cm);
    return p;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ordinals, Icard polytopologies and countermodels for GLP"};
    app.require_subcommand(1);
    bool json = false;
    std::uint64_t seed = 1;
    std::size_t budget = 50'000'000;
    int depth = depth_cap();
    app.add_flag("--json", json, "machine-readable output");
    app.add_option("--seed", seed, "random seed for sampled checks");
    app.add_option("--budget", budget, "search evaluations / verification work cap");
    app.add_option("--depth-cap", depth, "maximal ordinal nesting depth")->check(CLI::PositiveNumber);

    std::string expr;
    auto* ord = app.add_subcommand("ord", "evaluate an ordinal expression");
    ord->add_option("expr", expr)->required();

    std::string band_text, theta_text = "w^w", level_text = "1", member_text;
    auto* band = app.add_subcommand("band", "normalize a band set, optionally with its derived set");
    band->add_option("bands", band_text)->required();
    band->add_option("--theta", theta_text, "domain [1, theta]");
    band->add_option("--level", level_text, "Icard level for the derived set");
    band->add_option("--member", member_text, "test a point");

    std::string formula_text, levels_text = "1", valuation_path;
    auto* eval = app.add_subcommand("eval", "topological extension of a formula");
    eval->add_option("formula", formula_text)->required();
    eval->add_option("--theta", theta_text, "domain [1, theta]");
    eval->add_option("--levels", levels_text, "Icard level of each modality, comma separated");
    eval->add_option("--valuation", valuation_path, "JSON {\"p0\": \"band set\"}");

    std::string tree_path;
    auto* kripke = app.add_subcommand("kripke", "Kripke extension of a formula on a frame");
    kripke->add_option("formula", formula_text)->required();
    kripke->add_option("--tree", tree_path)->required();
    kripke->add_option("--valuation", valuation_path, "JSON {\"p0\": [nodes]}");

    std::string sigma_text = "1", out_path;
    auto* emb = app.add_subcommand("embed", "build a countermodel for a J-tree");
    emb->add_option("--tree", tree_path)->required();
    emb->add_option("--sigma", sigma_text, "Icard levels, comma separated");
    emb->add_option("--valuation", valuation_path, "JSON {\"p0\": [nodes]} stored with the model");
    emb->add_option("--out", out_path, "output file, stdout when omitted");

    std::string cm_path;
    auto* ver = app.add_subcommand("verify", "check a countermodel against a formula");
    ver->add_option("--cm", cm_path)->required();
    ver->add_option("--formula", formula_text)->required();

    std::size_t max_nodes = 5;
    std::string cm_out;
    auto* search = app.add_subcommand("search", "look for a J-tree model of a formula");
    search->add_option("formula", formula_text)->required();
    search->add_option("--max-nodes", max_nodes);
    search->add_option("--out", out_path, "tree and valuation, stdout when omitted");
    search->add_option("--countermodel", cm_out, "also embed the model and write the countermodel here");

    std::vector<std::string> argv{"glp"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::vector<const char*> raw;
    for (const auto& a : argv) raw.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kBadInput;
    }

    const int saved_depth = depth_cap();
    set_depth_cap(depth);
    struct Restore {
        int d;
        ~Restore() { set_depth_cap(d); }
    } restore{saved_depth};

    try {
        if (*ord) {
            const Ordinal v = eval_ordinal_expr(expr);
            if (json)
                out << nlohmann::json{{"value", to_string(v)}}.dump() << "\n";
            else
                out << to_string(v) << "\n";
            return kOk;
        }
        if (*band) {
            const Domain dom{1, eval_ordinal_expr(theta_text)};
            const BandSet s = simplify(intersect(parse_bandset(band_text), BandSet::full(dom)));
            const BandSet d = simplify(derived_set(s, finite_level(eval_ordinal_expr(level_text)), dom));
            const auto w = min_witness(s);
            nlohmann::json j{{"set", to_string(s)}, {"empty", is_empty(s)}, {"derived", to_string(d)}};
            if (w) j["min"] = to_string(*w);
            if (!member_text.empty()) j["member"] = member(eval_ordinal_expr(member_text), s);
            if (json) {
                out << j.dump() << "\n";
            } else {
                out << "set      " << to_string(s) << "\n";
                out << "empty    " << (is_empty(s) ? "yes" : "no") << "\n";
                if (w) out << "min      " << to_string(*w) << "\n";
                out << "derived  " << to_string(d) << "\n";
                if (!member_text.empty()) out << "member   " << (j["member"].get<bool>() ? "yes" : "no") << "\n";
            }
            return kOk;
        }
        if (*eval) {
            const Formula phi = parse_formula(formula_text);
            PolySpace space{eval_ordinal_expr(theta_text), parse_list(levels_text)};
            const TopoValuation v = valuation_path.empty() ? TopoValuation{} : topo_valuation_from_json(read_json(valuation_path));
            const BandSet s = simplify(eval_topo(phi, space, v));
            const bool at_theta = member(space.theta, s);
            if (json) {
                out << nlohmann::json{{"set", to_string(s)}, {"empty", is_empty(s)}, {"theta", at_theta}}.dump() << "\n";
            } else {
                out << (is_empty(s) ? "{}" : to_string(s)) << "\n";
                out << (is_empty(s) ? "empty" : "nonempty") << "; theta " << (at_theta ? "in" : "not in") << " the extension\n";
            }
            return kOk;
        }
        if (*kripke) {
            const Formula phi = parse_formula(formula_text);
            const JFrame t = frame_from_json(read_json(tree_path));
            const KripkeValuation v = valuation_path.empty() ? KripkeValuation{} : valuation_from_json(read_json(valuation_path), t);
            const NodeSet s = eval_kripke(phi, t, v);
            nlohmann::json nodes = nlohmann::json::array();
            for (int x : s) nodes.push_back(t.name(x));
            if (json) {
                out << nlohmann::json{{"nodes", nodes}}.dump() << "\n";
            } else {
                for (int x : s) out << t.name(x) << "\n";
            }
            return kOk;
        }
        if (*emb) {
            const JFrame t = frame_from_json(read_json(tree_path));
            Countermodel cm = embed(t, parse_list(sigma_text));
            if (!valuation_path.empty()) cm.valuation = valuation_from_json(read_json(valuation_path), t);
            write_json(countermodel_to_json(cm), out_path, out);
            if (!out_path.empty() && out_path != "-") out << "theta " << to_string(cm.theta) << "\n";
            return kOk;
        }
        if (*ver) {
            const Countermodel cm = countermodel_from_json(read_json(cm_path));
            const Formula phi = reindex(parse_formula(formula_text), cm.sigma);
            VerifyOptions opt;
            opt.seed = seed;
            if (app.count("--budget")) opt.budget = budget;
            const VerifyReport r = verify_countermodel(cm, phi, opt);
            if (json)
                out << nlohmann::json{{"passed", r.passed()}, {"stages", checks_json(r.stages)}}.dump() << "\n";
            else
                out << r.summary() << (r.passed() ? "PASS" : "FAIL") << "\n";
            return r.passed() ? kOk : kFailed;
        }
        if (*search) {
            const Formula phi = parse_formula(formula_text);
            SearchOptions opt{max_nodes, budget};
            const Pipeline p = search_and_embed(phi, opt);
            if (!p.search.model) {
                if (json)
                    out << nlohmann::json{{"result", "unknown"}, {"exhausted", p.search.exhausted}, {"evaluations", p.search.evaluations}}.dump() << "\n";
                else
                    out << "unknown" << (p.search.exhausted ? " (budget spent)" : "") << "\n";
                return kUnknown;
            }
            const JTreeModel& m = *p.search.model;
            write_json({{"tree", frame_to_json(m.tree)}, {"valuation", valuation_to_json(m.valuation, m.tree)}}, out_path, out);
            if (!cm_out.empty()) {
                write_json(countermodel_to_json(*p.model), cm_out, out);
                if (cm_out != "-") out << "theta " << to_string(p.model->theta) << "\n";
            }
            return kOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}

}  // namespace glp
