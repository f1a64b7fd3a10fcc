#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "glp/cli.hpp"
#include "glp/embed.hpp"
#include "glp/error.hpp"

namespace py = pybind11;
using namespace glp;

namespace {

Ordinal to_ordinal(const py::object& o) {
    if (py::isinstance<Ordinal>(o)) return o.cast<Ordinal>();
    if (py::isinstance<py::int_>(o)) {
        const auto n = o.cast<long long>();
        if (n < 0) throw py::value_error("ordinals are nonnegative");
        return Ordinal(n);
    }
    if (py::isinstance<py::str>(o)) return eval_ordinal_expr(o.cast<std::string>());
    throw py::type_error("expected an Ordinal, int or ordinal expression");
}

std::vector<Ordinal> to_ordinals(const py::iterable& xs) {
    std::vector<Ordinal> out;
    for (const auto& x : xs) out.push_back(to_ordinal(py::reinterpret_borrow<py::object>(x)));
    return out;
}

py::dict checks_dict(const std::vector<CheckResult>& cs, bool passed) {
    py::list stages;
    for (const auto& c : cs) {
        py::dict d;
        d["name"] = c.name;
        d["evidence"] = evidence_name(c.evidence);
        d["passed"] = c.passed;
        d["detail"] = c.detail;
        stages.append(d);
    }
    py::dict out;
    out["passed"] = passed;
    out["stages"] = stages;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Ordinal arithmetic, Icard polytopologies and GLP countermodels";

    // Translators run newest first, so the subclass goes last.
    py::register_exception<Error>(m, "GlpError", PyExc_RuntimeError);
    py::register_exception<SyntaxError>(m, "SyntaxError", PyExc_ValueError);

    py::class_<Ordinal>(m, "Ordinal")
        .def(py::init([](const py::object& o) { return to_ordinal(o); }), py::arg("value") = 0)
        .def_static("omega", &Ordinal::omega)
        .def("is_finite", &Ordinal::is_finite)
        .def("is_limit", &Ordinal::is_limit)
        .def("is_successor", &Ordinal::is_successor)
        .def("__str__", [](const Ordinal& a) { return to_string(a); })
        .def("__repr__", [](const Ordinal& a) { return "Ordinal('" + to_string(a) + "')"; })
        .def("__hash__", [](const Ordinal& a) { return py::hash(py::str(to_string(a))); })
        .def("__add__", [](const Ordinal& a, const py::object& b) { return a + to_ordinal(b); })
        .def("__radd__", [](const Ordinal& a, const py::object& b) { return to_ordinal(b) + a; })
        .def("__mul__", [](const Ordinal& a, const py::object& b) { return a * to_ordinal(b); })
        .def("__rmul__", [](const Ordinal& a, const py::object& b) { return to_ordinal(b) * a; })
        .def("__eq__", [](const Ordinal& a, const py::object& b) { return a == to_ordinal(b); })
        .def("__lt__", [](const Ordinal& a, const py::object& b) { return a < to_ordinal(b); })
        .def("__le__", [](const Ordinal& a, const py::object& b) { return a <= to_ordinal(b); })
        .def("__gt__", [](const Ordinal& a, const py::object& b) { return a > to_ordinal(b); })
        .def("__ge__", [](const Ordinal& a, const py::object& b) { return a >= to_ordinal(b); });

    m.def("ordinal", [](const std::string& text) { return eval_ordinal_expr(text); }, "Evaluate an ordinal expression");
    m.def("e", [](const py::object& a) { return e(to_ordinal(a)); });
    m.def("ell", [](const py::object& a) { return ell(to_ordinal(a)); });
    m.def("big_l", [](const py::object& a) { return big_l(to_ordinal(a)); });
    m.def("pounds", [](const py::object& a) { return pounds(to_ordinal(a)); });
    m.def("e_iter", [](const py::object& n, const py::object& a) { return e_iter(to_ordinal(n), to_ordinal(a)); });
    m.def("ell_iter", [](const py::object& n, const py::object& a) { return ell_iter(to_ordinal(n), to_ordinal(a)); });
    m.def("left_subtract", [](const py::object& a, const py::object& b) { return left_subtract(to_ordinal(a), to_ordinal(b)); });

    m.def("normalize_bands", [](const std::string& text) { return to_string(simplify(parse_bandset(text))); });
    m.def("equal_bands", [](const std::string& a, const std::string& b) { return equal(parse_bandset(a), parse_bandset(b)); },
          "Extensional equality of two band sets");
    m.def(
        "derived_set",
        [](const std::string& bands, const py::object& theta, unsigned level) {
            return to_string(simplify(derived_set(parse_bandset(bands), level, Domain{1, to_ordinal(theta)})));
        },
        py::arg("bands"), py::arg("theta"), py::arg("level") = 1);
    m.def("member", [](const py::object& x, const std::string& bands) { return member(to_ordinal(x), parse_bandset(bands)); });

    m.def("parse_formula", [](const std::string& text) { return to_string(parse_formula(text)); },
          "Parse and print a formula in canonical form");
    m.def(
        "eval_topo",
        [](const std::string& formula, const py::object& theta, const py::iterable& levels,
           const std::map<unsigned, std::string>& valuation) {
            TopoValuation v;
            for (const auto& [k, text] : valuation) v[k] = parse_bandset(text);
            return to_string(simplify(eval_topo(parse_formula(formula), PolySpace{to_ordinal(theta), to_ordinals(levels)}, v)));
        },
        py::arg("formula"), py::arg("theta"), py::arg("levels") = py::make_tuple(1),
        py::arg("valuation") = std::map<unsigned, std::string>{});
    m.def(
        "eval_kripke",
        [](const std::string& formula, const std::string& tree_json, const std::string& valuation_json) {
            const JFrame t = frame_from_json(nlohmann::json::parse(tree_json));
            const KripkeValuation v = valuation_json.empty() ? KripkeValuation{}
                                                             : valuation_from_json(nlohmann::json::parse(valuation_json), t);
            std::vector<std::string> names;
            for (int x : eval_kripke(parse_formula(formula), t, v)) names.push_back(t.name(x));
            return names;
        },
        py::arg("formula"), py::arg("tree_json"), py::arg("valuation_json") = "");

    m.def("is_jtree", [](const std::string& tree_json) { return is_jtree(frame_from_json(nlohmann::json::parse(tree_json))); });
    m.def("gl_embed", [](const std::string& tree_json) {
        const GlEmbedding g = gl_embed(frame_from_json(nlohmann::json::parse(tree_json)));
        return py::make_tuple(g.theta, map_to_json(g.fmap).dump());
    });
    m.def(
        "embed",
        [](const std::string& tree_json, const py::iterable& levels) {
            return countermodel_to_json(embed(frame_from_json(nlohmann::json::parse(tree_json)), to_ordinals(levels))).dump();
        },
        py::arg("tree_json"), py::arg("levels"), "Countermodel JSON for a J-tree at the given Icard levels");
    m.def(
        "verify",
        [](const std::string& cm_json, const std::string& formula) {
            const Countermodel cm = countermodel_from_json(nlohmann::json::parse(cm_json));
            const VerifyReport r = verify_countermodel(cm, reindex(parse_formula(formula), cm.sigma));
            return checks_dict(r.stages, r.passed());
        },
        py::arg("cm_json"), py::arg("formula"));
    m.def(
        "apply_map",
        [](const std::string& cm_json, const py::object& x) {
            const Countermodel cm = countermodel_from_json(nlohmann::json::parse(cm_json));
            return cm.tree.name(apply_node(cm.fmap, to_ordinal(x)));
        },
        py::arg("cm_json"), py::arg("x"));
    m.def(
        "search",
        [](const std::string& formula, std::size_t max_nodes, std::size_t budget) -> py::object {
            const Pipeline p = search_and_embed(parse_formula(formula), SearchOptions{max_nodes, budget});
            if (!p.search.model) return py::none();
            py::dict d;
            d["tree"] = frame_to_json(p.search.model->tree).dump();
            d["valuation"] = valuation_to_json(p.search.model->valuation, p.search.model->tree).dump();
            d["countermodel"] = countermodel_to_json(*p.model).dump();
            return std::move(d);
        },
        py::arg("formula"), py::arg("max_nodes") = 5, py::arg("budget") = 50'000'000);
}
