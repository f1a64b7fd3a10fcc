#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "glp/cli.hpp"
#include "glp/error.hpp"

using namespace glp;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "glp_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("ordinal expressions") {
    CHECK(to_string(eval_ordinal_expr("liter(2, w^(w^3))")) == "3");
    CHECK(to_string(eval_ordinal_expr("e(0)")) == "0");
    CHECK(to_string(eval_ordinal_expr("pounds(w*5+3)")) == "4");
    CHECK(to_string(eval_ordinal_expr("1+w")) == "w");
    CHECK(to_string(eval_ordinal_expr("sub(w, w*2+1)")) == "w+1");
    CHECK(to_string(eval_ordinal_expr("eiter(2, 1)")) == "w^w");
    CHECK(to_string(eval_ordinal_expr("L(w^3+w) + l(w^3+w)")) == "4");
    CHECK_THROWS_AS(eval_ordinal_expr("sub(w, 3)"), Underflow);
    CHECK_THROWS_AS(eval_ordinal_expr("foo(1)"), SyntaxError);
    CHECK_THROWS_AS(eval_ordinal_expr("e(1, 2)"), SyntaxError);
    CHECK_THROWS_AS(eval_ordinal_expr("w+"), SyntaxError);

    const Run r = run({"ord", "liter(2, w^(w^3))"});
    CHECK(r.code == kOk);
    CHECK(r.out == "3\n");
    CHECK(run({"--json", "ord", "pounds(w*5+3)"}).out == "{\"value\":\"4\"}\n");
    CHECK(run({"ord", "w+"}).code == kBadInput);
    CHECK(run({"ord", "e(e(e(e(e(e(e(e(e(e(w))))))))))", "--depth-cap", "3"}).code == kBadInput);
}

TEST_CASE("band and eval") {
    const Run b = run({"--json", "band", "[1,w]", "--theta", "w", "--member", "5"});
    REQUIRE(b.code == kOk);
    const auto j = nlohmann::json::parse(b.out);
    CHECK(j["empty"] == false);
    CHECK(j["member"] == true);
    CHECK(j["min"] == "1");
    CHECK(equal(parse_bandset(j["derived"].get<std::string>()), BandSet::of(Band::point(parse_ordinal("w")))));

    const Run e = run({"--json", "eval", "<0>T", "--theta", "w", "--levels", "1"});
    REQUIRE(e.code == kOk);
    const auto je = nlohmann::json::parse(e.out);
    CHECK(equal(parse_bandset(je["set"].get<std::string>()), BandSet::of(Band::point(parse_ordinal("w")))));
    CHECK(je["theta"] == true);
    CHECK(nlohmann::json::parse(run({"--json", "eval", "F", "--theta", "w"}).out)["empty"] == true);
    CHECK(run({"eval", "F", "--theta", "w"}).out.rfind("{}\n", 0) == 0);

    const fs::path v = scratch("val.json");
    write(v, R"({"p0": "[1,w) & l^1 in [0,0]"})");
    const auto jv = nlohmann::json::parse(run({"--json", "eval", "<0>p0", "--theta", "w^2", "--valuation", v.string()}).out);
    CHECK(jv["theta"] == false);
    CHECK(run({"eval", "p3", "--theta", "w"}).code == kBadInput);
}

TEST_CASE("kripke, embed, verify") {
    const fs::path tree = scratch("chain.json"), cm = scratch("cm.json");
    write(tree, R"({"nodes":["r","a"],"rels":[[["r","a"]]]})");
    const Run k = run({"--json", "kripke", "<0>T", "--tree", tree.string()});
    CHECK(nlohmann::json::parse(k.out)["nodes"] == nlohmann::json::array({"r"}));

    const Run e = run({"embed", "--tree", tree.string(), "--sigma", "1", "--out", cm.string()});
    REQUIRE(e.code == kOk);
    CHECK(e.out == "theta w\n");
    CHECK(nlohmann::json::parse(read(cm))["theta"] == "w");
    const Countermodel model = countermodel_from_json(nlohmann::json::parse(read(cm)));
    CHECK(model.theta == parse_ordinal("w"));

    CHECK(run({"verify", "--cm", cm.string(), "--formula", "<0>T"}).code == kOk);
    const Run fail = run({"--json", "verify", "--cm", cm.string(), "--formula", "[0]F"});
    CHECK(fail.code == kFailed);
    CHECK(nlohmann::json::parse(fail.out)["passed"] == false);
    CHECK(run({"verify", "--cm", cm.string(), "--formula", "<3>T"}).code == kBadInput);

    // Same inputs, same bytes.
    CHECK(run({"embed", "--tree", tree.string()}).out == run({"embed", "--tree", tree.string()}).out);
}

TEST_CASE("search") {
    const Run none = run({"search", "[0]F & <0>T", "--max-nodes", "4"});
    CHECK(none.code == kUnknown);
    CHECK(none.out.rfind("unknown", 0) == 0);

    const fs::path cm = scratch("found.json");
    const Run hit = run({"search", "<2>T & <0>p0", "--countermodel", cm.string()});
    REQUIRE(hit.code == kOk);
    const auto j = nlohmann::json::parse(hit.out.substr(0, hit.out.rfind("theta")));
    CHECK(j.contains("tree"));
    const Countermodel model = countermodel_from_json(nlohmann::json::parse(read(cm)));
    CHECK(model.sigma == std::vector<Ordinal>{0, 2});
    CHECK(model.levels == std::vector<Ordinal>{1, 3});
    const Run ok = run({"verify", "--cm", cm.string(), "--formula", "<2>T & <0>p0"});
    CHECK_MESSAGE(ok.code == kOk, ok.out);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == kBadInput);
    CHECK(run({"frobnicate"}).code == kBadInput);
    CHECK(run({"--help"}).code == kOk);
    CHECK(run({"verify", "--cm", "/nonexistent/cm.json", "--formula", "T"}).code == kBadInput);
}
