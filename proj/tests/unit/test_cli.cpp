#include "doctest.h"

#include "folwerk/cli.hpp"

#include <fstream>
#include <sstream>

using namespace folwerk;

namespace {

const std::filesystem::path data_dir = FOLWERK_TEST_DATA;

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / "folwerk-cli-tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::filesystem::path write_file(const std::string& name, const std::string& text)
{
    auto path = scratch(name);
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Run {
    ExitCode code;
    std::string out, err;
};

Run run(const std::filesystem::path& file, RunOptions options = {},
        std::optional<std::filesystem::path> json = std::nullopt)
{
    std::ostringstream out, err;
    ExitCode code = check_file(file, options, json, out, err);
    return {code, out.str(), err.str()};
}

ErrorKind parse_error(const std::string& text, Location* at = nullptr)
{
    try {
        parse_workspace(text);
    } catch (const InputError& e) {
        if (at)
            *at = e.where();
        return e.kind();
    }
    FAIL("no error for: " << text);
    return ErrorKind::InvalidInput;
}

} // namespace

TEST_CASE("cli: empty input")
{
    auto ws = parse_workspace("");
    CHECK(ws.declarations.empty());
    CHECK(ws.checks.empty());
    auto blank = parse_workspace("\n  # only a comment\n\n");
    CHECK(blank.declarations.empty());
}

TEST_CASE("cli: the dual-numbers file")
{
    auto ws = parse_workspace(slurp(data_dir / "dual_numbers.fw"));
    CHECK(ws.declarations.size() == 6);
    CHECK(ws.checks.size() == 5);
    CHECK(ws.get("D").kind == DeclKind::Basis);
    CHECK(ws.get("W").kind == DeclKind::WeilRes);
    CHECK(ws.get("W").references == std::vector<std::string>{"Z", "D"});
    CHECK(ws.get("Ws").restriction->result->own_relations().size() == 2);
    CHECK(ws.checks[3].aspect == "points");
    CHECK(ws.checks[3].args == std::vector<std::string>{"D", "E"});

    auto r = run(data_dir / "dual_numbers.fw");
    CHECK(r.code == AllPassed);
    CHECK(r.err.empty());
    CHECK(r.out.find("5 of 5 checks passed") != std::string::npos);
}

TEST_CASE("cli: duplicate names report both sites")
{
    try {
        parse_workspace("algebra B = Q[x]\nalgebra C = Q[y]\n  algebra B = Q[z]\n");
        FAIL("duplicate accepted");
    } catch (const InputError& e) {
        CHECK(e.kind() == ErrorKind::DuplicateName);
        CHECK(e.where() == Location{3, 3});
        std::string msg = e.what();
        CHECK(msg.find("1:1") != std::string::npos);
        CHECK(msg.find("3:3") != std::string::npos);
    }
    CHECK(parse_error("algebra Q = Q[x]\n") == ErrorKind::DuplicateName);
}

TEST_CASE("cli: error kinds and positions")
{
    Location at;
    CHECK(parse_error("algebra B = Q[x] / (x**)\n", &at) == ErrorKind::Syntax);
    CHECK(at == Location{1, 21});
    CHECK(parse_error("algebra B = Q[x\n", &at) == ErrorKind::Syntax);
    CHECK(at == Location{1, 14});
    CHECK(parse_error("frobnicate B\n", &at) == ErrorKind::Syntax);
    CHECK(parse_error("map f : B -> B { x -> x }\n", &at) == ErrorKind::UnknownName);
    CHECK(at == Location{1, 9});
    CHECK(parse_error("algebra B = Q[x]\nmap f : B -> B { x -> y }\n", &at) == ErrorKind::UnknownName);
    CHECK(at == Location{2, 23});
    CHECK(parse_error("algebra B = Q[x]\nfoliation F = final(B/B)\n") == ErrorKind::TypeMismatch);
    CHECK(parse_error("algebra B = Q[x]\nmap f : B -> B { x -> x }\nweilres W = pushforward(B, f)\n") ==
          ErrorKind::TypeMismatch);
    CHECK(parse_error("algebra B = Q[x]\ncheck B points\n") == ErrorKind::TypeMismatch);
    CHECK(parse_error("check nothing\n") == ErrorKind::UnknownName);
    CHECK(parse_error("algebra B = Q[x]\n}\n", &at) == ErrorKind::Syntax);
    CHECK(at == Location{2, 1});
    CHECK(parse_error(std::string("algebra B = Q[x]\n\xff\n"), &at) == ErrorKind::Syntax);
    CHECK(at == Location{2, 1});

    auto bad_syntax = run(write_file("syntax.fw", "algebra B = Q[x] / (x**)\n"));
    CHECK(bad_syntax.code == BadInput);
    CHECK(bad_syntax.err.find(":1:21: error[syntax]") != std::string::npos);
    auto bad_name = run(write_file("name.fw", "check B\n"));
    CHECK(bad_name.code == BadInput);
    CHECK(bad_name.err.find("error[unknown-name]") != std::string::npos);
    auto bad_type = run(write_file("type.fw", "algebra B = Q[x]\nfoliation F = final(B/B)\n"));
    CHECK(bad_type.code == BadInput);
    CHECK(bad_type.err.find("error[type-mismatch]") != std::string::npos);
}

TEST_CASE("cli: corrupted eps fails and names the monomial")
{
    auto dir = scratch("corrupted");
    std::filesystem::remove_all(dir);
    auto r = run(data_dir / "corrupted_eps.fw", {}, dir);
    CHECK(r.code == CheckFailed);
    CHECK(r.out.find("pass #1") != std::string::npos);
    CHECK(r.out.find("FAIL #2") != std::string::npos);
    auto report = Json::parse(slurp(dir / "002-C-mixed.json"));
    CHECK(report["passed"] == false);
    CHECK(report["operation"] == "verify_mixed");
    auto failure = report["result"]["verification"]["first_failure"];
    CHECK(failure["identity"] == "eps_squared");
    CHECK(failure["monomial"] == "x");
    CHECK(failure["value"] == "dx*dy");
    CHECK(std::filesystem::exists(dir / "run-meta.json"));
}

TEST_CASE("cli: no checks")
{
    auto dir = scratch("none");
    std::filesystem::remove_all(dir);
    auto r = run(write_file("none.fw", "algebra B = Q[x]\nderham D = DR(B/Q)\n"), {}, dir);
    CHECK(r.code == AllPassed);
    std::size_t files = 0;
    for (auto& e : std::filesystem::directory_iterator(dir))
        files += e.path().filename() == "run-meta.json" ? 0 : 1;
    CHECK(files == 0);
}

TEST_CASE("cli: module errors carry the check index")
{
    auto file = write_file("module.fw", "algebra B = Q[x]\nalgebra B2 = Q[x, y]\nmap f : B -> B2 { x -> x*y }\n"
                                        "foliation Z = zero(B/Q)\npullback G = f^* Z\ncheck B\ncheck G comparison\n");
    auto r = run(file);
    CHECK(r.code == BadInput);
    CHECK(r.err.find("check #2") != std::string::npos);
    CHECK(r.err.find("error[unsupported-input]") != std::string::npos);
    CHECK(r.out.find("pass #1") != std::string::npos);
}

TEST_CASE("cli: budget overrun")
{
    auto ws = parse_workspace("mates M {\n objects C\n arrow L : C -> C, R : C -> C\n"
                              " adjunction L -| R unit h counit e\n"
                              " check equal (e ⋆ L) ∘ (L ⋆ h) = L\n}\ncheck M\n");
    Budget saved = Budget::defaults();
    Budget::set_defaults({saved.reduction_steps, 0});
    auto reports = run_checks(ws, {});
    Budget::set_defaults(saved);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].error == ErrorKind::BudgetExceeded);
    CHECK(exit_code(reports) == OverBudget);
    CHECK(run_checks(ws, {})[0].passed);
}

TEST_CASE("cli: exit code precedence")
{
    Report pass, failed, budget, input;
    pass.passed = true;
    budget.error = ErrorKind::BudgetExceeded;
    input.error = ErrorKind::UnknownName;
    CHECK(exit_code({}) == AllPassed);
    CHECK(exit_code({pass}) == AllPassed);
    CHECK(exit_code({pass, failed}) == CheckFailed);
    CHECK(exit_code({failed, budget}) == OverBudget);
    CHECK(exit_code({budget, input, failed}) == BadInput);
}

TEST_CASE("cli: reports are deterministic and parallel runs agree")
{
    auto ws = parse_workspace(slurp(data_dir / "dual_numbers.fw") + slurp(data_dir / "mates.fw"));
    RunOptions traced;
    traced.trace = true;
    auto a = run_checks(ws, traced);
    auto b = run_checks(ws, traced);
    traced.parallel = true;
    auto c = run_checks(ws, traced);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].file_name == b[i].file_name);
        CHECK(dump(a[i].json) == dump(b[i].json));
        CHECK(dump(a[i].json) == dump(c[i].json));
        CHECK(a[i].passed);
    }
    auto last = a.back().json;
    CHECK(last["result"]["checks"][0]["u_side"].contains("trace"));
    auto untraced = run_checks(ws, {}).back().json;
    CHECK_FALSE(untraced["result"]["checks"][0]["u_side"].contains("trace"));
}

TEST_CASE("cli: windows")
{
    Window w = parse_window("w=2,d=5");
    CHECK(w.weight == 2);
    CHECK(w.poly_degree == 5);
    CHECK(parse_window("d=1").weight == Window{}.weight);
    CHECK_THROWS_AS(parse_window("w=x"), Error);
    CHECK_THROWS_AS(parse_window("q=1"), Error);

    auto ws = parse_workspace("window w=1 d=2\nalgebra B = Q[x]\nderham D = DR(B/Q)\n"
                              "derham E = DR(B/Q) deg<=3\ncheck D\ncheck E\n");
    auto file_window = run_checks(ws, {});
    CHECK(file_window[0].json["window"]["weight"] == 1);
    CHECK(file_window[0].json["window"]["poly_degree"] == 2);
    CHECK(file_window[1].json["window"]["poly_degree"] == 3);
    RunOptions o;
    o.window = parse_window("w=2,d=3");
    auto overridden = run_checks(ws, o);
    CHECK(overridden[0].json["window"]["weight"] == 2);
    CHECK(overridden[0].json["window"]["poly_degree"] == 3);
    CHECK(overridden[1].json["window"]["weight"] == 3);
}

TEST_CASE("cli: mixed algebras round-trip through the DSL")
{
    auto ws = parse_workspace("algebra B = Q[x, y]\nalgebra N = Q[x] / (x^2)\n"
                              "derham D = DR(B/Q)\nderham DN = DR(N/Q)\n");
    for (std::string name : {"D", "DN"}) {
        const GradedMixedPresentation& f = *ws.get(name).gm;
        std::string text = to_dsl(f);
        auto back = parse_workspace(text);
        const Declaration& m = back.declarations.back();
        REQUIRE(m.kind == DeclKind::Mixed);
        const GradedMixedPresentation& g = *m.gm;
        REQUIRE(g.ring().size() == f.ring().size());
        for (std::size_t i = 0; i < f.ring().size(); ++i) {
            CHECK(g.ring().generator(i).name == f.ring().generator(i).name);
            CHECK(g.ring().generator(i).degree == f.ring().generator(i).degree);
            CHECK(g.ring().generator(i).weight == f.ring().generator(i).weight);
            CHECK(g.ring().format(g.d_images()[i]) == f.ring().format(f.d_images()[i]));
            CHECK(g.ring().format(g.eps_images()[i]) == f.ring().format(f.eps_images()[i]));
        }
        CHECK(g.quasi_free() == f.quasi_free());
        CHECK(verify_mixed(g).passed());
        CHECK(to_dsl(g).substr(text.find("mixed")) .find("quasifree") != std::string::npos);
    }
}

TEST_CASE("cli: custom foliation block")
{
    auto ws = parse_workspace("algebra B = Q[x]\n"
                              "foliation T = custom(B/Q) {\n"
                              "  cotangent E:-1, w:0\n"
                              "  d E = x*w\n"
                              "  anchor dx = w\n"
                              "}\n");
    const auto& f = *ws.get("T").foliation;
    CHECK(f.kind() == FoliationKind::Custom);
    CHECK(f.cotangent().rank(-1) == 1);
    CHECK(f.cotangent().rank(0) == 1);
    CHECK(f.cotangent().ring().format(f.cotangent().differential(-1)(0, 0)) == "x");
    CHECK(verify_foliation(f).passed());
    CHECK(parse_error("algebra B = Q[x]\nfoliation T = custom(B/Q) {\n cotangent w:0\n d w = w\n}\n") ==
          ErrorKind::UnknownName);
    // d∘d = x ≠ 0
    CHECK(parse_error("algebra B = Q[x]\nfoliation T = custom(B/Q) {\n cotangent a:-2, b:-1, c:0\n"
                      " d a = b\n d b = x*c\n}\n") == ErrorKind::InvalidInput);
    CHECK(parse_error("algebra B = Q[x]\nfoliation T = custom(B/Q) {\n cotangent w:0\n anchor dq = w\n}\n") ==
          ErrorKind::UnknownName);
    CHECK(parse_error("algebra B = Q[x]\nfoliation T = custom(B/Q) {\n cotangent w:0\n anchor dx = w*w\n}\n") ==
          ErrorKind::Syntax);
}
