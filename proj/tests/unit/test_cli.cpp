#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "doctest.h"
#include "motivic/charts_cli.hpp"

using namespace mot;

namespace {

std::size_t error_position(const std::string& expr) {
    try {
        parse_target(expr, BaseField::from_q(5));
    } catch (const ParseError& e) {
        return e.position();
    }
    return std::string::npos;
}

// Splits a command line on blanks, keeping double-quoted words together.
std::vector<std::string> words(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false, any = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
            any = true;
        } else if (c == ' ' && !quoted) {
            if (any) out.push_back(cur);
            cur.clear();
            any = false;
        } else {
            cur += c;
            any = true;
        }
    }
    if (any) out.push_back(cur);
    return out;
}

int run(const std::vector<std::string>& args, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int rc = run_cli(args, out, err);
    if (err_text) *err_text = err.str();
    return rc;
}

}  // namespace

TEST_CASE("expressions parse") {
    const BaseField F = BaseField::from_q(3);
    CHECK(parse_target("M2", F).comodule.size() == 1);
    CHECK(parse_target(" B0( 1 ) ", F).text == "B0(1)");
    CHECK(parse_target("tensor(B0(1),B0(1))", F).comodule.size() == 9);
    CHECK(parse_target("B0(1)^2", F).comodule.size() == 9);
    CHECK(parse_target("suspend(M2,4,2)", F).comodule.gen(0).deg == BiDegree{4, 2});
    const ChartTarget t = parse_target("adams_cover(M2, 2)", F);
    CHECK(t.cover == 2);
    CHECK(t.text == "adams_cover(M2,2)");
}

TEST_CASE("parse errors carry the position") {
    CHECK(error_position("B0(1") == 4);
    CHECK(error_position("tensor(B0(1),,M2)") == 13);
    CHECK(error_position("B2(1)") == 0);
    CHECK(error_position("M2 M2") == 3);
    CHECK(error_position("suspend(M2,x,0)") == 11);
    CHECK(error_position("tensor(M2,adams_cover(M2,1))") == 10);
    CHECK(error_position("B0(-1)") == 3);
}

TEST_CASE("field flags") {
    CHECK(field_from_flags("", 5).kind == FieldKind::QOne);
    CHECK(field_from_flags("", 7).kind == FieldKind::QThree);
    CHECK(field_from_flags("q3", 0).q == 3);
    CHECK(field_from_flags("c", 5).kind == FieldKind::ComplexLike);
    CHECK_THROWS_AS(field_from_flags("q3", 5), std::invalid_argument);
    CHECK_THROWS_AS(field_from_flags("r", 5), std::invalid_argument);
}

TEST_CASE("SVG output is deterministic and marks relation edges") {
    const BaseField F = BaseField::from_q(3);
    const ExtChart E = ext_minimal(unit_comodule(FragmentKind::A1Dual, F), {-2, 8, 6, -6, 8});
    SvgStyle st;
    st.coweight_split = true;
    st.title = "test";
    const std::string a = chart_svg(E, st);
    const std::string b = chart_svg(ExtChart::from_json(E.to_json()), st);
    CHECK(a == b);
    CHECK(a.rfind("<?xml", 0) == 0);
    CHECK(a.find("version=\"1.1\"") != std::string::npos);
    CHECK(a.find("coweight odd") != std::string::npos);
    // rho a = tau2 h1^3 is drawn dashed.
    CHECK(a.find("stroke-dasharray") != std::string::npos);
    CHECK(a.find("</svg>") != std::string::npos);
}

TEST_CASE("tables and atomic writes") {
    const BaseField F = BaseField::from_q(5);
    const ExtChart E = ext_minimal(unit_comodule(FragmentKind::A0Dual, F), {-2, 0, 2, -2, 0});
    const std::string t = dims_table(E);
    CHECK(t.rfind("s\tf\tw\tdim\tclasses\n", 0) == 0);
    CHECK(t.find("0\t0\t0\t1\t1\n") != std::string::npos);
    const auto dir = std::filesystem::temp_directory_path() / ("motivic-cli-" + std::to_string(::getpid()));
    const std::string path = (dir / "sub" / "x.txt").string();
    write_atomic(path, "one\n");
    write_atomic(path, "two\n");
    std::ifstream in(path);
    std::string s;
    std::getline(in, s);
    CHECK(s == "two");
    CHECK(std::distance(std::filesystem::directory_iterator(dir / "sub"), {}) == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("command line checks its arguments") {
    std::string err;
    CHECK(run({"ext", "M2", "--dry-run"}) == 0);
    CHECK(run({"ext", "B0(1", "--dry-run"}, &err) == 2);
    CHECK(err.find("position 4") != std::string::npos);
    CHECK(err.find("    ^") != std::string::npos);
    CHECK(run({"mass", "ko", "--dry-run"}) == 2);
    CHECK(run({"verify", "nothing", "--dry-run"}) == 2);
    CHECK(run({"ext", "M2", "--field", "q3", "--q", "5", "--dry-run"}, &err) == 2);
    CHECK(run({"ext", "M2", "--truncate", "2", "--h1-truncate", "2", "--dry-run"}) == 2);
    CHECK(run({}) == 2);
}

TEST_CASE("verify writes a versioned report and fails on mismatch") {
    const auto dir = std::filesystem::temp_directory_path() / ("motivic-verify-" + std::to_string(::getpid()));
    RunConfig cfg;
    cfg.field = BaseField::from_q(3);
    cfg.out_dir = dir.string();
    const VerifyOutcome v = cmd_verify("massey", "", 0, cfg);
    CHECK(v.report.ok());
    REQUIRE(v.written.size() == 1);
    std::ifstream in(v.written[0]);
    std::string first;
    std::getline(in, first);
    CHECK(first == "motivic-report v1");
    std::filesystem::remove_all(dir);
}

TEST_CASE("the README maps every figure to a valid command") {
    std::ifstream in(std::string(MOTIVIC_SOURCE_DIR) + "/README.md");
    REQUIRE(in);
    const std::regex row(R"(^\|\s*(\d+)\s*\|.*`charts_cli ([^`]+)`)");
    std::set<int> figures;
    std::string line;
    while (std::getline(in, line)) {
        std::smatch m;
        if (!std::regex_search(line, m, row)) continue;
        figures.insert(std::stoi(m[1]));
        auto args = words(m[2]);
        args.push_back("--dry-run");
        std::string err;
        CHECK_MESSAGE(run(args, &err) == 0, m[2].str() << ": " << err);
    }
    for (int f = 1; f <= 13; ++f) CHECK_MESSAGE(figures.count(f), "figure " << f << " has no command");
}
