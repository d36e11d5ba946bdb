#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcf/io.hpp"

using namespace mcf;

namespace {
const Prime p5(5);

PAdic ex(const Prime& p, const Rat& x) { return PAdic::exact(p, x); }
}  // namespace

TEST_CASE("rational formatting and parsing round-trips") {
    CHECK(io::rat_str(rat_of(32, 5)) == "32/5");
    CHECK(io::rat_str(Rat(7)) == "7");
    CHECK(io::rat_str(rat_of(-7, 5)) == "-7/5");
    CHECK(io::rat_str(Rat(0)) == "0");
    CHECK(io::parse_rat("32/5") == rat_of(32, 5));
    CHECK(io::parse_rat("-3") == -3);
    CHECK(io::parse_rat("6/4") == rat_of(3, 2));  // canonicalized
    for (const Rat& x : {rat_of(355, 113), Rat(-1), rat_of(1, 1000000)})
        CHECK(io::parse_rat(io::rat_str(x)) == x);
    CHECK_THROWS_AS(io::parse_rat("abc"), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_rat("1/0"), std::invalid_argument);
}

TEST_CASE("YElem from rational") {
    YElem y = io::y_of_rat(rat_of(7, 5), p5);
    CHECK(y.to_rational() == rat_of(7, 5));
    CHECK_THROWS_AS(io::y_of_rat(rat_of(1, 3), p5), std::invalid_argument);
    CHECK_THROWS_AS(io::y_of_rat(Rat(3), p5), std::invalid_argument);  // |3| >= 5/2
    CHECK(io::y_of_rat(Rat(0), p5).is_zero());
}

TEST_CASE("input literals: rational") {
    io::InputSpec in = io::parse_input("32/5");
    CHECK(in.kind == io::InputSpec::Kind::Rational);
    CHECK(in.rational == rat_of(32, 5));
    PAdic v = io::realize(in, p5);
    CHECK(v.is_exact());
    CHECK(v.repr() == rat_of(32, 5));
}

TEST_CASE("input literals: algebraic root with and without offset") {
    io::InputSpec in = io::parse_input("root:-6,0,1@1@50");
    CHECK(in.kind == io::InputSpec::Kind::Root);
    PAdic r = io::realize(in, p5);
    CHECK(r.precision() == 50);
    CHECK(vp(poly_eval(std::vector<Int>{Int(-6), Int(0), Int(1)}, r.repr()), p5) >=
          Val::of(50));

    io::InputSpec plus = io::parse_input("root:-6,0,1@1@50+7/5");
    PAdic rp = io::realize(plus, p5);
    CHECK(rp.repr() == r.repr() + rat_of(7, 5));
    io::InputSpec minus = io::parse_input("root:-6,0,1@1@50-1");
    PAdic rm = io::realize(minus, p5);
    CHECK(rm.repr() == r.repr() - 1);
}

TEST_CASE("input literal errors") {
    CHECK_THROWS_AS(io::parse_input("root:@1@50"), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_input("root:-6,0,1@1"), std::invalid_argument);
    CHECK_THROWS_AS(io::parse_input(""), std::invalid_argument);
}

TEST_CASE("status strings round-trip") {
    for (TermStatus s :
         {TermStatus::Finite, TermStatus::DepthLimited, TermStatus::PrecisionExhausted})
        CHECK(io::status_of(io::status_str(s)) == s);
    CHECK_THROWS_AS(io::status_of("bogus"), std::invalid_argument);
}

TEST_CASE("trace serialization schema and round-trip") {
    ExpansionTrace t = expand_trace(ex(p5, rat_of(32, 5)), ex(p5, rat_of(26, 5)), 10);
    io::json j = io::trace_json(t, "32/5,26/5");
    CHECK(j["p"] == 5);
    CHECK(j["status"] == "Finite");
    REQUIRE(j["steps"].size() == 2);
    const auto& s0 = j["steps"][0];
    CHECK(s0["n"] == 0);
    CHECK(s0["a"] == "7/5");
    CHECK(s0["b"] == "1/5");
    CHECK(s0["A"] == "7/5");
    CHECK(s0["K"] == 0);  // K_n sums the exponents of a_1..a_n
    CHECK(j["steps"][1]["K"] == 1);
    CHECK(s0["vVa"] == 1);
    const auto& s1 = j["steps"][1];
    CHECK(s1["A"] == "32/25");
    CHECK(s1["B"] == "26/25");
    CHECK(s1["C"] == "1/5");
    CHECK(s1["tildeA"] == "1");
    CHECK(s1["tildeB"] == "1");
    CHECK(s1["vVa"] == "inf");  // V_1 == 0 exactly

    io::ParsedTrace back = io::parse_trace(j);
    CHECK(back.p == 5);
    CHECK(back.status == "Finite");
    REQUIRE(back.steps.size() == 2);
    CHECK(back.steps[0].a == rat_of(7, 5));
    CHECK(back.steps[1].A == rat_of(32, 25));
    CHECK(back.steps[0].vVa_known);
    CHECK(back.steps[0].vVa == Val::of(1));
    CHECK(back.steps[1].vVa_known);
    CHECK(back.steps[1].vVa.is_inf());

    // re-serialization is byte-identical
    io::json j2 = io::trace_json(t, "32/5,26/5");
    CHECK(j.dump() == j2.dump());
}

TEST_CASE("parse_trace rejects malformed documents") {
    io::json bad = {{"p", 5}, {"status", "Finite"}};  // no steps
    CHECK_THROWS_AS(io::parse_trace(bad), std::invalid_argument);
    io::json bad2 = {{"p", 4}, {"input", ""}, {"status", "Finite"},
                     {"steps", io::json::array()}};
    CHECK_THROWS_AS(io::parse_trace(bad2), std::invalid_argument);
}

TEST_CASE("report serialization: json and csv") {
    BoundReport r{"demo", {}};
    r.add(0, "lhs,with,commas", "rhs \"quoted\"", true);
    r.add(1, "x", "y", false);
    io::json j = io::report_json(r);
    CHECK(j["name"] == "demo");
    CHECK(j["all_hold"] == false);
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0]["ok"] == true);
    CHECK(j["rows"][1]["n"] == 1);

    std::string csv = io::report_csv(r);
    CHECK(csv.find("name,n,lhs,rhs,ok\r\n") == 0);
    // RFC 4180: embedded commas force quotes, embedded quotes double up
    CHECK(csv.find("\"lhs,with,commas\"") != std::string::npos);
    CHECK(csv.find("\"rhs \"\"quoted\"\"\"") != std::string::npos);
    CHECK(csv.find("demo,1,x,y,false\r\n") != std::string::npos);
}
