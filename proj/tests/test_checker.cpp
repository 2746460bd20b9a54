#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mexcheck/oracle.hpp"
#include "mexcheck/render.hpp"
#include "mexcheck/zoo.hpp"

using namespace std;
using namespace mex;

namespace {

string row_letters(const string &name, int n) {
    Program p = builtin(name);
    string out;
    for (auto &v : verdict_row(p, n))
        out.push_back(v.letter);
    return out;
}

const ZooEntry &entry(const string &name) {
    for (const ZooEntry &e : reference_table())
        if (e.name == name)
            return e;
    throw runtime_error("no reference entry for " + name);
}

} // namespace

TEST_CASE("only the documented model/relation pairs are accepted") {
    CHECK_NOTHROW(validate_model(RegKind::Safe, Conc::T));
    CHECK_NOTHROW(validate_model(RegKind::Regular, Conc::T));
    for (Conc c : {Conc::T, Conc::S, Conc::I, Conc::A})
        CHECK_NOTHROW(validate_model(RegKind::Atomic, c));
    for (Conc c : {Conc::S, Conc::I, Conc::A}) {
        CHECK_THROWS_AS(validate_model(RegKind::Safe, c), ConfigError);
        CHECK_THROWS_AS(validate_model(RegKind::Regular, c), ConfigError);
    }
}

TEST_CASE("arbitrary initial values enumerate in ascending order") {
    Program p = parse("name a\nthreads 2\nreg u : bool = any\n"
                      "reg v : 0..2 = any\nreg w : bool = true\n"
                      "thread:\n  noncrit\n  crit\n");
    RegLayout lay = instantiate_registers(p, 2);
    auto asgs = any_assignments(lay);
    REQUIRE(asgs.size() == 6);
    CHECK(asgs.front() == vector<int>{0, 0, 1});
    CHECK(asgs[1] == vector<int>{0, 1, 1});
    CHECK(asgs.back() == vector<int>{1, 2, 1});
}

TEST_CASE("self-initialized registers start at the element index") {
    Program p = parse("name s\nthreads 3\nreg d[N] : 0..5 = self\n"
                      "thread:\n  noncrit\n  crit\n");
    RegLayout lay = instantiate_registers(p, 3);
    REQUIRE(lay.flat.size() == 3);
    for (int k = 0; k < 3; k++) {
        CHECK(lay.flat[k].init == k);
        CHECK(!lay.flat[k].any);
    }
}

TEST_CASE("peterson: correct with atomic registers, broken below") {
    CHECK(row_letters("peterson", 2) == entry("peterson").row);
}

TEST_CASE("kessels matches its reference row") {
    CHECK(row_letters("kessels", 2) == entry("kessels").row);
}

TEST_CASE("dekker matches its reference row") {
    CHECK(row_letters("dekker", 2) == entry("dekker").row);
}

TEST_CASE("attiya-welch and its tweak differ exactly as documented") {
    CHECK(row_letters("attiya-welch", 2) == entry("attiya-welch").row);
    CHECK(row_letters("attiya-welch-alt", 2) ==
          entry("attiya-welch-alt").row);
}

TEST_CASE("a mutual-exclusion violation carries a replayable trace") {
    Program p = builtin("kessels");
    Verdict v = verdict(p, RegKind::Regular, Conc::T, 2);
    REQUIRE(v.letter == 'X');
    REQUIRE(v.me.cex.has_value());
    const Counterexample &cex = *v.me.cex;
    CHECK(cex.kind == Counterexample::SafetyTrace);
    CHECK(cex.crit_a != cex.crit_b);

    ModelConfig mc;
    mc.kind = RegKind::Regular;
    mc.conc = Conc::T;
    mc.nthreads = 2;
    auto m = build(p, mc, cex.assignment);
    string why;
    bool ok = oracle_check_trace(*m, cex, Conc::T, &why);
    if (!ok)
        MESSAGE(why);
    CHECK(ok);
}

TEST_CASE("a starvation lasso names the starving thread and replays") {
    Program p = builtin("dekker");
    Verdict v = verdict(p, RegKind::Atomic, Conc::S, 2);
    REQUIRE(v.letter == 'D');
    REQUIRE(v.sf.cex.has_value());
    const Counterexample &cex = *v.sf.cex;
    CHECK(cex.kind == Counterexample::LivenessLasso);
    CHECK(cex.starving_thread >= 0);

    ModelConfig mc;
    mc.kind = RegKind::Atomic;
    mc.conc = Conc::S;
    mc.nthreads = 2;
    auto m = build(p, mc, cex.assignment);
    string why;
    bool ok = oracle_check_trace(*m, cex, Conc::S, &why);
    if (!ok)
        MESSAGE(why);
    CHECK(ok);
}

TEST_CASE("human and structured trace rendering") {
    Program p = builtin("kessels");
    Verdict v = verdict(p, RegKind::Regular, Conc::T, 2);
    REQUIRE(v.me.cex.has_value());
    string human = render_trace(*v.me.cex, TraceFormat::Human);
    CHECK(human.find("initial:") != string::npos);
    CHECK(human.find("crit_") != string::npos);
    string js = render_trace(*v.me.cex, TraceFormat::Structured);
    CHECK(js.find("\"kind\": \"safety_trace\"") != string::npos);
    CHECK(js.find("\"crit_threads\"") != string::npos);

    Verdict d = verdict(builtin("dekker"), RegKind::Atomic, Conc::S, 2);
    REQUIRE(d.sf.cex.has_value());
    string lasso = render_trace(*d.sf.cex, TraceFormat::Human);
    bool lasso_shape = lasso.find("cycle repeats") != string::npos ||
                       lasso.find("no further progress") != string::npos;
    CHECK(lasso_shape);
}

TEST_CASE("a tiny state budget yields an inconclusive verdict") {
    Program p = builtin("dekker");
    CheckOptions opt;
    opt.budget.max_states = 50;
    Verdict v = verdict(p, RegKind::Atomic, Conc::T, 2, opt);
    CHECK(v.letter == '?');
}

TEST_CASE("verdict letters respect the property hierarchy") {
    // a starvation-freedom failure never comes with a deadlock-freedom
    // failure marked as passing inconsistently, and vice versa
    for (const char *name : {"peterson", "dekker", "attiya-welch"}) {
        for (Conc c : {Conc::T, Conc::S, Conc::I, Conc::A}) {
            Verdict v = verdict(builtin(name), RegKind::Atomic, c, 2);
            if (v.letter == 'S') {
                CHECK(v.me.holds);
                CHECK(v.df.holds);
                CHECK(v.sf.holds);
            } else if (v.letter == 'D') {
                CHECK(v.df.holds);
                CHECK(!v.sf.holds);
            } else if (v.letter == 'M') {
                CHECK(!v.df.holds);
            }
        }
    }
}

TEST_CASE("verdicts agree between shared-graph rows and single calls") {
    Program p = builtin("attiya-welch");
    auto row = verdict_row(p, 2);
    REQUIRE(row.size() == 6);
    CHECK(row[0].letter == verdict(p, RegKind::Safe, Conc::T, 2).letter);
    CHECK(row[2].letter == verdict(p, RegKind::Atomic, Conc::T, 2).letter);
    CHECK(row[5].letter == verdict(p, RegKind::Atomic, Conc::A, 2).letter);
}
