#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mexcheck/compile.hpp"
#include "mexcheck/zoo.hpp"

using namespace std;
using namespace mex;

namespace {

const char *kToy = R"(name toy
threads 2

reg flag[N] : bool = false
reg turn : 0..N-1 = any

var t

thread:
  noncrit
  flag[i] := true
  await turn == i || flag[j] == false
  crit
  flag[i] := false
)";

} // namespace

TEST_CASE("parser: declarations and layout instantiation") {
    Program p = parse(kToy);
    CHECK(p.name == "toy");
    CHECK(p.default_n == 2);
    REQUIRE(p.regs.size() == 2);
    CHECK(p.regs[0].array);
    CHECK(p.regs[1].any);

    RegLayout lay = instantiate_registers(p, 2);
    REQUIRE(lay.flat.size() == 3);
    CHECK(lay.flat[0].name == "flag[0]");
    CHECK(lay.flat[1].name == "flag[1]");
    CHECK(lay.flat[2].name == "turn");
    CHECK(lay.flat[0].domain == 2);
    CHECK(lay.flat[2].domain == 2);
    CHECK(lay.flat[2].any);
    CHECK(lay.find_base(p, "turn") == 2);

    LocalLayout loc = instantiate_locals(p, 2);
    CHECK(loc.find("t") >= 0);
    CHECK(loc.count_of("t") == 1);
}

TEST_CASE("parser: expression shapes and precedence") {
    Program p = parse("name e\nthreads 2\nreg x : 0..7 = 0\nvar a\n"
                      "thread:\n  noncrit\n"
                      "  a := 1 + 2 * 3 % 4\n"
                      "  await a == 7 || a < 2 && a != 0\n"
                      "  crit\n");
    REQUIRE(p.body.size() == 4);
    const Stmt &assign = *p.body[1];
    CHECK(assign.kind == St::Assign);
    // 1 + ((2*3) % 4) = 3
    CHECK(eval_const(assign.value.get(), 2) == 3);
    const Stmt &aw = *p.body[2];
    REQUIRE(aw.kind == St::Await);
    CHECK(aw.cond->kind == Ex::Or); // && binds tighter than ||
}

TEST_CASE("parser: errors carry a position and a code") {
    auto bad = [](const char *text) {
        try {
            parse(text);
        } catch (const ParseError &e) {
            CHECK(e.line > 0);
            CHECK(!e.code.empty());
            return true;
        }
        return false;
    };
    CHECK(bad("name x\nthreads 2\nthread:\n  fnord\n"));
    CHECK(bad("name x\nthreads 2\nthread:\n  if true\n  noncrit\n")); // no end
    CHECK(bad("name x\nthreads 2\nthread:\n  y := 1\n")); // undeclared
    CHECK(bad("name x\nthreads 2\nreg x : bool = 3\nthread:\n  noncrit\n"));
    CHECK(bad("name x\nthreads 2\nthread:\n  goto nowhere\n  noncrit\n"));
}

TEST_CASE("compile: toy program produces a sane thread automaton") {
    Program p = parse(kToy);
    RegLayout lay = instantiate_registers(p, 2);
    for (int i = 0; i < 2; i++) {
        ActionTable tab;
        ThreadLts t = compile_thread(p, i, 2, RegStyle::InstantRead, tab);
        CHECK(t.thread == i);
        CHECK(t.lts.num_states() > 3);
        auto rep = validate_thread_properties(t, lay);
        if (!rep.ok)
            for (auto &v : rep.violations)
                MESSAGE(v);
        CHECK(rep.ok);
        // phases and pending are aligned with the states
        CHECK(t.pending.size() == (size_t)t.lts.num_states());
        CHECK(t.phase.size() == (size_t)t.lts.num_states());
        CHECK(t.phase[0] == Phase::NonCritical);
        CHECK(!t.pending[0]);
    }
}

TEST_CASE("compile: read style conversions invert each other") {
    Program p = parse(kToy);
    ActionTable tab;
    ThreadLts inst = compile_thread(p, 0, 2, RegStyle::InstantRead, tab);
    ThreadLts full = compile_thread(p, 0, 2, RegStyle::FullRead, tab);
    ThreadLts expanded = instant_to_full(inst, tab);
    ThreadLts collapsed = full_to_instant(full, tab);
    CHECK(isomorphic(expanded.lts, full.lts));
    CHECK(isomorphic(collapsed.lts, inst.lts));
}

TEST_CASE("compile: quantifier forms and for loops") {
    const char *text = R"(name q
threads 3
reg lvl[N] : 0..N = 0
var m
var j
thread:
  noncrit
  lvl[i] := 1
  await all k != i : lvl[k] < 2
  m := max all k : lvl[k]
  for j from 0 to N - 1
    lvl[i] := min(m + 1, N)
  end
  m := 0
  crit
  lvl[i] := 0
)";
    Program p = parse(text);
    RegLayout lay = instantiate_registers(p, 3);
    CHECK(lay.flat.size() == 3);
    ActionTable tab;
    ThreadLts t = compile_thread(p, 1, 3, RegStyle::InstantRead, tab);
    auto rep = validate_thread_properties(t, lay);
    if (!rep.ok)
        for (auto &v : rep.violations)
            MESSAGE(v);
    CHECK(rep.ok);
}

TEST_CASE("every bundled algorithm parses, compiles, and validates") {
    for (const string &name : builtin_names()) {
        CAPTURE(name);
        Program p;
        REQUIRE_NOTHROW(p = builtin(name));
        int n = p.has_default_n ? p.default_n : 2;
        RegLayout lay = instantiate_registers(p, n);
        for (int i = 0; i < n; i++) {
            ActionTable tab;
            ThreadLts t = compile_thread(p, i, n, RegStyle::InstantRead, tab);
            auto rep = validate_thread_properties(t, lay);
            if (!rep.ok)
                for (auto &v : rep.violations)
                    MESSAGE(name << " t" << i << ": " << v);
            CHECK(rep.ok);
        }
    }
}

TEST_CASE("every bundled algorithm round-trips between read styles") {
    for (const string &name : builtin_names()) {
        CAPTURE(name);
        Program p = builtin(name);
        int n = p.has_default_n ? p.default_n : 2;
        ActionTable tab;
        ThreadLts inst = compile_thread(p, 0, n, RegStyle::InstantRead, tab);
        ThreadLts full = compile_thread(p, 0, n, RegStyle::FullRead, tab);
        CHECK(isomorphic(instant_to_full(inst, tab).lts, full.lts));
        CHECK(isomorphic(full_to_instant(full, tab).lts, inst.lts));
    }
}

TEST_CASE("composed wrapper variants splice in their own state") {
    Program base = builtin("lamport-1bit");
    Program wrapped = builtin("lamport-1bit-bar-david");
    CHECK(wrapped.name == base.name + "-bar-david");
    CHECK(wrapped.regs.size() == base.regs.size() + 2);
    bool has_bturn = false;
    for (auto &r : wrapped.regs)
        if (r.name == "bturn") {
            has_bturn = true;
            CHECK(r.any);
        }
    CHECK(has_bturn);
}
