#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mexcheck/oracle.hpp"
#include "mexcheck/zoo.hpp"

using namespace std;
using namespace mex;

TEST_CASE("naive product exploration agrees with the packed engine") {
    struct Case {
        const char *name;
        RegKind kind;
        RegStyle style;
    };
    for (const Case &c : {Case{"peterson", RegKind::Atomic,
                               RegStyle::InstantRead},
                          Case{"peterson", RegKind::Atomic,
                               RegStyle::FullRead},
                          Case{"peterson", RegKind::Regular,
                               RegStyle::InstantRead},
                          Case{"dekker", RegKind::Atomic,
                               RegStyle::InstantRead},
                          Case{"kessels", RegKind::Safe,
                               RegStyle::InstantRead}}) {
        CAPTURE(c.name);
        Program p = builtin(c.name);
        ModelConfig mc;
        mc.kind = c.kind;
        mc.style = c.style;
        mc.nthreads = 2;
        RegLayout lay = instantiate_registers(p, 2);
        for (auto &asg : any_assignments(lay)) {
            auto m = build(p, mc, asg);
            ExploredModel x = explore(*m, {}, false);
            REQUIRE(x.complete);
            OracleExplore o = oracle_explore(*m, 2'000'000);
            CHECK(o.states == x.graph.num_states());
            CHECK(o.transitions == x.graph.num_edges());
            CHECK(o.me_violation == x.me_violation);
            CHECK(o.fingerprint == graph_fingerprint(*m, x));
        }
    }
}

TEST_CASE("register fuzzing finds no consistency violations") {
    long total = 0;
    for (RegKind k : {RegKind::Safe, RegKind::Regular, RegKind::Atomic})
        for (RegStyle st : {RegStyle::FullRead, RegStyle::InstantRead}) {
            RegisterConfig cfg;
            cfg.kind = k;
            cfg.style = st;
            cfg.domain = 3;
            cfg.init = 1;
            cfg.name = "x";
            FuzzReport rep = register_fuzz(cfg, 3, 1200, 0xC0FFEE + (int)k);
            if (rep.failures)
                MESSAGE(rep.first);
            CHECK(rep.failures == 0);
            total += rep.runs;
        }
    for (Blocking b : {Blocking::BlockAll,
                       Blocking::BlockWritesAndReadsOfWrites,
                       Blocking::BlockWritesOnly}) {
        RegisterConfig cfg;
        cfg.kind = RegKind::Atomic;
        cfg.style = RegStyle::FullRead;
        cfg.domain = 3;
        cfg.init = 0;
        cfg.blocking = b;
        cfg.name = "x";
        FuzzReport rep = register_fuzz(cfg, 3, 1200, 0xBEEF + (int)b);
        if (rep.failures)
            MESSAGE(rep.first);
        CHECK(rep.failures == 0);
        total += rep.runs;
    }
    CHECK(total >= 10000);
}

TEST_CASE("read style never changes a verdict letter") {
    for (const char *name : {"peterson", "dekker", "kessels",
                             "attiya-welch"}) {
        CAPTURE(name);
        Program p = builtin(name);
        for (Conc c : {Conc::T, Conc::S, Conc::I, Conc::A}) {
            char a = 0, b = 0;
            bool ok = style_agreement(p, 2, c, {}, &a, &b);
            CAPTURE((int)c);
            CAPTURE(a);
            CAPTURE(b);
            CHECK(ok);
            CHECK(a == b); // both in budget here, so exact equality
        }
    }
}

TEST_CASE("blocking discipline never changes a verdict letter") {
    for (const char *name : {"peterson", "dekker", "kessels",
                             "attiya-welch"}) {
        CAPTURE(name);
        Program p = builtin(name);
        for (Conc c : {Conc::T, Conc::S, Conc::I, Conc::A})
            for (Blocking blk : {Blocking::BlockAll,
                                 Blocking::BlockWritesAndReadsOfWrites,
                                 Blocking::BlockWritesOnly}) {
                char a = 0, b = 0;
                bool ok = blocking_agreement(p, 2, c, blk, {}, &a, &b);
                CAPTURE((int)c);
                CAPTURE((int)blk);
                CAPTURE(a);
                CAPTURE(b);
                CHECK(ok);
                CHECK(a == b);
            }
    }
}

TEST_CASE("the trace oracle rejects corrupted witnesses") {
    Program p = builtin("kessels");
    Verdict v = verdict(p, RegKind::Regular, Conc::T, 2);
    REQUIRE(v.me.cex.has_value());
    ModelConfig mc;
    mc.kind = RegKind::Regular;
    mc.conc = Conc::T;
    mc.nthreads = 2;
    auto m = build(p, mc, v.me.cex->assignment);
    REQUIRE(oracle_check_trace(*m, *v.me.cex, Conc::T));

    Counterexample broken = *v.me.cex;
    REQUIRE(!broken.stem.empty());
    broken.stem.back().action.thread = 7; // no such thread
    CHECK(!oracle_check_trace(*m, broken, Conc::T));

    Counterexample wrong_pair = *v.me.cex;
    wrong_pair.crit_b = wrong_pair.crit_a;
    CHECK(!oracle_check_trace(*m, wrong_pair, Conc::T));
}
