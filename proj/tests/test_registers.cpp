#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mexcheck/registers.hpp"

#include <bit>
#include <tuple>

using namespace std;
using namespace mex;

namespace {

RegisterConfig make(RegKind k, RegStyle st, int domain = 2, int init = 0,
                    Blocking b = Blocking::None) {
    RegisterConfig cfg;
    cfg.kind = k;
    cfg.style = st;
    cfg.domain = domain;
    cfg.init = init;
    cfg.blocking = b;
    cfg.name = "x";
    return cfg;
}

const char *kFig1 = R"(
# one writer, two readers, interval order fixed by the script
sw 0 0
fw 0
sr 1
sr 2
fr 1
fr 2
sr 1
sw 0 2
fr 1
sr 2
sr 1
fw 0
fr 2
fr 1
)";

const char *kFig2 = R"(
# three writers crossing each other
sw 0 0
fw 0
sr 2
sw 1 1
fr 2
sw 2 2
sr 0
fw 1
sr 1
fr 0
fr 1
fw 2
sr 0
fr 0
sr 2
fr 2
)";

set<vector<int>> outcomes(RegKind k, const char *script, int domain = 3) {
    RegisterConfig cfg = make(k, RegStyle::FullRead, domain, 0);
    return enumerate_scenario_outcomes(cfg, 3, parse_scenario(script));
}

} // namespace

TEST_CASE("scenario parser reads the five event forms") {
    auto ev = parse_scenario("sr 1\nfr 1\nsw 0 2\nfw 0\nir 2\n# done\n");
    REQUIRE(ev.size() == 5);
    CHECK(ev[0].type == ScenarioEvent::SR);
    CHECK(ev[0].thread == 1);
    CHECK(ev[2].type == ScenarioEvent::SW);
    CHECK(ev[2].value == 2);
    CHECK(ev[4].type == ScenarioEvent::IR);
}

TEST_CASE("single-writer scenario: atomic registers allow exactly five runs") {
    auto got = outcomes(RegKind::Atomic, kFig1);
    set<vector<int>> want;
    for (auto [c, d, e] : {tuple{0, 0, 0}, tuple{0, 0, 2}, tuple{0, 2, 0},
                           tuple{0, 2, 2}, tuple{2, 2, 2}})
        want.insert({0, 0, c, d, e});
    CHECK(got == want);
}

TEST_CASE("single-writer scenario: safe reads under overlap are arbitrary") {
    auto got = outcomes(RegKind::Safe, kFig1);
    set<vector<int>> want;
    for (int c = 0; c < 3; c++)
        for (int d = 0; d < 3; d++)
            for (int e = 0; e < 3; e++)
                want.insert({0, 0, c, d, e});
    CHECK(got == want);
}

TEST_CASE("single-writer scenario: regular reads see old or new only") {
    auto got = outcomes(RegKind::Regular, kFig1);
    set<vector<int>> want;
    for (int c : {0, 2})
        for (int d : {0, 2})
            for (int e : {0, 2})
                want.insert({0, 0, c, d, e});
    CHECK(got == want);
}

TEST_CASE("multi-writer scenario: safe overlap, final value decided once") {
    auto got = outcomes(RegKind::Safe, kFig2);
    set<vector<int>> want;
    for (int a = 0; a < 3; a++)
        for (int b = 0; b < 3; b++)
            for (int c = 0; c < 3; c++)
                for (int d = 0; d < 3; d++)
                    want.insert({a, b, c, d, d});
    CHECK(got == want);
}

TEST_CASE("multi-writer scenario: regular narrows every read") {
    auto got = outcomes(RegKind::Regular, kFig2);
    set<vector<int>> want;
    for (int a : {0, 1})
        for (int b : {0, 1, 2})
            for (int c : {1, 2})
                for (int d : {1, 2})
                    want.insert({a, b, c, d, d});
    CHECK(got == want);
}

TEST_CASE("multi-writer scenario: atomic runs are a subset of regular ones") {
    auto at = outcomes(RegKind::Atomic, kFig2);
    auto re = outcomes(RegKind::Regular, kFig2);
    CHECK(!at.empty());
    for (auto &o : at) {
        CHECK(re.count(o));
        CHECK(o[3] == o[4]);
    }
}

TEST_CASE("new-old inversion: regular yes, atomic no") {
    const char *script = "sw 0 1\nsr 1\nfr 1\nsr 1\nfr 1\nfw 0\n";
    RegisterConfig reg = make(RegKind::Regular, RegStyle::FullRead);
    RegisterConfig atm = make(RegKind::Atomic, RegStyle::FullRead);
    auto rr = enumerate_scenario_outcomes(reg, 2, parse_scenario(script));
    auto ra = enumerate_scenario_outcomes(atm, 2, parse_scenario(script));
    CHECK(rr == set<vector<int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK(ra == set<vector<int>>{{0, 0}, {0, 1}, {1, 1}});
}

TEST_CASE("reachable statuses are canonical fixpoints") {
    for (RegKind k : {RegKind::Safe, RegKind::Regular, RegKind::Atomic})
        for (RegStyle st : {RegStyle::FullRead, RegStyle::InstantRead}) {
            ActionTable tab;
            vector<RegStatus> sts;
            RegisterConfig cfg = make(k, st, 3, 1);
            Lts l = register_lts(cfg, 3, tab, &sts);
            REQUIRE((int)sts.size() == l.num_states());
            for (const RegStatus &s : sts)
                CHECK(canonicalize(s, cfg, 3) == s);
        }
}

TEST_CASE("solo runs behave like a plain variable") {
    for (RegKind k : {RegKind::Safe, RegKind::Regular, RegKind::Atomic})
        for (RegStyle st : {RegStyle::FullRead, RegStyle::InstantRead}) {
            RegisterConfig cfg = make(k, st, 3, 2);
            RegStatus s = canonicalize(initial_status(cfg, 1), cfg, 1);
            // read now: must return the initial value
            for (const RegStep &step : register_steps(s, cfg, 1))
                if (step.action.kind == Kind::FinishRead ||
                    step.action.kind == Kind::InstantRead)
                    CHECK(step.action.value == 2);
            // complete a write of 1, then every read is 1
            auto take = [&](Kind kind) {
                for (const RegStep &step : register_steps(s, cfg, 1))
                    if (step.action.kind == kind &&
                        (kind != Kind::StartWrite || step.payload == 1)) {
                        s = canonicalize(apply_update(s, step.action,
                                                      step.payload, cfg, 1),
                                         cfg, 1);
                        return true;
                    }
                return false;
            };
            REQUIRE(take(Kind::StartWrite));
            take(Kind::OrderWrite);
            REQUIRE(take(Kind::FinishWrite));
            bool read_seen = false;
            for (const RegStep &step : register_steps(s, cfg, 1))
                if (step.action.kind == Kind::FinishRead ||
                    step.action.kind == Kind::InstantRead) {
                    read_seen = true;
                    CHECK(step.action.value == 1);
                } else if (step.action.kind == Kind::StartRead) {
                    read_seen = true; // full read: start, then finish
                    RegStatus t = canonicalize(
                        apply_update(s, step.action, step.payload, cfg, 1),
                        cfg, 1);
                    for (const RegStep &fin : register_steps(t, cfg, 1))
                        if (fin.action.kind == Kind::FinishRead)
                            CHECK(fin.action.value == 1);
                }
            CHECK(read_seen);
        }
}

TEST_CASE("overlapping safe writes may finish with any value") {
    RegisterConfig cfg = make(RegKind::Safe, RegStyle::FullRead, 3, 0);
    RegStatus s = canonicalize(initial_status(cfg, 2), cfg, 2);
    Action w0, w1;
    w0.kind = w1.kind = Kind::StartWrite;
    w0.reg = w1.reg = 0;
    w0.thread = 0;
    w1.thread = 1;
    w0.value = 1;
    w1.value = 2;
    s = canonicalize(apply_update(s, w0, 1, cfg, 2), cfg, 2);
    s = canonicalize(apply_update(s, w1, 2, cfg, 2), cfg, 2);
    set<int> finals;
    for (const RegStep &step : register_steps(s, cfg, 2))
        if (step.action.kind == Kind::FinishWrite && step.action.thread == 0)
            finals.insert(step.payload);
    CHECK(finals == set<int>{0, 1, 2});
}

TEST_CASE("blocking disciplines keep the forbidden overlaps unreachable") {
    auto check_reachable = [](Blocking b, auto ok) {
        ActionTable tab;
        vector<RegStatus> sts;
        RegisterConfig cfg =
            make(RegKind::Atomic, RegStyle::FullRead, 2, 0, b);
        register_lts(cfg, 3, tab, &sts);
        for (const RegStatus &s : sts)
            CHECK(ok(s));
    };
    check_reachable(Blocking::BlockAll, [](const RegStatus &s) {
        return popcount((unsigned)(s.rds | s.wrts)) <= 1;
    });
    check_reachable(Blocking::BlockWritesAndReadsOfWrites,
                    [](const RegStatus &s) {
                        return popcount((unsigned)s.wrts) <= 1 &&
                               (s.wrts == 0 || s.rds == 0);
                    });
    check_reachable(Blocking::BlockWritesOnly, [](const RegStatus &s) {
        return popcount((unsigned)s.wrts) <= 1;
    });
}

TEST_CASE("blocking is rejected outside full-read atomic registers") {
    ActionTable tab;
    RegisterConfig cfg =
        make(RegKind::Regular, RegStyle::FullRead, 2, 0, Blocking::BlockAll);
    CHECK_THROWS(register_lts(cfg, 2, tab));
    cfg = make(RegKind::Atomic, RegStyle::InstantRead, 2, 0,
               Blocking::BlockAll);
    CHECK_THROWS(register_lts(cfg, 2, tab));
}

TEST_CASE("instant and full read styles share the write interface") {
    // the same write schedule drives both styles to the same stored value
    for (RegKind k : {RegKind::Safe, RegKind::Regular, RegKind::Atomic}) {
        RegisterConfig fi = make(k, RegStyle::FullRead, 4, 3);
        RegisterConfig in = make(k, RegStyle::InstantRead, 4, 3);
        RegStatus a = canonicalize(initial_status(fi, 2), fi, 2);
        RegStatus b = canonicalize(initial_status(in, 2), in, 2);
        Action w;
        w.kind = Kind::StartWrite;
        w.reg = 0;
        w.thread = 1;
        w.value = 2;
        a = canonicalize(apply_update(a, w, 2, fi, 2), fi, 2);
        b = canonicalize(apply_update(b, w, 2, in, 2), in, 2);
        for (Kind step : {Kind::OrderWrite, Kind::FinishWrite}) {
            if (k == RegKind::Safe && step == Kind::OrderWrite)
                continue;
            Action f;
            f.kind = step;
            f.reg = 0;
            f.thread = 1;
            int payload = 2; // the order step already stored 2 where needed
            a = canonicalize(apply_update(a, f, payload, fi, 2), fi, 2);
            b = canonicalize(apply_update(b, f, payload, in, 2), in, 2);
        }
        CHECK(a.stor == 2);
        CHECK(a.stor == b.stor);
    }
}
