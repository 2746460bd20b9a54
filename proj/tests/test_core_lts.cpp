#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mexcheck/lts.hpp"

#include <algorithm>
#include <set>

using namespace std;
using namespace mex;

namespace {

Action act(Kind k, int t, int reg = -1, int value = -1, int tag = 0) {
    Action a;
    a.kind = k;
    a.thread = (int8_t)t;
    a.reg = (int16_t)reg;
    a.value = (int16_t)value;
    a.tag = (int16_t)tag;
    return a;
}

// a little two-state toggle component over one synchronizing label and one
// private label
Lts toggle(ActionTable &tab, int sync_tag, int priv_tag) {
    Lts l;
    l.tab = &tab;
    int s = tab.intern(act(Kind::LocalStep, 0, -1, -1, sync_tag));
    int p = tab.intern(act(Kind::LocalStep, 0, -1, -1, priv_tag));
    l.alphabet = {s, p};
    sort(l.alphabet.begin(), l.alphabet.end());
    l.trans = {{{s, 1}}, {{p, 0}}};
    l.sort_all();
    return l;
}

} // namespace

TEST_CASE("composition synchronizes shared labels and interleaves private ones") {
    ActionTable tab;
    Lts a = toggle(tab, 0, 1); // sync on tag 0, private tag 1
    Lts b = toggle(tab, 0, 2); // sync on tag 0, private tag 2
    Lts prod = compose({&a, &b}, tab);

    // states: (0,0) -sync-> (1,1); privates then interleave back
    CHECK(prod.num_states() == 4);
    int sync = tab.lookup(act(Kind::LocalStep, 0, -1, -1, 0));
    REQUIRE(sync >= 0);
    // initial state: only the synchronized step, no private ones
    REQUIRE(prod.trans[0].size() == 1);
    CHECK(prod.trans[0][0].first == sync);
    // after sync both privates are enabled independently
    int after = prod.trans[0][0].second;
    CHECK(prod.trans[after].size() == 2);
}

TEST_CASE("a label of one component never waits for the other") {
    ActionTable tab;
    Lts a = toggle(tab, 0, 1);
    Lts b = toggle(tab, 3, 2); // no shared labels at all
    Lts prod = compose({&a, &b}, tab);
    CHECK(prod.num_states() == 4);
    CHECK(prod.trans[0].size() == 2); // both components can move
}

TEST_CASE("packed composite agrees with the unpacked product") {
    ActionTable tab;
    Lts a = toggle(tab, 0, 1);
    Lts b = toggle(tab, 0, 2);
    Lts c = toggle(tab, 2, 4); // shares b's private label

    Composite comp;
    comp.tab = &tab;
    comp.comps = {&a, &b, &c};
    comp.build();

    // pack/unpack round trip over every tuple
    vector<int> loc(3), back;
    for (loc[0] = 0; loc[0] < 2; loc[0]++)
        for (loc[1] = 0; loc[1] < 2; loc[1]++)
            for (loc[2] = 0; loc[2] < 2; loc[2]++) {
                comp.unpack(comp.pack(loc), back);
                CHECK(back == loc);
                for (int k = 0; k < 3; k++)
                    CHECK(comp.local_state(comp.pack(loc), k) == loc[k]);
            }

    Lts prod = compose({&a, &b, &c}, tab);
    Graph g = materialize(comp, {});
    CHECK((int)g.num_states() == prod.num_states());

    // same number of edges overall
    size_t pe = 0;
    for (auto &t : prod.trans)
        pe += t.size();
    CHECK(g.num_edges() == pe);
}

TEST_CASE("materialize yields a usable breadth-first tree") {
    ActionTable tab;
    Lts a = toggle(tab, 0, 1);
    Lts b = toggle(tab, 0, 2);
    Composite comp;
    comp.tab = &tab;
    comp.comps = {&a, &b};
    comp.build();
    Graph g = materialize(comp, {});
    REQUIRE(g.num_states() == 4);
    for (uint32_t s = 1; s < g.num_states(); s++) {
        auto path = tree_path(g, s);
        REQUIRE(!path.empty());
        CHECK((uint32_t)path.back().target == s);
        // replay the path through the edge lists
        uint32_t cur = 0;
        for (const Step &st : path) {
            bool found = false;
            for (uint64_t e = g.eoff[cur]; e < g.eoff[cur + 1]; e++)
                if (g.eact[e] == st.action &&
                    g.edst[e] == (uint32_t)st.target) {
                    found = true;
                    break;
                }
            CHECK(found);
            cur = (uint32_t)st.target;
        }
    }
}

TEST_CASE("exploration stops when the state budget runs out") {
    ActionTable tab;
    vector<Lts> parts;
    for (int k = 0; k < 6; k++)
        parts.push_back(toggle(tab, 2 * k, 2 * k + 1));
    Composite comp;
    comp.tab = &tab;
    for (auto &l : parts)
        comp.comps.push_back(&l);
    comp.build();
    ExploreBudget tight;
    tight.max_states = 10; // 2^6 reachable
    CHECK_THROWS_AS(materialize(comp, tight), BudgetExceeded);
}

TEST_CASE("visitor can stop exploration early") {
    ActionTable tab;
    Lts a = toggle(tab, 0, 1);
    Lts b = toggle(tab, 0, 2);
    Composite comp;
    comp.tab = &tab;
    comp.comps = {&a, &b};
    comp.build();
    int seen = 0;
    Graph g = materialize(comp, {}, [&](uint32_t, const vector<int> &,
                                        const vector<pair<int, PackedState>> &) {
        return ++seen >= 2;
    });
    CHECK(seen == 2);
    CHECK(g.num_edges() < 8); // stopped before finishing all states
}

TEST_CASE("weak trace projection keeps only the section markers") {
    ActionTable tab;
    int cs = tab.intern(act(Kind::Crit, 0));
    int nc = tab.intern(act(Kind::NonCrit, 1));
    int loc = tab.intern(act(Kind::LocalStep, 0, -1, -1, 7));
    int rd = tab.intern(act(Kind::InstantRead, 1, 0, 1));
    vector<int> labels = {loc, cs, nc, rd, loc};
    auto visible = project_weak_trace(tab, labels);
    CHECK(visible == vector<int>{cs, nc});
}

TEST_CASE("action table interning is stable and order preserving") {
    ActionTable tab;
    Action a = act(Kind::StartWrite, 1, 3, 2);
    Action b = act(Kind::Crit, 0);
    int ia = tab.intern(a);
    int ib = tab.intern(b);
    CHECK(ia != ib);
    CHECK(tab.intern(a) == ia);
    CHECK(tab.lookup(b) == ib);
    CHECK(tab.lookup(act(Kind::Crit, 1)) == -1);
    CHECK(tab[ia] == a);
    CHECK(tab.size() == 2);
}
