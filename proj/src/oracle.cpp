#include "mexcheck/oracle.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

using namespace std;

namespace mex {

namespace {

uint64_t fnv(const vector<int> &loc) {
    uint64_t h = 1469598103934665603ULL;
    for (int v : loc) {
        h ^= (uint64_t)(uint32_t)v;
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t mix(uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 29;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 32;
    return x;
}

uint64_t edge_hash(const vector<int> &src, int action,
                   const vector<int> &dst) {
    return mix(fnv(src) ^ (0x9e3779b97f4a7c15ULL * (uint64_t)(action + 1)) ^
               mix(fnv(dst)));
}

// literal successor enumeration straight from the composition rule: a label
// fires iff every component owning it steps, and targets multiply out
void naive_successors(const CompositeModel &m, const vector<int> &loc,
                      vector<pair<int, vector<int>>> &out) {
    out.clear();
    const auto &comps = m.comp.comps;
    for (int a = 0; a < m.tab.size(); a++) {
        vector<int> own;
        for (size_t k = 0; k < comps.size(); k++)
            if (comps[k]->in_alphabet(a))
                own.push_back((int)k);
        if (own.empty())
            continue;
        vector<vector<int>> targets(own.size());
        bool dead = false;
        for (size_t o = 0; o < own.size() && !dead; o++) {
            for (auto &[act, tgt] : comps[own[o]]->trans[loc[own[o]]])
                if (act == a)
                    targets[o].push_back(tgt);
            dead = targets[o].empty();
        }
        if (dead)
            continue;
        vector<size_t> pick(own.size(), 0);
        for (;;) {
            vector<int> nl = loc;
            for (size_t o = 0; o < own.size(); o++)
                nl[own[o]] = targets[o][pick[o]];
            out.emplace_back(a, move(nl));
            size_t o = 0;
            while (o < own.size() && ++pick[o] == targets[o].size())
                pick[o++] = 0;
            if (o == own.size())
                break;
        }
    }
}

} // namespace

OracleExplore oracle_explore(const CompositeModel &m, uint64_t max_states) {
    OracleExplore r;
    map<vector<int>, int> seen;
    vector<vector<int>> order;
    vector<int> init;
    m.comp.unpack(m.comp.initial, init);
    seen[init] = 0;
    order.push_back(init);
    vector<pair<int, vector<int>>> succ;
    for (size_t head = 0; head < order.size(); head++) {
        vector<int> loc = order[head];
        naive_successors(m, loc, succ);
        int crit_thread = -1;
        for (auto &[a, nl] : succ) {
            const Action &act = m.tab[a];
            if (act.kind == Kind::Crit) {
                if (crit_thread >= 0 && crit_thread != act.thread)
                    r.me_violation = true;
                crit_thread = act.thread;
            }
            auto [it, fresh] = seen.emplace(nl, (int)order.size());
            if (fresh) {
                if (order.size() >= max_states)
                    throw BudgetExceeded("oracle state budget exhausted");
                order.push_back(nl);
            }
            r.transitions++;
            r.fingerprint ^= edge_hash(loc, a, nl);
        }
    }
    r.states = order.size();
    return r;
}

uint64_t graph_fingerprint(const CompositeModel &m, const ExploredModel &x) {
    uint64_t fp = 0;
    vector<int> src, dst;
    for (size_t s = 0; s < x.graph.num_states(); s++) {
        m.comp.unpack(x.graph.states[s], src);
        for (uint64_t e = x.graph.eoff[s]; e < x.graph.eoff[s + 1]; e++) {
            m.comp.unpack(x.graph.states[x.graph.edst[e]], dst);
            fp ^= edge_hash(src, x.graph.eact[e], dst);
        }
    }
    return fp;
}

namespace {

bool snapshot_ok(const CompositeModel &m, const vector<int> &loc,
                 const vector<int> &stor) {
    int n = m.nthreads();
    if ((int)stor.size() != (int)m.reg_ltss.size())
        return false;
    for (size_t r = 0; r < m.reg_ltss.size(); r++)
        if (m.reg_statuses[r][loc[n + r]].stor != stor[r])
            return false;
    return true;
}

// one replay step: the claimed action must label a real transition whose
// resulting stores match the snapshot
bool replay_step(const CompositeModel &m, vector<int> &loc,
                 const TraceStep &ts, string *why) {
    vector<pair<int, PackedState>> succ;
    m.comp.successors(loc, succ);
    vector<int> nl;
    for (auto &[a, p] : succ) {
        if (!(m.tab[a] == ts.action))
            continue;
        m.comp.unpack(p, nl);
        if (snapshot_ok(m, nl, ts.reg_stor)) {
            loc = nl;
            return true;
        }
    }
    if (why)
        *why = "no transition matches step " +
               to_string(ts.action, vector<string>{});
    return false;
}

} // namespace

bool oracle_check_trace(const CompositeModel &m, const Counterexample &cex,
                        Conc conc, string *why) {
    auto fail = [&](const string &msg) {
        if (why)
            *why = msg;
        return false;
    };
    vector<int> loc;
    m.comp.unpack(m.comp.initial, loc);
    for (const TraceStep &ts : cex.stem)
        if (!replay_step(m, loc, ts, why))
            return false;

    if (cex.kind == Counterexample::SafetyTrace) {
        int ca = 0, cb = 0;
        vector<pair<int, PackedState>> succ;
        m.comp.successors(loc, succ);
        for (auto &[a, p] : succ) {
            if (m.tab[a].kind != Kind::Crit)
                continue;
            if (m.tab[a].thread == cex.crit_a)
                ca = 1;
            if (m.tab[a].thread == cex.crit_b)
                cb = 1;
        }
        if (cex.crit_a == cex.crit_b || !ca || !cb)
            return fail("claimed double critical entry not enabled");
        return true;
    }

    // lasso: pending obligation at the loop, forbidden-free and just cycle
    uint8_t pend = m.pending_mask(loc);
    if (cex.starving_thread >= 0) {
        if (!((pend >> cex.starving_thread) & 1))
            return fail("starving thread is not competing at the loop");
    } else if (!pend) {
        return fail("no thread is competing at the loop");
    }

    vector<int> start = loc;
    vector<vector<int>> cyc_states;
    vector<Action> cyc_labels;
    for (const TraceStep &ts : cex.cycle) {
        cyc_states.push_back(loc);
        cyc_labels.push_back(ts.action);
        if (ts.action.kind == Kind::Crit &&
            (cex.starving_thread < 0 ||
             ts.action.thread == cex.starving_thread))
            return fail("forbidden critical entry inside the cycle");
        if (!replay_step(m, loc, ts, why))
            return false;
    }
    if (!cex.cycle.empty() && !(loc == start))
        return fail("cycle does not return to its first state");

    if (cex.cycle.empty()) {
        // quiescent run: nothing non-blockable may be enabled at the end
        vector<pair<int, PackedState>> succ;
        m.comp.successors(loc, succ);
        for (auto &[a, p] : succ)
            if (!is_blockable(m.tab[a]))
                return fail("quiescent endpoint still has enabled work");
        return true;
    }

    // justness: every non-blockable action enabled along the cycle must be
    // interfered with by some occurrence in the cycle
    vector<pair<int, PackedState>> succ;
    for (const vector<int> &s : cyc_states) {
        m.comp.successors(s, succ);
        for (auto &[a, p] : succ) {
            const Action &en = m.tab[a];
            if (is_blockable(en))
                continue;
            bool ok = false;
            for (const Action &b : cyc_labels)
                if (interferes(conc, en, b)) {
                    ok = true;
                    break;
                }
            if (!ok)
                return fail("cycle is not just: " +
                            to_string(en, vector<string>{}) +
                            " stays enabled uninterfered");
        }
    }
    return true;
}

bool style_agreement(const Program &p, int n, Conc c, const CheckOptions &opt,
                     char *a, char *b) {
    ModelConfig mc;
    mc.kind = RegKind::Atomic;
    mc.conc = c;
    mc.nthreads = n;
    mc.style = RegStyle::InstantRead;
    char la = verdict_ex(p, mc, opt).letter;
    mc.style = RegStyle::FullRead;
    char lb = verdict_ex(p, mc, opt).letter;
    if (a)
        *a = la;
    if (b)
        *b = lb;
    return la == lb || la == '?' || lb == '?';
}

bool blocking_agreement(const Program &p, int n, Conc c, Blocking blk,
                        const CheckOptions &opt, char *a, char *b) {
    ModelConfig mc;
    mc.kind = RegKind::Atomic;
    mc.conc = c;
    mc.nthreads = n;
    mc.style = RegStyle::FullRead;
    mc.blocking = Blocking::None;
    char la = verdict_ex(p, mc, opt).letter;
    mc.blocking = blk;
    char lb = verdict_ex(p, mc, opt).letter;
    if (a)
        *a = la;
    if (b)
        *b = lb;
    return la == lb || la == '?' || lb == '?';
}

namespace {

bool find_step(const vector<RegStep> &steps, const RegStep &want) {
    for (const RegStep &s : steps)
        if (s.action == want.action && s.payload == want.payload)
            return true;
    return false;
}

bool order_pair(const RegStep &x, const RegStep &y) {
    bool xo = x.action.kind == Kind::OrderWrite;
    bool yo = y.action.kind == Kind::OrderWrite;
    bool xr = x.action.kind == Kind::OrderRead;
    bool yr = y.action.kind == Kind::OrderRead;
    return (xo && yo) || (xo && yr) || (xr && yo);
}

} // namespace

FuzzReport register_fuzz(const RegisterConfig &cfg, int nthreads, int runs,
                         unsigned seed) {
    FuzzReport rep;
    mt19937 rng(seed);
    auto note = [&](const string &msg) {
        rep.failures++;
        if (rep.first.empty())
            rep.first = msg;
    };

    for (int run = 0; run < runs; run++) {
        rep.runs++;

        // single-thread runs must read back the last started write
        RegStatus s = canonicalize(initial_status(cfg, nthreads), cfg,
                                   nthreads);
        int last = cfg.init;
        for (int step = 0; step < 30; step++) {
            vector<RegStep> all = register_steps(s, cfg, nthreads);
            vector<RegStep> mine;
            for (const RegStep &st : all)
                if (st.action.thread == 0)
                    mine.push_back(st);
            if (mine.empty())
                break;
            RegStep pick = mine[rng() % mine.size()];
            if (pick.action.kind == Kind::StartWrite)
                last = pick.payload;
            if ((pick.action.kind == Kind::FinishRead ||
                 pick.action.kind == Kind::InstantRead) &&
                pick.action.value != last) {
                ostringstream o;
                o << cfg.name << ": solo read returned " << pick.action.value
                  << " expecting " << last;
                note(o.str());
            }
            s = canonicalize(apply_update(s, pick.action, pick.payload, cfg,
                                          nthreads),
                             cfg, nthreads);
        }

        if (cfg.kind != RegKind::Atomic || cfg.style != RegStyle::FullRead)
            continue;

        // commutation: adjacent steps of distinct threads may swap without
        // changing the final status, unless an order-write is involved with
        // another order action
        vector<RegStep> trace;
        s = canonicalize(initial_status(cfg, nthreads), cfg, nthreads);
        for (int step = 0; step < 16; step++) {
            vector<RegStep> all = register_steps(s, cfg, nthreads);
            if (all.empty())
                break;
            RegStep pick = all[rng() % all.size()];
            trace.push_back(pick);
            s = canonicalize(apply_update(s, pick.action, pick.payload, cfg,
                                          nthreads),
                             cfg, nthreads);
        }
        auto replay = [&](const vector<RegStep> &tr, RegStatus *out) {
            RegStatus cur = canonicalize(initial_status(cfg, nthreads), cfg,
                                         nthreads);
            for (const RegStep &st : tr) {
                if (!find_step(register_steps(cur, cfg, nthreads), st))
                    return false;
                cur = canonicalize(apply_update(cur, st.action, st.payload,
                                                cfg, nthreads),
                                   cfg, nthreads);
            }
            *out = cur;
            return true;
        };
        RegStatus base;
        if (!replay(trace, &base)) {
            note(cfg.name + ": recorded run does not replay");
            continue;
        }
        for (size_t k = 0; k + 1 < trace.size(); k++) {
            if (trace[k].action.thread == trace[k + 1].action.thread)
                continue;
            if (order_pair(trace[k], trace[k + 1]))
                continue;
            vector<RegStep> swapped = trace;
            swap(swapped[k], swapped[k + 1]);
            RegStatus other;
            if (!replay(swapped, &other))
                continue;
            if (!(other == base)) {
                ostringstream o;
                o << cfg.name << ": swapping steps " << k << "/" << k + 1
                  << " changed the outcome";
                note(o.str());
            }
        }
    }
    return rep;
}

} // namespace mex
