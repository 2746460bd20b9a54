#include "mexcheck/checker.hpp"

#include <algorithm>
#include <cassert>

using namespace std;

namespace mex {

uint8_t CompositeModel::pending_mask(const vector<int> &loc) const {
    uint8_t m = 0;
    for (int t = 0; t < cfg.nthreads; t++)
        if (threads[t].pending[loc[t]])
            m |= (uint8_t)(1u << t);
    return m;
}

unique_ptr<CompositeModel> build(const Program &p, const ModelConfig &mc,
                                 const vector<int> &assignment) {
    auto m = make_unique<CompositeModel>();
    m->cfg = mc;
    m->layout = instantiate_registers(p, mc.nthreads);
    if (assignment.size() != m->layout.flat.size())
        throw ConfigError("assignment size mismatch");
    m->assignment = assignment;
    for (int t = 0; t < mc.nthreads; t++)
        m->threads.push_back(
            compile_thread(p, t, mc.nthreads, mc.style, m->tab));
    for (size_t r = 0; r < m->layout.flat.size(); r++) {
        RegisterConfig rc;
        rc.id = (int)r;
        rc.domain = m->layout.flat[r].domain;
        rc.init = assignment[r];
        rc.kind = mc.kind;
        rc.style = mc.style;
        rc.blocking = mc.blocking;
        rc.name = m->layout.flat[r].name;
        if (rc.init < 0 || rc.init >= rc.domain)
            throw ConfigError("initial value out of domain for " + rc.name);
        m->regcfgs.push_back(rc);
        m->reg_statuses.emplace_back();
        m->reg_ltss.push_back(register_lts(rc, mc.nthreads, m->tab,
                                           &m->reg_statuses.back()));
    }
    // a register moves together with the acting thread; interface actions
    // the thread never offers must not fire on their own (only the internal
    // order steps are the register's alone)
    for (Lts &rl : m->reg_ltss) {
        auto thread_uses = [&](int a) {
            const Action &act = m->tab[a];
            if (act.kind == Kind::OrderRead || act.kind == Kind::OrderWrite)
                return true;
            return m->threads[act.thread].lts.in_alphabet(a);
        };
        for (auto &tr : rl.trans)
            erase_if(tr, [&](const pair<int, int> &e) {
                return !thread_uses(e.first);
            });
        erase_if(rl.alphabet, [&](int a) { return !thread_uses(a); });
    }

    // compact each register to its now-reachable part: pruning cuts most of
    // the interface (single-writer registers especially), and fewer states
    // mean fewer bits in the packed product
    for (size_t r = 0; r < m->reg_ltss.size(); r++) {
        Lts &rl = m->reg_ltss[r];
        vector<int> remap(rl.num_states(), -1);
        vector<int> order;
        remap[rl.init] = 0;
        order.push_back(rl.init);
        for (size_t head = 0; head < order.size(); head++)
            for (auto &[a, t] : rl.trans[order[head]])
                if (remap[t] < 0) {
                    remap[t] = (int)order.size();
                    order.push_back(t);
                }
        vector<vector<pair<int, int>>> nt(order.size());
        vector<RegStatus> ns(order.size());
        for (size_t k = 0; k < order.size(); k++) {
            ns[k] = m->reg_statuses[r][order[k]];
            for (auto &[a, t] : rl.trans[order[k]])
                nt[k].emplace_back(a, remap[t]);
        }
        rl.trans = move(nt);
        rl.init = 0;
        rl.sort_all();
        m->reg_statuses[r] = move(ns);
    }

    m->comp.tab = &m->tab;
    for (auto &t : m->threads)
        m->comp.comps.push_back(&t.lts);
    for (auto &r : m->reg_ltss)
        m->comp.comps.push_back(&r);
    m->comp.build();
    return m;
}

vector<vector<int>> any_assignments(const RegLayout &layout) {
    vector<vector<int>> out;
    vector<int> cur(layout.flat.size());
    for (size_t r = 0; r < layout.flat.size(); r++)
        cur[r] = layout.flat[r].any ? 0 : layout.flat[r].init;
    while (true) {
        out.push_back(cur);
        int r = (int)layout.flat.size() - 1;
        for (; r >= 0; r--) {
            if (!layout.flat[r].any)
                continue;
            if (cur[r] + 1 < layout.flat[r].domain) {
                cur[r]++;
                break;
            }
            cur[r] = 0;
        }
        if (r < 0)
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------

ExploredModel explore(const CompositeModel &m, const ExploreBudget &budget,
                      bool stop_at_me_violation) {
    ExploredModel x;
    int n = m.nthreads();
    bool stopped = false;
    auto visitor = [&](uint32_t idx, const vector<int> &loc,
                       const vector<pair<int, PackedState>> &succ) {
        x.pending.push_back(m.pending_mask(loc));
        if (!x.me_violation) {
            int first = -1;
            for (auto &[a, q] : succ) {
                const Action &act = m.tab[a];
                if (act.kind != Kind::Crit)
                    continue;
                if (first < 0) {
                    first = act.thread;
                } else if (act.thread != first) {
                    x.me_violation = true;
                    x.me_state = idx;
                    x.me_t0 = first;
                    x.me_t1 = act.thread;
                    break;
                }
            }
        }
        if (x.me_violation && stop_at_me_violation) {
            stopped = true;
            return true;
        }
        return false;
    };
    x.graph = materialize(m.comp, budget, visitor);
    x.complete = !stopped;
    (void)n;
    return x;
}

namespace {

vector<TraceStep> steps_of(const CompositeModel &m, const Graph &g,
                           const vector<Step> &path) {
    vector<TraceStep> out;
    vector<int> loc;
    int nt = m.nthreads();
    for (const Step &s : path) {
        TraceStep ts;
        ts.action = m.tab[s.action];
        m.comp.unpack(g.states[s.target], loc);
        for (size_t r = 0; r < m.reg_ltss.size(); r++)
            ts.reg_stor.push_back(m.reg_statuses[r][loc[nt + r]].stor);
        out.push_back(move(ts));
    }
    return out;
}

void fill_reg_names(const CompositeModel &m, Counterexample &cex) {
    for (auto &ri : m.layout.flat)
        cex.reg_names.push_back(ri.name);
    cex.assignment = m.assignment;
}

// Tarjan over the masked graph: states with alive, edges with
// !forbidden[action] and alive target. Returns component ids (by root
// discovery, deterministic) and per-component internal edge counts.
struct SccResult {
    vector<int32_t> comp;
    vector<uint32_t> internal_edges;
    int ncomps = 0;
};

SccResult scc_masked(const Graph &g, const vector<uint8_t> &alive,
                     const vector<uint8_t> &forbidden) {
    size_t n = g.num_states();
    SccResult res;
    res.comp.assign(n, -1);
    vector<int32_t> low(n, -1), num(n, -1);
    vector<int32_t> stack;
    vector<int8_t> onstack(n, 0);
    // explicit DFS stack: (state, next edge offset)
    vector<pair<uint32_t, uint64_t>> dfs;
    int counter = 0;

    for (uint32_t root = 0; root < n; root++) {
        if (!alive[root] || num[root] >= 0)
            continue;
        dfs.emplace_back(root, g.eoff[root]);
        num[root] = low[root] = counter++;
        stack.push_back((int32_t)root);
        onstack[root] = 1;
        while (!dfs.empty()) {
            auto &[u, ei] = dfs.back();
            if (ei < g.eoff[u + 1]) {
                uint64_t e = ei++;
                if (forbidden[g.eact[e]])
                    continue;
                uint32_t v = g.edst[e];
                if (!alive[v])
                    continue;
                if (num[v] < 0) {
                    dfs.emplace_back(v, g.eoff[v]);
                    num[v] = low[v] = counter++;
                    stack.push_back((int32_t)v);
                    onstack[v] = 1;
                } else if (onstack[v]) {
                    low[u] = min(low[u], num[v]);
                }
            } else {
                if (low[u] == num[u]) {
                    int c = res.ncomps++;
                    while (true) {
                        int32_t w = stack.back();
                        stack.pop_back();
                        onstack[w] = 0;
                        res.comp[w] = c;
                        if ((uint32_t)w == u)
                            break;
                    }
                }
                uint32_t uu = u;
                dfs.pop_back();
                if (!dfs.empty())
                    low[dfs.back().first] =
                        min(low[dfs.back().first], low[uu]);
            }
        }
    }
    res.internal_edges.assign(res.ncomps, 0);
    for (uint32_t s = 0; s < n; s++) {
        if (!alive[s])
            continue;
        for (uint64_t e = g.eoff[s]; e < g.eoff[s + 1]; e++) {
            if (forbidden[g.eact[e]] || !alive[g.edst[e]])
                continue;
            if (res.comp[g.edst[e]] == res.comp[s])
                res.internal_edges[res.comp[s]]++;
        }
    }
    return res;
}

} // namespace

CoreResult liveness_core(const CompositeModel &m, const ExploredModel &x,
                         const vector<uint8_t> &forbidden, Conc conc) {
    const Graph &g = x.graph;
    size_t n = g.num_states();
    InterferenceTable itab(m.tab, conc);
    int words = itab.words;
    vector<uint8_t> alive(n, 1);
    SccResult scc;
    while (true) {
        scc = scc_masked(g, alive, forbidden);
        // label sets of nontrivial components
        vector<int32_t> lab_ix(scc.ncomps, -1);
        int nlab = 0;
        for (int c = 0; c < scc.ncomps; c++)
            if (scc.internal_edges[c] > 0)
                lab_ix[c] = nlab++;
        vector<uint64_t> labels((size_t)nlab * words, 0);
        for (uint32_t s = 0; s < n; s++) {
            if (!alive[s] || scc.comp[s] < 0)
                continue;
            int li = lab_ix[scc.comp[s]];
            if (li < 0)
                continue;
            for (uint64_t e = g.eoff[s]; e < g.eoff[s + 1]; e++) {
                int a = g.eact[e];
                if (forbidden[a] || !alive[g.edst[e]])
                    continue;
                if (scc.comp[g.edst[e]] == scc.comp[s])
                    labels[(size_t)li * words + (a >> 6)] |= 1ULL << (a & 63);
            }
        }
        // prune states whose enabled non-blockable actions are not all
        // interfered with inside their own component
        bool changed = false;
        vector<uint64_t> lab(words);
        for (uint32_t s = 0; s < n; s++) {
            if (!alive[s] || scc.comp[s] < 0)
                continue;
            int li = lab_ix[scc.comp[s]];
            if (li < 0)
                continue;
            copy(labels.begin() + (size_t)li * words,
                 labels.begin() + (size_t)(li + 1) * words, lab.begin());
            int last = -1;
            for (uint64_t e = g.eoff[s]; e < g.eoff[s + 1]; e++) {
                int a = g.eact[e];
                if (a == last)
                    continue;
                last = a;
                if (m.tab[a].kind == Kind::NonCrit)
                    continue; // blockable
                if (!itab.hit(lab, a)) {
                    alive[s] = 0;
                    changed = true;
                    break;
                }
            }
        }
        if (!changed)
            break;
    }
    CoreResult out;
    out.core.assign(n, 0);
    out.comp.assign(n, -1);
    for (uint32_t s = 0; s < n; s++) {
        if (!alive[s] || scc.comp[s] < 0)
            continue;
        out.comp[s] = scc.comp[s];
        if (scc.internal_edges[scc.comp[s]] > 0)
            out.core[s] = 1;
    }
    return out;
}

bool justness_closed(const vector<uint32_t> &cycle_states,
                     const vector<int> &cycle_labels, const CompositeModel &m,
                     const ExploredModel &x, Conc conc) {
    InterferenceTable itab(m.tab, conc);
    vector<uint64_t> lab(itab.words, 0);
    for (int a : cycle_labels)
        lab[a >> 6] |= 1ULL << (a & 63);
    const Graph &g = x.graph;
    for (uint32_t s : cycle_states) {
        int last = -1;
        for (uint64_t e = g.eoff[s]; e < g.eoff[s + 1]; e++) {
            int a = g.eact[e];
            if (a == last)
                continue;
            last = a;
            if (m.tab[a].kind == Kind::NonCrit)
                continue;
            if (!itab.hit(lab, a))
                return false;
        }
    }
    return true;
}

PropResult check_mutual_exclusion(const CompositeModel &m,
                                  const ExploredModel &x) {
    PropResult r;
    if (!x.me_violation) {
        r.inconclusive = !x.complete;
        return r;
    }
    r.holds = false;
    Counterexample cex;
    cex.kind = Counterexample::SafetyTrace;
    cex.crit_a = x.me_t0;
    cex.crit_b = x.me_t1;
    cex.stem = steps_of(m, x.graph, tree_path(x.graph, x.me_state));
    fill_reg_names(m, cex);
    r.cex = move(cex);
    return r;
}

namespace {

PropResult liveness_check(const CompositeModel &m, const ExploredModel &x,
                          Conc conc, const vector<uint8_t> &forbidden,
                          uint8_t trigger_mask, int starving,
                          bool want_trace) {
    const Graph &g = x.graph;
    size_t n = g.num_states();
    PropResult r;
    if (!x.complete) {
        r.inconclusive = true;
        return r;
    }
    CoreResult core = liveness_core(m, x, forbidden, conc);
    // just sinks: every enabled action blockable (or none)
    vector<uint8_t> target(n, 0);
    for (uint32_t s = 0; s < n; s++) {
        if (core.core[s]) {
            target[s] = 1;
            continue;
        }
        bool sink = true;
        for (uint64_t e = g.eoff[s]; e < g.eoff[s + 1] && sink; e++)
            if (m.tab[g.eact[e]].kind != Kind::NonCrit)
                sink = false;
        if (sink)
            target[s] = 2;
    }
    // forward BFS from trigger states through allowed edges
    vector<int32_t> par(n, -2);
    vector<int32_t> par_act(n, -1);
    vector<uint32_t> queue;
    for (uint32_t s = 0; s < n; s++) {
        if (x.pending[s] & trigger_mask) {
            par[s] = -1;
            queue.push_back(s);
        }
    }
    int found = -1;
    for (size_t h = 0; h < queue.size() && found < 0; h++) {
        uint32_t u = queue[h];
        if (target[u]) {
            found = (int)u;
            break;
        }
        for (uint64_t e = g.eoff[u]; e < g.eoff[u + 1]; e++) {
            if (forbidden[g.eact[e]])
                continue;
            uint32_t v = g.edst[e];
            if (par[v] != -2)
                continue;
            par[v] = (int32_t)u;
            par_act[v] = g.eact[e];
            queue.push_back(v);
        }
    }
    if (found < 0)
        return r; // holds
    r.holds = false;
    if (!want_trace)
        return r;

    // stem: init -> trigger source -> found
    vector<Step> mid;
    uint32_t cur = (uint32_t)found;
    while (par[cur] >= 0) {
        mid.push_back({par_act[cur], (int)cur});
        cur = (uint32_t)par[cur];
    }
    reverse(mid.begin(), mid.end());
    vector<Step> stem = tree_path(g, cur);
    stem.insert(stem.end(), mid.begin(), mid.end());

    // cycle: closed walk covering every internal edge of the surviving
    // component (so the emitted cycle itself witnesses closure)
    vector<Step> cycle;
    if (target[found] == 1) {
        int comp = core.comp[found];
        // collect internal edges
        vector<uint64_t> edges; // edge indices
        vector<int8_t> used;
        vector<vector<pair<uint64_t, uint32_t>>> out_edges; // local adjacency
        vector<uint32_t> comp_states;
        vector<int32_t> local(n, -1);
        for (uint32_t s = 0; s < n; s++) {
            if (core.comp[s] != comp || !core.core[s])
                continue;
            local[s] = (int32_t)comp_states.size();
            comp_states.push_back(s);
        }
        out_edges.resize(comp_states.size());
        for (uint32_t s : comp_states) {
            for (uint64_t e = g.eoff[s]; e < g.eoff[s + 1]; e++) {
                if (forbidden[g.eact[e]])
                    continue;
                uint32_t v = g.edst[e];
                if (local[v] < 0 || core.comp[v] != comp)
                    continue;
                out_edges[local[s]].emplace_back(e, v);
            }
        }
        size_t remaining = 0;
        vector<vector<int8_t>> used2(comp_states.size());
        for (size_t k = 0; k < comp_states.size(); k++) {
            used2[k].assign(out_edges[k].size(), 0);
            remaining += out_edges[k].size();
        }
        auto bfs_to = [&](uint32_t from, auto pred) -> vector<Step> {
            // BFS inside the component
            vector<int32_t> p(comp_states.size(), -2), pa(comp_states.size(),
                                                         -1);
            vector<uint32_t> q{from};
            p[local[from]] = -1;
            int goal = -1;
            for (size_t h = 0; h < q.size() && goal < 0; h++) {
                uint32_t u = q[h];
                for (auto &[e, v] : out_edges[local[u]]) {
                    if (p[local[v]] != -2)
                        continue;
                    p[local[v]] = (int32_t)u;
                    pa[local[v]] = g.eact[e];
                    if (pred(v)) {
                        goal = (int)v;
                        break;
                    }
                    q.push_back(v);
                }
            }
            vector<Step> path;
            if (goal < 0)
                return path;
            uint32_t c2 = (uint32_t)goal;
            while (p[local[c2]] >= 0) {
                path.push_back({pa[local[c2]], (int)c2});
                c2 = (uint32_t)p[local[c2]];
            }
            reverse(path.begin(), path.end());
            return path;
        };
        uint32_t cur2 = (uint32_t)found;
        while (remaining > 0) {
            int li = local[cur2];
            size_t pick = SIZE_MAX;
            for (size_t k = 0; k < out_edges[li].size(); k++)
                if (!used2[li][k]) {
                    pick = k;
                    break;
                }
            if (pick != SIZE_MAX) {
                auto [e, v] = out_edges[li][pick];
                used2[li][pick] = 1;
                remaining--;
                cycle.push_back({g.eact[e], (int)v});
                cur2 = v;
            } else {
                auto hop = bfs_to(cur2, [&](uint32_t u) {
                    int lu = local[u];
                    for (size_t k = 0; k < out_edges[lu].size(); k++)
                        if (!used2[lu][k])
                            return true;
                    return false;
                });
                if (hop.empty())
                    break; // should not happen in an SCC
                for (auto &st : hop)
                    cycle.push_back(st);
                cur2 = (uint32_t)hop.back().target;
            }
        }
        if (cur2 != (uint32_t)found) {
            auto back = bfs_to(cur2, [&](uint32_t u) {
                return u == (uint32_t)found;
            });
            for (auto &st : back)
                cycle.push_back(st);
        }
    }

    Counterexample cex;
    cex.kind = Counterexample::LivenessLasso;
    cex.starving_thread = starving;
    cex.stem = steps_of(m, g, stem);
    cex.cycle = steps_of(m, g, cycle);
    fill_reg_names(m, cex);
    r.cex = move(cex);
    return r;
}

vector<uint8_t> forbidden_crits(const CompositeModel &m, int thread) {
    vector<uint8_t> f(m.tab.size(), 0);
    for (int a = 0; a < m.tab.size(); a++)
        if (m.tab[a].kind == Kind::Crit &&
            (thread < 0 || m.tab[a].thread == thread))
            f[a] = 1;
    return f;
}

} // namespace

PropResult check_deadlock_freedom(const CompositeModel &m,
                                  const ExploredModel &x, Conc conc,
                                  bool want_trace) {
    uint8_t mask = (uint8_t)((1u << m.nthreads()) - 1);
    return liveness_check(m, x, conc, forbidden_crits(m, -1), mask, -1,
                          want_trace);
}

PropResult check_starvation_freedom(const CompositeModel &m,
                                    const ExploredModel &x, Conc conc,
                                    bool want_trace) {
    for (int t = 0; t < m.nthreads(); t++) {
        PropResult r =
            liveness_check(m, x, conc, forbidden_crits(m, t),
                           (uint8_t)(1u << t), t, want_trace);
        if (!r.holds || r.inconclusive)
            return r;
    }
    return {};
}

// ---------------------------------------------------------------------------

void validate_model(RegKind kind, Conc c) {
    if (kind != RegKind::Atomic && c != Conc::T)
        throw ConfigError("safe/regular registers support only relation T");
}

namespace {

char letter_of(bool me, bool df, bool sf, bool inconclusive) {
    if (!me)
        return 'X';
    if (inconclusive)
        return '?';
    if (!df)
        return 'M';
    if (!sf)
        return 'D';
    return 'S';
}

// check a set of concurrency relations over one memory model, sharing each
// assignment's explored graph
vector<Verdict> verdict_multi(const Program &p, const ModelConfig &mc,
                              const vector<Conc> &concs,
                              const CheckOptions &opt) {
    size_t nc = concs.size();
    vector<Verdict> out(nc);
    vector<char> df_ok(nc, 1), sf_ok(nc, 1);
    bool me_ok = true, inconclusive = false;
    PropResult me_res;
    vector<PropResult> df_res(nc), sf_res(nc);

    RegLayout layout = instantiate_registers(p, mc.nthreads);
    try {
        for (auto &asg : any_assignments(layout)) {
            auto m = build(p, mc, asg);
            ExploredModel x = explore(*m, opt.budget, true);
            if (x.me_violation) {
                me_ok = false;
                me_res = check_mutual_exclusion(*m, x);
                break;
            }
            for (size_t k = 0; k < nc; k++) {
                if (!df_ok[k])
                    continue;
                PropResult df = check_deadlock_freedom(*m, x, concs[k],
                                                       opt.want_trace);
                if (!df.holds) {
                    df_ok[k] = 0;
                    df_res[k] = move(df);
                    continue;
                }
                if (!sf_ok[k])
                    continue;
                PropResult sf = check_starvation_freedom(*m, x, concs[k],
                                                         opt.want_trace);
                if (!sf.holds) {
                    sf_ok[k] = 0;
                    sf_res[k] = move(sf);
                }
            }
        }
    } catch (const BudgetExceeded &) {
        inconclusive = true;
    }
    for (size_t k = 0; k < nc; k++) {
        Verdict &v = out[k];
        v.me = me_res;
        v.me.holds = me_ok;
        if (!me_ok) {
            v.df.inconclusive = v.sf.inconclusive = true;
            v.letter = 'X';
            continue;
        }
        v.df = df_ok[k] ? PropResult{} : df_res[k];
        v.df.holds = df_ok[k] != 0;
        v.sf = sf_ok[k] ? PropResult{} : sf_res[k];
        v.sf.holds = sf_ok[k] != 0;
        if (inconclusive && df_ok[k] && sf_ok[k]) {
            // a violation is definitive even with unexplored assignments,
            // but a clean pass is not
            v.me.inconclusive = v.df.inconclusive = v.sf.inconclusive = true;
        }
        bool inc = inconclusive && (df_ok[k] || sf_ok[k]);
        if (inconclusive && !df_ok[k])
            inc = false; // DF violation caps the verdict at M either way
        v.letter = letter_of(true, df_ok[k] != 0, sf_ok[k] != 0, inc);
    }
    return out;
}

} // namespace

Verdict verdict_ex(const Program &p, const ModelConfig &mc,
                   const CheckOptions &opt) {
    return verdict_multi(p, mc, {mc.conc}, opt)[0];
}

Verdict verdict(const Program &p, RegKind kind, Conc c, int n,
                const CheckOptions &opt) {
    validate_model(kind, c);
    ModelConfig mc;
    mc.kind = kind;
    mc.conc = c;
    mc.nthreads = n;
    return verdict_ex(p, mc, opt);
}

vector<Verdict> verdict_row(const Program &p, int n, const CheckOptions &opt) {
    vector<Verdict> row;
    ModelConfig mc;
    mc.nthreads = n;
    mc.kind = RegKind::Safe;
    row.push_back(verdict_ex(p, mc, opt));
    mc.kind = RegKind::Regular;
    row.push_back(verdict_ex(p, mc, opt));
    mc.kind = RegKind::Atomic;
    auto atomic = verdict_multi(p, mc, {Conc::T, Conc::S, Conc::I, Conc::A},
                                opt);
    for (auto &v : atomic)
        row.push_back(move(v));
    return row;
}

} // namespace mex
