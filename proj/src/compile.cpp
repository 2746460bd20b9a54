#include "mexcheck/compile.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace std;

namespace mex {

namespace {

struct Node {
    enum K { NonCrit, Crit, AssignLocal, WriteReg, Branch, Jump } k;
    int slot = -1;       // AssignLocal target base
    int rbase = -1;      // WriteReg target base
    ExprP index;         // subscript for either target
    ExprP rhs;           // AssignLocal value / WriteReg value
    ExprP cond;          // Branch
    int next = -1, next2 = -1;
    // optional binding for conditions generated from await-all
    string bname;
    int bval = 0;
    int line = 0;
};

struct Lowered {
    vector<Node> nodes;
    map<string, pair<int, int>> slotbase; // name -> (base, count)
    map<string, pair<int, int>> regbase;  // name -> (base flat id, count)
    vector<int> domain;                   // per flat register
    int nlocals = 0;
    int my = 0, n = 2;
};

struct TState {
    int node = 0;
    vector<int16_t> env;
    vector<int8_t> path;
    int16_t wreg = -1, wval = -1;
    auto operator<=>(const TState &) const = default;
};

struct EvalCtx {
    const Lowered *low;
    const vector<int16_t> *env;
    const vector<int8_t> *path;
    size_t pos = 0;
    bool need = false;
    int need_reg = -1;
    map<string, int> bound;
};

long ev(const Expr *e, EvalCtx &c);

long ev_subscript(const Expr *e, EvalCtx &c) {
    if (!e)
        return 0;
    return ev(e, c);
}

bool quant_range(QRange r, int j, int my) {
    switch (r) {
    case QRange::All: return true;
    case QRange::NotSelf: return j != my;
    case QRange::Below: return j < my;
    case QRange::Above: return j > my;
    }
    return true;
}

long ev(const Expr *e, EvalCtx &c) {
    const Lowered &L = *c.low;
    switch (e->kind) {
    case Ex::Int: return e->ival;
    case Ex::ThreadId: return L.my;
    case Ex::OtherId: return 1 - L.my;
    case Ex::NumThreads: return L.n;
    case Ex::BoundVar: {
        auto it = c.bound.find(e->name);
        if (it != c.bound.end())
            return it->second;
        auto sl = L.slotbase.find(e->name);
        if (sl == L.slotbase.end())
            throw CompileError("unbound variable " + e->name);
        return (*c.env)[sl->second.first];
    }
    case Ex::Local: {
        auto sl = L.slotbase.find(e->name);
        if (sl == L.slotbase.end())
            throw CompileError("unknown local " + e->name);
        long ix = ev_subscript(e->index.get(), c);
        if (c.need)
            return 0;
        if (ix < 0 || ix >= sl->second.second)
            throw CompileError("local index out of range for " + e->name);
        return (*c.env)[sl->second.first + ix];
    }
    case Ex::RegRead: {
        auto rb = L.regbase.find(e->name);
        if (rb == L.regbase.end())
            throw CompileError("unknown register " + e->name);
        long ix = ev_subscript(e->index.get(), c);
        if (c.need)
            return 0;
        if (ix < 0 || ix >= rb->second.second)
            throw CompileError("register index out of range for " + e->name);
        int flat = rb->second.first + (int)ix;
        if (c.pos < c.path->size())
            return (*c.path)[c.pos++];
        c.need = true;
        c.need_reg = flat;
        return 0;
    }
    case Ex::Not: {
        long v = ev(e->args[0].get(), c);
        return c.need ? 0 : !v;
    }
    case Ex::And: {
        long v = ev(e->args[0].get(), c);
        if (c.need || !v)
            return 0;
        v = ev(e->args[1].get(), c);
        return c.need ? 0 : (v != 0);
    }
    case Ex::Or: {
        long v = ev(e->args[0].get(), c);
        if (c.need)
            return 0;
        if (v)
            return 1;
        v = ev(e->args[1].get(), c);
        return c.need ? 0 : (v != 0);
    }
    case Ex::Eq:
    case Ex::Ne:
    case Ex::Lt:
    case Ex::Le:
    case Ex::Gt:
    case Ex::Ge:
    case Ex::Add:
    case Ex::Sub:
    case Ex::Mul:
    case Ex::Mod: {
        long a = ev(e->args[0].get(), c);
        if (c.need)
            return 0;
        long b = ev(e->args[1].get(), c);
        if (c.need)
            return 0;
        switch (e->kind) {
        case Ex::Eq: return a == b;
        case Ex::Ne: return a != b;
        case Ex::Lt: return a < b;
        case Ex::Le: return a <= b;
        case Ex::Gt: return a > b;
        case Ex::Ge: return a >= b;
        case Ex::Add: return a + b;
        case Ex::Sub: return a - b;
        case Ex::Mul: return a * b;
        default: return b == 0 ? 0 : a % b;
        }
    }
    case Ex::MinV:
    case Ex::MaxV: {
        long best = 0;
        bool first = true;
        for (auto &a : e->args) {
            long v = ev(a.get(), c);
            if (c.need)
                return 0;
            if (first)
                best = v;
            else
                best = e->kind == Ex::MinV ? min(best, v) : max(best, v);
            first = false;
        }
        return best;
    }
    case Ex::QuantAll:
    case Ex::QuantExists: {
        bool all = e->kind == Ex::QuantAll;
        for (int j = 0; j < L.n; j++) {
            if (!quant_range(e->qrange, j, L.my))
                continue;
            int saved = -1;
            auto it = c.bound.find(e->name);
            bool had = it != c.bound.end();
            if (had)
                saved = it->second;
            c.bound[e->name] = j;
            long v = ev(e->args[0].get(), c);
            if (had)
                c.bound[e->name] = saved;
            else
                c.bound.erase(e->name);
            if (c.need)
                return 0;
            if (all && !v)
                return 0;
            if (!all && v)
                return 1;
        }
        return all ? 1 : 0;
    }
    case Ex::QuantMax: {
        long best = 0;
        bool first = true;
        for (int j = 0; j < L.n; j++) {
            if (!quant_range(e->qrange, j, L.my))
                continue;
            c.bound[e->name] = j;
            long v = ev(e->args[0].get(), c);
            c.bound.erase(e->name);
            if (c.need)
                return 0;
            best = first ? v : max(best, v);
            first = false;
        }
        return best;
    }
    case Ex::L3Bit: {
        auto ly = L.slotbase.at(e->args[0]->name);
        auto lz = L.slotbase.at(e->args[1]->name);
        vector<int> gamma;
        for (int j = 0; j < L.n; j++)
            if ((*c.env)[ly.first + j])
                gamma.push_back(j);
        int m = (int)gamma.size();
        if (m == 0)
            return 0;
        vector<int> v(m);
        for (int h = 0; h < m; h++)
            v[h] = (*c.env)[lz.first + gamma[h]] != 0;
        for (int h = 0; h < m; h++) {
            bool cg = h == 0 ? v[0] == v[m - 1] : v[h] != v[h - 1];
            if (cg)
                return gamma[h];
        }
        return gamma[0];
    }
    }
    throw CompileError("unhandled expression");
}

// ---------------------------------------------------------------------------
// lowering

struct LowerCtx {
    Lowered low;
    const Program *prog;
    vector<pair<int, string>> goto_fixups;
    map<string, int> labels;

    int emit(Node nd) {
        low.nodes.push_back(move(nd));
        return (int)low.nodes.size() - 1;
    }

    int ensure_slot(const string &name, int count) {
        auto it = low.slotbase.find(name);
        if (it != low.slotbase.end())
            return it->second.first;
        low.slotbase[name] = {low.nlocals, count};
        int base = low.nlocals;
        low.nlocals += count;
        return base;
    }

    ExprP num(long v) {
        auto e = make_shared<Expr>();
        e->kind = Ex::Int;
        e->ival = v;
        return e;
    }

    ExprP local_ref(const string &name) {
        auto e = make_shared<Expr>();
        e->kind = Ex::Local;
        e->name = name;
        return e;
    }

    ExprP binop(Ex k, ExprP a, ExprP b) {
        auto e = make_shared<Expr>();
        e->kind = k;
        e->args = {move(a), move(b)};
        return e;
    }

    int lower_body(const vector<StmtP> &body, int next) {
        for (auto it = body.rbegin(); it != body.rend(); ++it)
            next = lower_stmt(**it, next);
        return next;
    }

    int assign_local(const string &name, ExprP index, ExprP rhs, int next,
                     int line) {
        Node nd;
        nd.k = Node::AssignLocal;
        nd.slot = low.slotbase.at(name).first;
        nd.index = move(index);
        nd.rhs = move(rhs);
        nd.next = next;
        nd.line = line;
        return emit(nd);
    }

    int lower_stmt(const Stmt &s, int next) {
        switch (s.kind) {
        case St::NonCrit:
        case St::Crit: {
            Node nd;
            nd.k = s.kind == St::Crit ? Node::Crit : Node::NonCrit;
            nd.next = next;
            nd.line = s.line;
            return emit(nd);
        }
        case St::Assign: {
            if (low.regbase.count(s.name)) {
                Node nd;
                nd.k = Node::WriteReg;
                nd.rbase = low.regbase.at(s.name).first;
                nd.index = s.index;
                nd.rhs = s.value;
                nd.next = next;
                nd.line = s.line;
                return emit(nd);
            }
            return assign_local(s.name, s.index, s.value, next, s.line);
        }
        case St::GuardedAssign: {
            ensure_slot("$gv", 1);
            ensure_slot("$gr", 1);
            int clr2 = assign_local("$gr", nullptr, num(0), next, s.line);
            int clr1 = assign_local("$gv", nullptr, num(0), clr2, s.line);
            Node w;
            w.k = Node::WriteReg;
            w.rbase = low.regbase.at(s.name).first;
            w.index = s.index;
            w.rhs = local_ref("$gv");
            w.next = clr1;
            w.line = s.line;
            int wn = emit(w);
            Node br;
            br.k = Node::Branch;
            br.cond = binop(Ex::Ne, local_ref("$gr"), local_ref("$gv"));
            br.next = wn;
            br.next2 = clr1;
            br.line = s.line;
            int brn = emit(br);
            auto rd = make_shared<Expr>();
            rd->kind = Ex::RegRead;
            rd->name = s.name;
            rd->index = s.index;
            int rdn = assign_local("$gr", nullptr, rd, brn, s.line);
            return assign_local("$gv", nullptr, s.value, rdn, s.line);
        }
        case St::Await: {
            Node br;
            br.k = Node::Branch;
            br.cond = s.cond;
            br.next = next;
            br.line = s.line;
            int n0 = emit(br);
            low.nodes[n0].next2 = n0;
            return n0;
        }
        case St::AwaitAll: {
            int entry = next;
            for (int j = low.n - 1; j >= 0; j--) {
                if (!quant_range(s.qrange, j, low.my))
                    continue;
                Node br;
                br.k = Node::Branch;
                br.cond = s.cond;
                br.next = entry;
                br.bname = s.name;
                br.bval = j;
                br.line = s.line;
                int n0 = emit(br);
                low.nodes[n0].next2 = n0;
                entry = n0;
            }
            return entry;
        }
        case St::If: {
            int e = lower_body(s.els, next);
            int b = lower_body(s.body, next);
            Node br;
            br.k = Node::Branch;
            br.cond = s.cond;
            br.next = b;
            br.next2 = e;
            br.line = s.line;
            return emit(br);
        }
        case St::While: {
            Node head;
            head.k = Node::Branch;
            head.cond = s.cond;
            head.line = s.line;
            int h = emit(head);
            int b = lower_body(s.body, h);
            low.nodes[h].next = b;
            low.nodes[h].next2 = next;
            return h;
        }
        case St::Repeat: {
            Node until;
            until.k = Node::Branch;
            until.cond = s.cond;
            until.line = s.line;
            int u = emit(until);
            int b = lower_body(s.body, u);
            low.nodes[u].next = next;
            low.nodes[u].next2 = b;
            return b;
        }
        case St::For: {
            ensure_slot(s.name, 1);
            int clr = assign_local(s.name, nullptr, num(0), next, s.line);
            Node head;
            head.k = Node::Branch;
            head.line = s.line;
            int h = emit(head);
            ExprP incr;
            switch (s.dir) {
            case Stmt::ForDir::Up:
                low.nodes[h].cond = binop(Ex::Le, local_ref(s.name), s.to);
                incr = binop(Ex::Add, local_ref(s.name), num(1));
                break;
            case Stmt::ForDir::Down:
                low.nodes[h].cond = binop(Ex::Ge, local_ref(s.name), s.to);
                incr = binop(Ex::Sub, local_ref(s.name), num(1));
                break;
            case Stmt::ForDir::Cyclic:
                low.nodes[h].cond = binop(Ex::Ne, local_ref(s.name), s.to);
                incr = binop(Ex::Mod,
                             binop(Ex::Add, local_ref(s.name), num(1)),
                             num(low.n));
                break;
            }
            int inc = assign_local(s.name, nullptr, incr, h, s.line);
            int b = lower_body(s.body, inc);
            low.nodes[h].next = b;
            low.nodes[h].next2 = clr;
            return assign_local(s.name, nullptr, s.from, h, s.line);
        }
        case St::Label: {
            Node nd;
            nd.k = Node::Jump;
            nd.next = next;
            nd.line = s.line;
            int n0 = emit(nd);
            labels[s.name] = n0;
            return n0;
        }
        case St::Goto: {
            Node nd;
            nd.k = Node::Jump;
            nd.line = s.line;
            int n0 = emit(nd);
            goto_fixups.emplace_back(n0, s.name);
            return n0;
        }
        }
        throw CompileError("unhandled statement");
    }
};

Lowered lower(const Program &p, int my, int n) {
    LowerCtx cx;
    cx.prog = &p;
    cx.low.my = my;
    cx.low.n = n;
    RegLayout regs = instantiate_registers(p, n);
    for (size_t k = 0; k < p.regs.size(); k++) {
        cx.low.regbase[p.regs[k].name] = regs.bases[k];
    }
    for (auto &ri : regs.flat)
        cx.low.domain.push_back(ri.domain);
    for (auto &v : p.vars)
        cx.ensure_slot(v.name, v.array ? (int)eval_const(v.size.get(), n) : 1);

    // the program body repeats forever; node 0 is a jump to the body entry
    Node top;
    top.k = Node::Jump;
    cx.emit(top);
    int entry = cx.lower_body(p.body, 0);
    cx.low.nodes[0].next = entry;
    for (auto &[node, label] : cx.goto_fixups) {
        auto it = cx.labels.find(label);
        if (it == cx.labels.end())
            throw CompileError("goto to unknown label " + label);
        cx.low.nodes[node].next = it->second;
    }
    return cx.low;
}

// ---------------------------------------------------------------------------
// symbolic execution

struct StopInfo {
    enum K { Read, StartW, FinishW, NC, CR } k;
    int reg = -1; // Read target / StartW target
    int val = -1; // StartW value
};

constexpr int kMaxSilentSteps = 1'000'000;

StopInfo fast_forward(TState &s, const Lowered &L) {
    for (int steps = 0; steps < kMaxSilentSteps; steps++) {
        if (s.wreg >= 0)
            return {StopInfo::FinishW};
        const Node &nd = L.nodes[s.node];
        EvalCtx c;
        c.low = &L;
        c.env = &s.env;
        c.path = &s.path;
        if (!nd.bname.empty())
            c.bound[nd.bname] = nd.bval;
        switch (nd.k) {
        case Node::NonCrit:
            return {StopInfo::NC};
        case Node::Crit:
            return {StopInfo::CR};
        case Node::Jump:
            s.node = nd.next;
            break;
        case Node::AssignLocal: {
            long ix = ev_subscript(nd.index.get(), c);
            long v = c.need ? 0 : ev(nd.rhs.get(), c);
            if (c.need)
                return {StopInfo::Read, c.need_reg};
            s.env[nd.slot + ix] = (int16_t)v;
            s.path.clear();
            s.node = nd.next;
            break;
        }
        case Node::WriteReg: {
            long ix = ev_subscript(nd.index.get(), c);
            long v = c.need ? 0 : ev(nd.rhs.get(), c);
            if (c.need)
                return {StopInfo::Read, c.need_reg};
            int flat = nd.rbase + (int)ix;
            if (flat < 0 || flat >= (int)L.domain.size())
                throw CompileError("register index out of range at line " +
                                   std::to_string(nd.line));
            if (v < 0 || v >= L.domain[flat])
                throw CompileError("written value out of domain at line " +
                                   std::to_string(nd.line));
            return {StopInfo::StartW, flat, (int)v};
        }
        case Node::Branch: {
            long v = ev(nd.cond.get(), c);
            if (c.need)
                return {StopInfo::Read, c.need_reg};
            s.node = v ? nd.next : nd.next2;
            s.path.clear();
            break;
        }
        }
    }
    throw CompileError("silent divergence (loop without register access)");
}

Action mka(Kind k, int t, int reg = -1, int value = -1) {
    Action a;
    a.kind = k;
    a.thread = (int8_t)t;
    a.reg = (int16_t)reg;
    a.value = (int16_t)value;
    return a;
}

void compute_flags(ThreadLts &t) {
    const Lts &l = t.lts;
    int n = l.num_states();
    t.pending.assign(n, 0);
    t.phase.assign(n, Phase::NonCritical);
    vector<int8_t> seen(n, 0);
    vector<int> queue{l.init};
    seen[l.init] = 1;
    t.phase[l.init] = Phase::NonCritical;
    for (size_t h = 0; h < queue.size(); h++) {
        int u = queue[h];
        for (auto &[a, v] : l.trans[u]) {
            Kind k = (*l.tab)[a].kind;
            uint8_t p = t.pending[u];
            Phase ph = t.phase[u];
            if (k == Kind::NonCrit) {
                p = 1;
                ph = Phase::Entry;
            } else if (k == Kind::Crit) {
                p = 0;
                ph = Phase::Exit;
            }
            if (!seen[v]) {
                seen[v] = 1;
                t.pending[v] = p;
                t.phase[v] = ph;
                queue.push_back(v);
            } else if (t.pending[v] != p) {
                throw CompileError("crit/noncrit alternation violated");
            }
        }
    }
}

void rebuild_alphabet(Lts &l) {
    l.alphabet.clear();
    for (auto &tr : l.trans)
        for (auto &[a, v] : tr)
            l.alphabet.push_back(a);
    l.sort_all();
}

} // namespace

ThreadLts compile_thread(const Program &p, int i, int n, RegStyle style,
                         ActionTable &tab) {
    if (i < 0 || i >= n)
        throw CompileError("thread id out of range");
    if (n != 2) {
        // reject programs that use the two-thread shorthand
        // (checked lazily: OtherId evaluation would misbehave)
        struct Walk {
            static bool has_other(const Expr *e) {
                if (!e)
                    return false;
                if (e->kind == Ex::OtherId)
                    return true;
                if (e->index && has_other(e->index.get()))
                    return true;
                for (auto &a : e->args)
                    if (has_other(a.get()))
                        return true;
                return false;
            }
            static bool stmt(const Stmt &s) {
                if (has_other(s.index.get()) || has_other(s.value.get()) ||
                    has_other(s.cond.get()) || has_other(s.from.get()) ||
                    has_other(s.to.get()))
                    return true;
                for (auto &b : s.body)
                    if (stmt(*b))
                        return true;
                for (auto &b : s.els)
                    if (stmt(*b))
                        return true;
                return false;
            }
        };
        for (auto &s : p.body)
            if (Walk::stmt(*s))
                throw CompileError(
                    "program uses the two-thread shorthand 'j'; N must be 2");
    }
    Lowered L = lower(p, i, n);

    ThreadLts out;
    out.thread = i;
    out.style = RegStyle::InstantRead;
    out.lts.tab = &tab;

    map<TState, int> index;
    vector<TState> order;
    TState init;
    init.env.assign(L.nlocals, 0);
    fast_forward(init, L);
    index[init] = 0;
    order.push_back(init);
    out.lts.init = 0;

    auto intern_state = [&](TState t) {
        StopInfo dummy = fast_forward(t, L);
        (void)dummy;
        auto [it, fresh] = index.emplace(move(t), (int)order.size());
        if (fresh)
            order.push_back(it->first);
        return it->second;
    };

    for (size_t head = 0; head < order.size(); head++) {
        TState s = order[head];
        out.lts.trans.emplace_back();
        if ((int)out.lts.trans.size() <= (int)head)
            throw CompileError("internal: trans size");
        StopInfo st = fast_forward(s, L); // s unchanged in key fields: ff
                                          // already stopped when interned
        auto &edges = out.lts.trans[head];
        switch (st.k) {
        case StopInfo::Read: {
            for (int d = 0; d < L.domain[st.reg]; d++) {
                TState t = s;
                t.path.push_back((int8_t)d);
                int tgt = intern_state(move(t));
                edges.emplace_back(
                    tab.intern(mka(Kind::InstantRead, i, st.reg, d)), tgt);
            }
            break;
        }
        case StopInfo::StartW: {
            TState t = s;
            t.wreg = (int16_t)st.reg;
            t.wval = (int16_t)st.val;
            int tgt = intern_state(move(t));
            edges.emplace_back(
                tab.intern(mka(Kind::StartWrite, i, st.reg, st.val)), tgt);
            break;
        }
        case StopInfo::FinishW: {
            TState t = s;
            int reg = t.wreg;
            t.wreg = t.wval = -1;
            t.path.clear();
            t.node = L.nodes[t.node].next;
            int tgt = intern_state(move(t));
            edges.emplace_back(tab.intern(mka(Kind::FinishWrite, i, reg)),
                               tgt);
            break;
        }
        case StopInfo::NC:
        case StopInfo::CR: {
            TState t = s;
            t.path.clear();
            t.node = L.nodes[t.node].next;
            int tgt = intern_state(move(t));
            Kind k = st.k == StopInfo::NC ? Kind::NonCrit : Kind::Crit;
            edges.emplace_back(tab.intern(mka(k, i)), tgt);
            break;
        }
        }
        if (order.size() > 2'000'000)
            throw CompileError("thread LTS too large");
    }
    rebuild_alphabet(out.lts);
    compute_flags(out);
    if (style == RegStyle::FullRead)
        return instant_to_full(out, tab);
    return out;
}

ThreadLts instant_to_full(const ThreadLts &t, ActionTable &tab) {
    if (t.style != RegStyle::InstantRead)
        throw invalid_argument("instant_to_full: input is not instant-read");
    ThreadLts out;
    out.thread = t.thread;
    out.style = RegStyle::FullRead;
    out.lts.tab = &tab;
    out.lts.init = t.lts.init;
    int n = t.lts.num_states();
    out.lts.trans.resize(n);
    out.pending = t.pending;
    out.phase = t.phase;
    for (int u = 0; u < n; u++) {
        const auto &edges = t.lts.trans[u];
        bool has_read = false;
        for (auto &[a, v] : edges)
            if ((*t.lts.tab)[a].kind == Kind::InstantRead)
                has_read = true;
        if (!has_read) {
            out.lts.trans[u] = edges;
            continue;
        }
        int reg = -1;
        for (auto &[a, v] : edges) {
            const Action &act = (*t.lts.tab)[a];
            if (act.kind != Kind::InstantRead)
                throw invalid_argument(
                    "read state mixes reads with other actions");
            if (reg < 0)
                reg = act.reg;
            else if (reg != act.reg)
                throw invalid_argument("read state reads two registers");
        }
        int mid = (int)out.lts.trans.size();
        out.lts.trans.emplace_back();
        out.pending.push_back(t.pending[u]);
        out.phase.push_back(t.phase[u]);
        out.lts.trans[u].emplace_back(
            tab.intern(mka(Kind::StartRead, t.thread, reg)), mid);
        for (auto &[a, v] : edges) {
            const Action &act = (*t.lts.tab)[a];
            out.lts.trans[mid].emplace_back(
                tab.intern(
                    mka(Kind::FinishRead, t.thread, act.reg, act.value)),
                v);
        }
    }
    rebuild_alphabet(out.lts);
    return out;
}

ThreadLts full_to_instant(const ThreadLts &t, ActionTable &tab) {
    if (t.style != RegStyle::FullRead)
        throw invalid_argument("full_to_instant: input is not full-read");
    int n = t.lts.num_states();
    vector<int8_t> mid(n, 0);
    for (int u = 0; u < n; u++) {
        const auto &edges = t.lts.trans[u];
        if (edges.size() == 1 &&
            (*t.lts.tab)[edges[0].first].kind == Kind::StartRead)
            mid[edges[0].second] = 1;
    }
    vector<int> remap(n, -1);
    int kept = 0;
    for (int u = 0; u < n; u++)
        if (!mid[u])
            remap[u] = kept++;
    ThreadLts out;
    out.thread = t.thread;
    out.style = RegStyle::InstantRead;
    out.lts.tab = &tab;
    out.lts.init = remap[t.lts.init];
    out.lts.trans.resize(kept);
    out.pending.resize(kept);
    out.phase.resize(kept);
    for (int u = 0; u < n; u++) {
        if (mid[u])
            continue;
        int nu = remap[u];
        out.pending[nu] = t.pending[u];
        out.phase[nu] = t.phase[u];
        for (auto &[a, v] : t.lts.trans[u]) {
            const Action &act = (*t.lts.tab)[a];
            if (act.kind == Kind::StartRead) {
                for (auto &[a2, v2] : t.lts.trans[v]) {
                    const Action &fin = (*t.lts.tab)[a2];
                    if (fin.kind != Kind::FinishRead)
                        throw invalid_argument(
                            "mid-read state has non-finish edges");
                    out.lts.trans[nu].emplace_back(
                        tab.intern(mka(Kind::InstantRead, t.thread, fin.reg,
                                       fin.value)),
                        remap[v2]);
                }
            } else {
                out.lts.trans[nu].emplace_back(a, remap[v]);
            }
        }
    }
    rebuild_alphabet(out.lts);
    return out;
}

bool isomorphic(const Lts &a, const Lts &b) {
    if (a.num_states() != b.num_states())
        return false;
    vector<int> amap(a.num_states(), -1), bmap(b.num_states(), -1);
    vector<pair<int, int>> queue{{a.init, b.init}};
    amap[a.init] = b.init;
    bmap[b.init] = a.init;
    for (size_t h = 0; h < queue.size(); h++) {
        auto [u, v] = queue[h];
        const auto &eu = a.trans[u];
        const auto &ev2 = b.trans[v];
        if (eu.size() != ev2.size())
            return false;
        for (size_t k = 0; k < eu.size(); k++) {
            const Action &au = (*a.tab)[eu[k].first];
            const Action &av = (*b.tab)[ev2[k].first];
            if (!(au == av))
                return false;
            int tu = eu[k].second, tv = ev2[k].second;
            if (amap[tu] < 0 && bmap[tv] < 0) {
                amap[tu] = tv;
                bmap[tv] = tu;
                queue.emplace_back(tu, tv);
            } else if (amap[tu] != tv || bmap[tv] != tu) {
                return false;
            }
        }
    }
    return true;
}

ValidationReport validate_thread_properties(const ThreadLts &t,
                                            const RegLayout &regs) {
    ValidationReport rep;
    auto bad = [&](const string &msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    const Lts &l = t.lts;
    const ActionTable &tab = *l.tab;
    int n = l.num_states();
    // in-edges
    vector<vector<pair<int, int>>> in(n); // (src, action)
    for (int u = 0; u < n; u++)
        for (auto &[a, v] : l.trans[u])
            in[v].emplace_back(u, a);

    for (int u = 0; u < n; u++) {
        const auto &edges = l.trans[u];
        set<Kind> kinds;
        for (auto &[a, v] : edges) {
            const Action &act = tab[a];
            kinds.insert(act.kind);
            if (act.thread != t.thread)
                bad("rule 1: foreign thread action at state " + std::to_string(u));
            if (act.kind == Kind::OrderRead || act.kind == Kind::OrderWrite ||
                act.kind == Kind::LocalStep)
                bad("rule 1: thread owns internal action at state " +
                    std::to_string(u));
            if (t.style == RegStyle::FullRead && act.kind == Kind::InstantRead)
                bad("style: instant read in full-read thread");
            if (t.style == RegStyle::InstantRead &&
                (act.kind == Kind::StartRead || act.kind == Kind::FinishRead))
                bad("style: start/finish read in instant-read thread");
            if (act.kind == Kind::StartWrite &&
                (act.value < 0 || act.value >= regs.flat[act.reg].domain))
                bad("rule 3: written value out of domain at state " +
                    std::to_string(u));
        }
        // rule 2: read states enable all domain values, and nothing else
        if (kinds.count(Kind::InstantRead) || kinds.count(Kind::FinishRead)) {
            Kind rk =
                kinds.count(Kind::InstantRead) ? Kind::InstantRead : Kind::FinishRead;
            if (kinds.size() != 1)
                bad("rule 2: read state mixes actions at state " +
                    std::to_string(u));
            set<int> values;
            int reg = -1;
            for (auto &[a, v] : edges) {
                values.insert(tab[a].value);
                reg = tab[a].reg;
            }
            if (reg >= 0 && (int)values.size() != regs.flat[reg].domain)
                bad("rule 2: read state misses domain values at state " +
                    std::to_string(u));
            (void)rk;
        }
        // rule 3: after a start-write only the matching finish-write
        for (auto &[a, v] : edges) {
            if (tab[a].kind != Kind::StartWrite)
                continue;
            for (auto &[a2, v2] : l.trans[v])
                if (tab[a2].kind != Kind::FinishWrite ||
                    tab[a2].reg != tab[a].reg)
                    bad("rule 3: non-matching action after start-write at "
                        "state " +
                        std::to_string(v));
        }
        // rule 4: responses only straight after their invocation
        for (auto &[a, v] : edges) {
            Kind k = tab[a].kind;
            if (k != Kind::FinishRead && k != Kind::FinishWrite)
                continue;
            Kind want =
                k == Kind::FinishRead ? Kind::StartRead : Kind::StartWrite;
            for (auto &[src, ia] : in[u])
                if (tab[ia].kind != want || tab[ia].reg != tab[a].reg)
                    bad("rule 4: response without immediate invocation at "
                        "state " +
                        std::to_string(u));
        }
    }
    // crit/noncrit alternation is recomputed by compute_flags at build time;
    // re-check reachability of crit here
    bool any_crit = false;
    for (int u = 0; u < n; u++)
        for (auto &[a, v] : l.trans[u])
            if (tab[a].kind == Kind::Crit)
                any_crit = true;
    if (!any_crit)
        bad("no critical section reachable");
    return rep;
}

} // namespace mex
