#include "mexcheck/lts.hpp"

#include <algorithm>
#include <chrono>
#include <map>

using namespace std;

namespace mex {

void Lts::sort_all() {
    for (auto &v : trans)
        sort(v.begin(), v.end());
    sort(alphabet.begin(), alphabet.end());
    alphabet.erase(unique(alphabet.begin(), alphabet.end()), alphabet.end());
}

bool Lts::in_alphabet(int action) const {
    return binary_search(alphabet.begin(), alphabet.end(), action);
}

vector<int> Lts::enabled(int s) const {
    if (s < 0 || s >= num_states())
        throw invalid_argument("enabled: unknown state");
    vector<int> out;
    for (auto &[a, t] : trans[s])
        if (out.empty() || out.back() != a)
            out.push_back(a);
    return out;
}

vector<int> project_weak_trace(const ActionTable &tab,
                               const vector<int> &labels) {
    vector<int> out;
    for (int a : labels) {
        Kind k = tab[a].kind;
        if (k == Kind::Crit || k == Kind::NonCrit)
            out.push_back(a);
    }
    return out;
}

// ---------------------------------------------------------------------------

void Composite::build() {
    if (comps.empty())
        throw invalid_argument("compose: empty component list");
    int n = (int)comps.size();
    bits.resize(n);
    shift.resize(n);
    word.resize(n);
    int w = 0, used = 0;
    for (int i = 0; i < n; i++) {
        int states = comps[i]->num_states();
        int b = 1;
        while ((1 << b) < states)
            b++;
        if (used + b > 64) {
            w++;
            used = 0;
            if (w >= 2)
                throw runtime_error("composite state does not fit 128 bits");
        }
        bits[i] = b;
        shift[i] = used;
        word[i] = w;
        used += b;
    }
    owners.assign(tab->size(), {-1, -1});
    for (int i = 0; i < n; i++) {
        for (int a : comps[i]->alphabet) {
            auto &o = owners[a];
            if (o[0] < 0)
                o[0] = (int16_t)i;
            else if (o[1] < 0)
                o[1] = (int16_t)i;
            else
                throw runtime_error("action owned by more than two components");
        }
    }
    vector<int> loc(n);
    for (int i = 0; i < n; i++)
        loc[i] = comps[i]->init;
    initial = pack(loc);
}

PackedState Composite::pack(const vector<int> &loc) const {
    PackedState p;
    for (size_t i = 0; i < loc.size(); i++)
        p.w[word[i]] |= (uint64_t)loc[i] << shift[i];
    return p;
}

void Composite::unpack(const PackedState &p, vector<int> &loc) const {
    loc.resize(comps.size());
    for (size_t i = 0; i < comps.size(); i++)
        loc[i] = (int)((p.w[word[i]] >> shift[i]) & ((1ULL << bits[i]) - 1));
}

int Composite::local_state(const PackedState &p, int comp) const {
    return (int)((p.w[word[comp]] >> shift[comp]) &
                 ((1ULL << bits[comp]) - 1));
}

void Composite::successors(const vector<int> &loc,
                           vector<pair<int, PackedState>> &out) const {
    out.clear();
    PackedState base = pack(loc);
    for (size_t i = 0; i < comps.size(); i++) {
        const auto &tr = comps[i]->trans[loc[i]];
        for (size_t k = 0; k < tr.size();) {
            int a = tr[k].first;
            size_t k2 = k;
            while (k2 < tr.size() && tr[k2].first == a)
                k2++;
            const auto &own = owners[a];
            if (own[0] == (int)i) {
                if (own[1] < 0) {
                    for (size_t j = k; j < k2; j++) {
                        PackedState q = base;
                        q.w[word[i]] &= ~(((1ULL << bits[i]) - 1) << shift[i]);
                        q.w[word[i]] |= (uint64_t)tr[j].second << shift[i];
                        out.emplace_back(a, q);
                    }
                } else {
                    int c2 = own[1];
                    const auto &tr2 = comps[c2]->trans[loc[c2]];
                    auto lo = lower_bound(tr2.begin(), tr2.end(),
                                          make_pair(a, -1));
                    for (size_t j = k; j < k2; j++) {
                        for (auto it = lo; it != tr2.end() && it->first == a;
                             ++it) {
                            PackedState q = base;
                            q.w[word[i]] &=
                                ~(((1ULL << bits[i]) - 1) << shift[i]);
                            q.w[word[i]] |= (uint64_t)tr[j].second << shift[i];
                            q.w[word[c2]] &=
                                ~(((1ULL << bits[c2]) - 1) << shift[c2]);
                            q.w[word[c2]] |= (uint64_t)it->second << shift[c2];
                            out.emplace_back(a, q);
                        }
                    }
                }
            }
            // if own[1] == i the pair is emitted when own[0] is processed
            k = k2;
        }
    }
    sort(out.begin(), out.end(),
         [](const pair<int, PackedState> &x, const pair<int, PackedState> &y) {
             if (x.first != y.first)
                 return x.first < y.first;
             return x.second < y.second;
         });
}

Lts compose(const vector<const Lts *> &comps, ActionTable &tab) {
    Composite c;
    c.tab = &tab;
    c.comps = comps;
    c.build();

    Lts out;
    out.tab = &tab;
    map<PackedState, int> index;
    vector<PackedState> order;
    index[c.initial] = 0;
    order.push_back(c.initial);
    out.init = 0;
    vector<int> loc;
    vector<pair<int, PackedState>> succ;
    for (size_t head = 0; head < order.size(); head++) {
        c.unpack(order[head], loc);
        c.successors(loc, succ);
        out.trans.emplace_back();
        for (auto &[a, q] : succ) {
            auto [it, fresh] = index.emplace(q, (int)order.size());
            if (fresh)
                order.push_back(q);
            out.trans[head].emplace_back(a, it->second);
            out.alphabet.push_back(a);
        }
        if (order.size() > 2'000'000)
            throw BudgetExceeded("compose: too many states");
    }
    out.sort_all();
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// open-addressing index from packed states to dense ids; half the memory of
// an unordered_map and noticeably faster on big runs
struct StateIndex {
    vector<uint32_t> slots; // value = state index + 1, 0 = empty
    uint64_t mask = 0;
    size_t count = 0;

    explicit StateIndex(size_t cap = 1 << 16) { rehash(cap); }

    void rehash(size_t cap) {
        size_t n = 1;
        while (n < cap * 2)
            n <<= 1;
        slots.assign(n, 0);
        mask = n - 1;
    }

    // returns (index, inserted)
    pair<uint32_t, bool> find_or_insert(const PackedState &p, uint32_t next,
                                        const vector<PackedState> &keys) {
        if ((count + 1) * 3 > slots.size() * 2)
            grow(keys);
        uint64_t h = PackedHash{}(p)&mask;
        while (true) {
            uint32_t v = slots[h];
            if (v == 0) {
                slots[h] = next + 1;
                count++;
                return {next, true};
            }
            if (keys[v - 1] == p)
                return {v - 1, false};
            h = (h + 1) & mask;
        }
    }

    void grow(const vector<PackedState> &keys) {
        vector<uint32_t> old;
        old.swap(slots);
        slots.assign(old.size() * 2, 0);
        mask = slots.size() - 1;
        for (uint32_t v : old) {
            if (v == 0)
                continue;
            uint64_t h = PackedHash{}(keys[v - 1]) & mask;
            while (slots[h])
                h = (h + 1) & mask;
            slots[h] = v;
        }
    }
};

} // namespace

Graph materialize(const Composite &c, const ExploreBudget &budget,
                  const ExploreVisitor &visitor) {
    Graph g;
    StateIndex index;
    auto t0 = chrono::steady_clock::now();

    g.states.push_back(c.initial);
    index.find_or_insert(c.initial, 0, g.states);
    g.parent.push_back(0);
    g.parent_act.push_back(-1);
    g.eoff.push_back(0);

    vector<int> loc;
    vector<pair<int, PackedState>> succ;
    for (uint32_t head = 0; head < g.states.size(); head++) {
        if ((head & 0xffff) == 0) {
            auto dt = chrono::duration<double>(chrono::steady_clock::now() - t0)
                          .count();
            if (dt > budget.seconds)
                throw BudgetExceeded("time budget exceeded");
        }
        c.unpack(g.states[head], loc);
        c.successors(loc, succ);
        for (auto &[a, q] : succ) {
            auto [ix, fresh] =
                index.find_or_insert(q, (uint32_t)g.states.size(), g.states);
            if (fresh) {
                if (g.states.size() >= budget.max_states)
                    throw BudgetExceeded("state budget exceeded");
                g.states.push_back(q);
                g.parent.push_back(head);
                g.parent_act.push_back(a);
            }
            g.eact.push_back(a);
            g.edst.push_back(ix);
        }
        g.eoff.push_back(g.edst.size());
        if (visitor && visitor(head, loc, succ))
            break;
    }
    return g;
}

int Graph::find(const PackedState &p) const {
    for (size_t i = 0; i < states.size(); i++)
        if (states[i] == p)
            return (int)i;
    return -1;
}

vector<Step> tree_path(const Graph &g, uint32_t s) {
    vector<Step> out;
    while (s != 0 || g.parent_act[s] >= 0) {
        out.push_back({g.parent_act[s], (int)s});
        uint32_t p = g.parent[s];
        if (p == s)
            break;
        s = p;
    }
    reverse(out.begin(), out.end());
    return out;
}

} // namespace mex
