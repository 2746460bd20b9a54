#pragma once

#include "mexcheck/action.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mex {

// One component LTS. Transitions are stored per source state, sorted by
// (action id, target); the same action id may occur with several targets.
// alphabet lists the action ids this component synchronizes on: a composed
// transition with label a requires a step from every component whose
// alphabet contains a.
struct Lts {
    const ActionTable *tab = nullptr;
    int init = 0;
    std::vector<std::vector<std::pair<int, int>>> trans;
    std::vector<int> alphabet; // sorted, unique

    int num_states() const { return (int)trans.size(); }
    void sort_all();
    bool in_alphabet(int action) const;
    std::vector<int> enabled(int s) const;
};

struct Step {
    int action = -1;
    int target = -1; // state index in the host graph / lts
};

// finite witness of an infinite path: stem from init, then a cycle whose
// first state is the stem's last state
struct Lasso {
    std::vector<Step> stem;
    std::vector<Step> cycle;
};

std::vector<int> project_weak_trace(const ActionTable &tab,
                                    const std::vector<int> &labels);

// ---------------------------------------------------------------------------
// packed product

struct PackedState {
    std::array<uint64_t, 2> w{0, 0};
    bool operator==(const PackedState &o) const { return w == o.w; }
    bool operator<(const PackedState &o) const { return w < o.w; }
};

struct PackedHash {
    size_t operator()(const PackedState &p) const {
        uint64_t h = p.w[0] * 0x9e3779b97f4a7c15ULL;
        h ^= (p.w[1] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
        return (size_t)h;
    }
};

struct Composite {
    const ActionTable *tab = nullptr;
    std::vector<const Lts *> comps;
    PackedState initial;

    // packing layout
    std::vector<int> bits, shift, word;
    // owners[a] = component indices whose alphabet contains a (at most 2)
    std::vector<std::array<int16_t, 2>> owners;

    void build();
    PackedState pack(const std::vector<int> &loc) const;
    void unpack(const PackedState &p, std::vector<int> &loc) const;
    int local_state(const PackedState &p, int comp) const;
    void successors(const std::vector<int> &loc,
                    std::vector<std::pair<int, PackedState>> &out) const;
};

// small unpacked product that enumerates reachable tuples; the reference
// composition operation for tests and small models
Lts compose(const std::vector<const Lts *> &comps, ActionTable &tab);

// ---------------------------------------------------------------------------
// materialized reachable graph (CSR edges, BFS order, BFS tree)

struct Graph {
    std::vector<PackedState> states;
    std::vector<uint64_t> eoff; // size states+1
    std::vector<int32_t> eact;
    std::vector<uint32_t> edst;
    std::vector<uint32_t> parent;
    std::vector<int32_t> parent_act;

    size_t num_states() const { return states.size(); }
    size_t num_edges() const { return edst.size(); }
    int find(const PackedState &p) const; // linear: tests only
};

struct ExploreBudget {
    uint64_t max_states = 60'000'000;
    double seconds = 1e9;
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string &what)
        : std::runtime_error(what) {}
};

// visitor(state index, unpacked locals, successor list) may return true to
// stop exploration early (the graph then stays partial)
using ExploreVisitor = std::function<bool(
    uint32_t, const std::vector<int> &,
    const std::vector<std::pair<int, PackedState>> &)>;

Graph materialize(const Composite &c, const ExploreBudget &budget,
                  const ExploreVisitor &visitor = nullptr);

// BFS-tree path from init to state s as a list of steps
std::vector<Step> tree_path(const Graph &g, uint32_t s);

} // namespace mex
