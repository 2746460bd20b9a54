#pragma once

#include "mexcheck/compile.hpp"
#include "mexcheck/conc.hpp"
#include "mexcheck/lang.hpp"
#include "mexcheck/lts.hpp"
#include "mexcheck/registers.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace mex {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

struct ModelConfig {
    RegKind kind = RegKind::Atomic;
    Conc conc = Conc::T;
    RegStyle style = RegStyle::InstantRead;
    Blocking blocking = Blocking::None;
    int nthreads = 2;
};

struct CompositeModel {
    ModelConfig cfg;
    ActionTable tab;
    RegLayout layout;
    std::vector<ThreadLts> threads;
    std::vector<Lts> reg_ltss;
    std::vector<std::vector<RegStatus>> reg_statuses;
    std::vector<RegisterConfig> regcfgs;
    std::vector<int> assignment; // concrete initial value per flat register
    Composite comp;              // components: threads then registers

    CompositeModel() = default;
    CompositeModel(const CompositeModel &) = delete;

    int nthreads() const { return cfg.nthreads; }
    // pending bitmask of a composite state
    uint8_t pending_mask(const std::vector<int> &loc) const;
};

std::unique_ptr<CompositeModel> build(const Program &p, const ModelConfig &mc,
                                      const std::vector<int> &assignment);

// all concrete initial-value assignments (enumerating `any` registers,
// ascending lexicographic)
std::vector<std::vector<int>> any_assignments(const RegLayout &layout);

// ---------------------------------------------------------------------------

struct TraceStep {
    Action action;
    std::vector<int> reg_stor; // stored value per flat register, after step
};

struct Counterexample {
    enum K { SafetyTrace, LivenessLasso } kind = SafetyTrace;
    std::vector<TraceStep> stem;
    std::vector<TraceStep> cycle; // empty for safety traces and for runs
                                  // ending in a quiescent state
    int crit_a = -1, crit_b = -1; // safety: the two threads
    int starving_thread = -1;     // -1 for deadlock-freedom violations
    std::vector<int> assignment;
    std::vector<std::string> reg_names;
};

struct PropResult {
    bool holds = true;
    bool inconclusive = false;
    std::optional<Counterexample> cex;
};

struct Verdict {
    PropResult me, df, sf;
    char letter = 'S'; // X, M, D, S, or ? when inconclusive
};

struct CheckOptions {
    ExploreBudget budget;
    bool want_trace = true;
};

// ---------------------------------------------------------------------------
// per-model machinery (exposed for tests and for graph reuse)

struct ExploredModel {
    Graph graph;
    std::vector<uint8_t> pending; // per state: thread pending bitmask
    bool me_violation = false;
    uint32_t me_state = 0;
    int me_t0 = -1, me_t1 = -1;
    bool complete = false; // graph covers all reachable states
};

ExploredModel explore(const CompositeModel &m, const ExploreBudget &budget,
                      bool stop_at_me_violation);

PropResult check_mutual_exclusion(const CompositeModel &m,
                                  const ExploredModel &x);

// liveness core: iterative SCC pruning over the graph restricted to
// non-forbidden edges; returns per-state membership in a surviving
// nontrivial SCC (core), plus the component id per state
struct CoreResult {
    std::vector<uint8_t> core;
    std::vector<int32_t> comp; // component id on the final iteration, -1 none
};
CoreResult liveness_core(const CompositeModel &m, const ExploredModel &x,
                         const std::vector<uint8_t> &forbidden_action,
                         Conc conc);

PropResult check_deadlock_freedom(const CompositeModel &m,
                                  const ExploredModel &x, Conc conc,
                                  bool want_trace = true);
PropResult check_starvation_freedom(const CompositeModel &m,
                                    const ExploredModel &x, Conc conc,
                                    bool want_trace = true);

// ---------------------------------------------------------------------------

// the six supported memory models are (Safe|Regular, T) and (Atomic, any);
// throws ConfigError otherwise
void validate_model(RegKind kind, Conc c);

Verdict verdict(const Program &p, RegKind kind, Conc c, int n,
                const CheckOptions &opt = {});
Verdict verdict_ex(const Program &p, const ModelConfig &mc,
                   const CheckOptions &opt = {});

// verdicts for one table row (kind/conc pairs in table order: Safe-T,
// Regular-T, Atomic-T, Atomic-S, Atomic-I, Atomic-A); atomic columns share
// each explored graph
std::vector<Verdict> verdict_row(const Program &p, int n,
                                 const CheckOptions &opt = {});

// justness closure test on an explicit cycle (label ids into m.tab)
bool justness_closed(const std::vector<uint32_t> &cycle_states,
                     const std::vector<int> &cycle_labels,
                     const CompositeModel &m, const ExploredModel &x,
                     Conc conc);

} // namespace mex
