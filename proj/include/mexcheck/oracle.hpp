#pragma once

#include "mexcheck/checker.hpp"

#include <string>

namespace mex {

// Deliberately naive cross-checks for the main engine. Everything here
// favors the obvious implementation over speed and shares as little code
// with the checker as possible.

// literal breadth-first product exploration over unpacked state tuples
struct OracleExplore {
    uint64_t states = 0;
    uint64_t transitions = 0;
    bool me_violation = false;
    uint64_t fingerprint = 0; // order-independent hash over all edges
};
OracleExplore oracle_explore(const CompositeModel &m, uint64_t max_states);

// the same fingerprint computed from an already-materialized graph
uint64_t graph_fingerprint(const CompositeModel &m, const ExploredModel &x);

// replay a counterexample through the composite: every step must be a real
// transition with a matching store snapshot; lassos must close their cycle,
// keep the forbidden thread out of the critical section, and be just
bool oracle_check_trace(const CompositeModel &m, const Counterexample &cex,
                        Conc conc, std::string *why = nullptr);

// verdict letters must agree across the two read styles for atomic registers
bool style_agreement(const Program &p, int n, Conc c, const CheckOptions &opt,
                     char *a = nullptr, char *b = nullptr);

// ... and across blocking disciplines for full-read atomic registers
bool blocking_agreement(const Program &p, int n, Conc c, Blocking blk,
                        const CheckOptions &opt, char *a = nullptr,
                        char *b = nullptr);

// randomized single-register checks: single-thread runs read back the last
// completed write, and adjacent steps of different threads commute for
// full-read atomic registers (order/order and order-write pairs excepted)
struct FuzzReport {
    long runs = 0;
    long failures = 0;
    std::string first; // description of the first failure
};
FuzzReport register_fuzz(const RegisterConfig &cfg, int nthreads, int runs,
                         unsigned seed);

} // namespace mex
