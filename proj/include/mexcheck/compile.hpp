#pragma once

#include "mexcheck/lang.hpp"
#include "mexcheck/lts.hpp"
#include "mexcheck/registers.hpp"

#include <string>
#include <vector>

namespace mex {

enum class Phase : uint8_t { NonCritical, Entry, Critical, Exit };

struct ThreadLts {
    Lts lts;
    int thread = 0;
    RegStyle style = RegStyle::InstantRead;
    // per state: has this thread left its non-critical section without
    // entering the critical section since (the liveness trigger)?
    std::vector<uint8_t> pending;
    std::vector<Phase> phase;
};

struct CompileError : std::runtime_error {
    explicit CompileError(const std::string &what)
        : std::runtime_error(what) {}
};

// compile thread i of p for n threads; actions are interned into tab; the
// register ids used are flat ids per instantiate_registers(p, n)
ThreadLts compile_thread(const Program &p, int i, int n, RegStyle style,
                         ActionTable &tab);

// read-style conversions: expand instant reads into start/finish pairs and
// back; both return a structurally fresh ThreadLts
ThreadLts instant_to_full(const ThreadLts &t, ActionTable &tab);
ThreadLts full_to_instant(const ThreadLts &t, ActionTable &tab);

// true when the two LTSs are isomorphic (same shape, same labels), with the
// isomorphism forced by simultaneous BFS; both must be deterministic up to
// the label
bool isomorphic(const Lts &a, const Lts &b);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// check the thread shape rules: only own-thread register actions plus
// crit/noncrit (1); reads return every domain value (2); writes stay in
// domain and finish with the matching response (3); responses only directly
// after their invocation (4); crit/noncrit alternation
ValidationReport validate_thread_properties(const ThreadLts &t,
                                            const RegLayout &regs);

} // namespace mex
