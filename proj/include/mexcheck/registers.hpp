#pragma once

#include "mexcheck/lts.hpp"

#include <array>
#include <set>
#include <string>
#include <vector>

namespace mex {

constexpr int kMaxThreads = 8;
constexpr int kMaxDomain = 16;

enum class RegKind : uint8_t { Safe, Regular, Atomic };
enum class RegStyle : uint8_t { FullRead, InstantRead };
enum class Blocking : uint8_t {
    None,
    BlockAll,
    BlockWritesAndReadsOfWrites,
    BlockWritesOnly,
};

struct RegisterConfig {
    int id = 0;
    int domain = 2; // values 0..domain-1
    int init = 0;   // concrete; ANY is resolved before this layer
    RegKind kind = RegKind::Atomic;
    RegStyle style = RegStyle::InstantRead;
    Blocking blocking = Blocking::None;
    std::string name = "x";
};

// Memory of one register. Thread sets are bitmasks, value sets are bitmasks
// over the domain. rec is -1 / posv is 0 for threads where the field is not
// meaningful, so equality is structural.
struct RegStatus {
    uint8_t stor = 0;
    uint8_t rds = 0;
    uint8_t wrts = 0;
    uint8_t pend = 0;
    uint8_t ovrl = 0;
    std::array<int8_t, kMaxThreads> rec{};
    std::array<uint16_t, kMaxThreads> posv{};

    auto operator<=>(const RegStatus &) const = default;
};

RegStatus initial_status(const RegisterConfig &cfg, int nthreads);

// the update function matching the action, applied to a full status; guards
// are NOT checked here (callers enumerate only guarded summands)
RegStatus apply_update(const RegStatus &s, const Action &a, int payload,
                       const RegisterConfig &cfg, int nthreads);

// drop fields that can no longer influence behavior for this kind/style, so
// that equivalent statuses collapse
RegStatus canonicalize(const RegStatus &s, const RegisterConfig &cfg,
                       int nthreads);

// reachable behavior of one register as a component LTS; the alphabet covers
// every interface action of this register for every thread and domain value;
// statuses (when given) receives the status behind each LTS state
Lts register_lts(const RegisterConfig &cfg, int nthreads, ActionTable &tab,
                 std::vector<RegStatus> *statuses = nullptr);

// enumerate (guard, action, payload) successor steps of a canonical status
struct RegStep {
    Action action;
    int payload; // data argument where the update takes one, else -1
};
std::vector<RegStep> register_steps(const RegStatus &s,
                                    const RegisterConfig &cfg, int nthreads);

// ---------------------------------------------------------------------------
// interval scenarios (the worked read/write overlap examples)

struct ScenarioEvent {
    enum Type { SR, FR, SW, FW, IR } type;
    int thread = 0;
    int value = -1; // SW payload; FR/IR capture marker (ignored)
};

// parse the little scenario format: one event per line in temporal order,
// "sr <t>", "fr <t>", "sw <t> <d>", "fw <t>", "ir <t>"
std::vector<ScenarioEvent> parse_scenario(const std::string &text);

// all read-value tuples (in FR/IR event order) realizable when internal
// order actions may interleave freely with the scripted invocations
std::set<std::vector<int>>
enumerate_scenario_outcomes(const RegisterConfig &cfg, int nthreads,
                            const std::vector<ScenarioEvent> &script);

} // namespace mex
