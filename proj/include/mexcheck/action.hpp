#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mex {

enum class Kind : uint8_t {
    StartRead,
    OrderRead,
    FinishRead,
    InstantRead,
    StartWrite,
    OrderWrite,
    FinishWrite,
    Crit,
    NonCrit,
    LocalStep,
};

// A transition label. thread is always meaningful; reg is -1 for
// Crit/NonCrit/LocalStep; value is meaningful only for FinishRead,
// InstantRead and StartWrite; tag distinguishes LocalStep sources.
struct Action {
    Kind kind = Kind::LocalStep;
    int8_t thread = 0;
    int16_t reg = -1;
    int16_t value = -1;
    int16_t tag = 0;

    auto operator<=>(const Action &) const = default;
};

const char *kind_name(Kind k);
bool action_has_value(Kind k);
bool is_register_action(Kind k);

// read?/write? predicates: only the start of an operation (or the whole
// instantaneous operation) counts.
bool is_read(const Action &a);
bool is_write(const Action &a);

// blockable set B: a thread may stay in its non-critical section forever
bool is_blockable(const Action &a);

// identity except that instant reads of different values are equivalent
bool equivalent(const Action &a, const Action &b);

std::string to_string(const Action &a,
                      const std::vector<std::string> &reg_names = {});

// Interns actions into dense ids shared by all components of one model.
// Ids are assigned in first-intern order, which the builders keep
// deterministic.
struct ActionTable {
    std::map<Action, int> ids;
    std::vector<Action> acts;

    int intern(const Action &a);
    int lookup(const Action &a) const;
    int size() const { return (int)acts.size(); }
    const Action &operator[](int id) const { return acts[id]; }
};

} // namespace mex
