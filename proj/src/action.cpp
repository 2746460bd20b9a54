#include "mexcheck/action.hpp"

using namespace std;

namespace mex {

const char *kind_name(Kind k) {
    switch (k) {
    case Kind::StartRead: return "sr";
    case Kind::OrderRead: return "or";
    case Kind::FinishRead: return "fr";
    case Kind::InstantRead: return "r";
    case Kind::StartWrite: return "sw";
    case Kind::OrderWrite: return "ow";
    case Kind::FinishWrite: return "fw";
    case Kind::Crit: return "crit";
    case Kind::NonCrit: return "noncrit";
    case Kind::LocalStep: return "local";
    }
    return "?";
}

bool action_has_value(Kind k) {
    return k == Kind::FinishRead || k == Kind::InstantRead ||
           k == Kind::StartWrite;
}

bool is_register_action(Kind k) {
    return k != Kind::Crit && k != Kind::NonCrit && k != Kind::LocalStep;
}

bool is_read(const Action &a) {
    return a.kind == Kind::StartRead || a.kind == Kind::InstantRead;
}

bool is_write(const Action &a) { return a.kind == Kind::StartWrite; }

bool is_blockable(const Action &a) { return a.kind == Kind::NonCrit; }

bool equivalent(const Action &a, const Action &b) {
    if (a == b)
        return true;
    return a.kind == Kind::InstantRead && b.kind == Kind::InstantRead &&
           a.thread == b.thread && a.reg == b.reg;
}

string to_string(const Action &a, const vector<string> &reg_names) {
    string out = kind_name(a.kind);
    out += "_" + std::to_string((int)a.thread);
    if (a.reg >= 0) {
        out += "(";
        if ((size_t)a.reg < reg_names.size())
            out += reg_names[a.reg];
        else
            out += "x" + std::to_string((int)a.reg);
        if (action_has_value(a.kind))
            out += "," + std::to_string((int)a.value);
        out += ")";
    } else if (a.kind == Kind::LocalStep) {
        out += "(" + std::to_string((int)a.tag) + ")";
    }
    return out;
}

int ActionTable::intern(const Action &a) {
    auto it = ids.find(a);
    if (it != ids.end())
        return it->second;
    int id = (int)acts.size();
    ids.emplace(a, id);
    acts.push_back(a);
    return id;
}

int ActionTable::lookup(const Action &a) const {
    auto it = ids.find(a);
    return it == ids.end() ? -1 : it->second;
}

} // namespace mex
