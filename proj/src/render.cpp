#include "mexcheck/render.hpp"

#include <json.hpp>
#include <sstream>

using namespace std;
using nlohmann::json;

namespace mex {

namespace {

string reg_name(const Action &a, const vector<string> &reg_names) {
    if (a.reg >= 0 && a.reg < (int)reg_names.size())
        return reg_names[a.reg];
    return "r" + std::to_string((int)a.reg);
}

const char *phase_of(Kind k) {
    switch (k) {
    case Kind::StartRead:
    case Kind::StartWrite: return "start";
    case Kind::OrderRead:
    case Kind::OrderWrite: return "order";
    case Kind::FinishRead:
    case Kind::FinishWrite: return "finish";
    case Kind::InstantRead: return "instant";
    default: return "";
    }
}

const char *verb_of(Kind k) {
    switch (k) {
    case Kind::StartRead:
    case Kind::OrderRead:
    case Kind::FinishRead:
    case Kind::InstantRead: return "read";
    case Kind::StartWrite:
    case Kind::OrderWrite:
    case Kind::FinishWrite: return "write";
    case Kind::Crit: return "crit";
    case Kind::NonCrit: return "noncrit";
    default: return "local";
    }
}

} // namespace

string describe_action(const Action &a, const vector<string> &reg_names) {
    ostringstream o;
    o << "t" << (int)a.thread << ": ";
    switch (a.kind) {
    case Kind::StartRead:
        o << "read " << reg_name(a, reg_names) << " (start)";
        break;
    case Kind::OrderRead:
        o << "read " << reg_name(a, reg_names) << " (order)";
        break;
    case Kind::FinishRead:
        o << "read " << reg_name(a, reg_names) << " = " << a.value
          << " (finish)";
        break;
    case Kind::InstantRead:
        o << "read " << reg_name(a, reg_names) << " = " << a.value;
        break;
    case Kind::StartWrite:
        o << "write " << reg_name(a, reg_names) << ":=" << a.value
          << " (start)";
        break;
    case Kind::OrderWrite:
        o << "write " << reg_name(a, reg_names) << " (order)";
        break;
    case Kind::FinishWrite:
        o << "write " << reg_name(a, reg_names) << " (finish)";
        break;
    case Kind::Crit:
        o << "crit";
        break;
    case Kind::NonCrit:
        o << "noncrit";
        break;
    case Kind::LocalStep:
        o << "local";
        break;
    }
    return o.str();
}

namespace {

void render_human_steps(ostream &o, const vector<TraceStep> &steps,
                        const vector<string> &reg_names, int &no) {
    for (const TraceStep &ts : steps) {
        ostringstream line;
        line << describe_action(ts.action, reg_names);
        o << "  " << no++ << "\t" << line.str();
        size_t pad = line.str().size() < 36 ? 36 - line.str().size() : 1;
        o << string(pad, ' ') << "|";
        for (size_t r = 0; r < ts.reg_stor.size(); r++)
            o << " " << reg_names[r] << "=" << ts.reg_stor[r];
        o << "\n";
    }
}

} // namespace

string render_trace(const Counterexample &cex, TraceFormat fmt) {
    if (fmt == TraceFormat::Human) {
        ostringstream o;
        o << "initial:";
        for (size_t r = 0; r < cex.assignment.size(); r++)
            o << " " << cex.reg_names[r] << "=" << cex.assignment[r];
        o << "\n";
        int no = 1;
        render_human_steps(o, cex.stem, cex.reg_names, no);
        if (cex.kind == Counterexample::SafetyTrace) {
            o << "both crit_" << cex.crit_a << " and crit_" << cex.crit_b
              << " enabled\n";
        } else if (cex.cycle.empty()) {
            o << "no further progress possible";
            if (cex.starving_thread >= 0)
                o << " for t" << cex.starving_thread;
            o << "\n";
        } else {
            o << "— cycle repeats —\n";
            render_human_steps(o, cex.cycle, cex.reg_names, no);
            if (cex.starving_thread >= 0)
                o << "t" << cex.starving_thread << " never reaches crit\n";
            else
                o << "no thread ever reaches crit\n";
        }
        return o.str();
    }

    json j;
    j["kind"] = cex.kind == Counterexample::SafetyTrace ? "safety_trace"
                                                        : "liveness_lasso";
    json steps = json::array();
    auto add = [&](const TraceStep &ts) {
        json s;
        s["action"] = verb_of(ts.action.kind);
        s["thread"] = (int)ts.action.thread;
        if (ts.action.reg >= 0) {
            s["register"] = reg_name(ts.action, cex.reg_names);
            if (action_has_value(ts.action.kind))
                s["value"] = (int)ts.action.value;
            s["phase"] = phase_of(ts.action.kind);
        }
        steps.push_back(move(s));
    };
    for (auto &ts : cex.stem)
        add(ts);
    int cycle_start = (int)cex.stem.size();
    for (auto &ts : cex.cycle)
        add(ts);
    j["steps"] = move(steps);
    if (cex.kind == Counterexample::LivenessLasso)
        j["cycle_start_index"] = cycle_start;
    if (cex.kind == Counterexample::SafetyTrace) {
        j["crit_threads"] = {cex.crit_a, cex.crit_b};
    } else if (cex.starving_thread >= 0) {
        j["starving_thread"] = cex.starving_thread;
    }
    json init;
    for (size_t r = 0; r < cex.assignment.size(); r++)
        init[cex.reg_names[r]] = cex.assignment[r];
    j["initial"] = move(init);
    return j.dump(2) + "\n";
}

} // namespace mex
