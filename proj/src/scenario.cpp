#include "mexcheck/registers.hpp"

#include <sstream>
#include <stdexcept>
#include <tuple>

using namespace std;

namespace mex {

vector<ScenarioEvent> parse_scenario(const string &text) {
    vector<ScenarioEvent> out;
    istringstream in(text);
    string line;
    int lineno = 0;
    while (getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != string::npos)
            line = line.substr(0, hash);
        istringstream ls(line);
        string op;
        if (!(ls >> op))
            continue;
        ScenarioEvent e;
        if (op == "sr")
            e.type = ScenarioEvent::SR;
        else if (op == "fr")
            e.type = ScenarioEvent::FR;
        else if (op == "sw")
            e.type = ScenarioEvent::SW;
        else if (op == "fw")
            e.type = ScenarioEvent::FW;
        else if (op == "ir")
            e.type = ScenarioEvent::IR;
        else
            throw invalid_argument("scenario line " + std::to_string(lineno) +
                                   ": unknown op " + op);
        if (!(ls >> e.thread))
            throw invalid_argument("scenario line " + std::to_string(lineno) +
                                   ": missing thread");
        if (e.type == ScenarioEvent::SW && !(ls >> e.value))
            throw invalid_argument("scenario line " + std::to_string(lineno) +
                                   ": sw needs a value");
        out.push_back(e);
    }
    return out;
}

namespace {

struct ScenarioRun {
    const Lts *lts;
    const ActionTable *tab;
    const vector<ScenarioEvent> *script;
    set<vector<int>> outcomes;
    set<tuple<size_t, int, vector<int>>> visited;

    void go(size_t idx, int state, vector<int> &caps) {
        if (!visited.insert({idx, state, caps}).second)
            return;
        if (idx == script->size()) {
            outcomes.insert(caps);
            return;
        }
        const ScenarioEvent &e = (*script)[idx];
        for (auto &[aid, dst] : lts->trans[state]) {
            const Action &a = (*tab)[aid];
            // internal order steps may interleave freely
            if (a.kind == Kind::OrderRead || a.kind == Kind::OrderWrite) {
                go(idx, dst, caps);
                continue;
            }
            bool match = false, capture = false;
            switch (e.type) {
            case ScenarioEvent::SR:
                match = a.kind == Kind::StartRead && a.thread == e.thread;
                break;
            case ScenarioEvent::FR:
                match = a.kind == Kind::FinishRead && a.thread == e.thread;
                capture = true;
                break;
            case ScenarioEvent::SW:
                match = a.kind == Kind::StartWrite && a.thread == e.thread &&
                        a.value == e.value;
                break;
            case ScenarioEvent::FW:
                match = a.kind == Kind::FinishWrite && a.thread == e.thread;
                break;
            case ScenarioEvent::IR:
                match = a.kind == Kind::InstantRead && a.thread == e.thread;
                capture = true;
                break;
            }
            if (!match)
                continue;
            if (capture)
                caps.push_back(a.value);
            go(idx + 1, dst, caps);
            if (capture)
                caps.pop_back();
        }
    }
};

} // namespace

set<vector<int>> enumerate_scenario_outcomes(const RegisterConfig &cfg,
                                             int nthreads,
                                             const vector<ScenarioEvent> &script) {
    ActionTable tab;
    Lts lts = register_lts(cfg, nthreads, tab);
    ScenarioRun run;
    run.lts = &lts;
    run.tab = &tab;
    run.script = &script;
    vector<int> caps;
    run.go(0, lts.init, caps);
    return run.outcomes;
}

} // namespace mex
