#include "mexcheck/zoo.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace std;

namespace mex {

string corpus_dir() {
    if (const char *env = getenv("MEXCHECK_CORPUS"))
        return env;
    return MEXCHECK_CORPUS_DIR;
}

namespace {

const char *kCorpusNames[] = {
    "anderson",
    "aravind",
    "aravind-alt",
    "attiya-welch",
    "attiya-welch-alt",
    "attiya-welch-var",
    "attiya-welch-var-alt",
    "burns-lynch",
    "dekker",
    "dekker-alt",
    "dekker-rw-safe",
    "dijkstra",
    "dijkstra-alt",
    "kessels",
    "knuth",
    "lamport-1bit",
    "lamport-3bit",
    "peterson",
    "peterson-new-int",
    "peterson-new-bit",
    "szymanski-flag-int",
    "szymanski-flag-bit",
    "szymanski-flag-bit-alt",
    "szymanski-3bit",
    "szymanski-3bit-alt",
    "szymanski-4bit",
};

string load_file(const string &name) {
    string path = corpus_dir() + "/" + name + ".mx";
    ifstream in(path);
    if (!in)
        throw runtime_error("cannot open " + path);
    ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// wrap another mutex around the body: a turn-based filter in front of the
// given algorithm's entry and exit code
string splice_bar_david(const string &base) {
    string text = load_file(base);
    istringstream in(text);
    ostringstream out;
    string line;
    bool entry_done = false, exit_done = false;
    auto indent_of = [](const string &s) {
        size_t k = s.find_first_not_of(' ');
        return s.substr(0, k == string::npos ? 0 : k);
    };
    while (getline(in, line)) {
        string trimmed = line;
        size_t k = trimmed.find_first_not_of(" \t");
        trimmed = k == string::npos ? "" : trimmed.substr(k);
        if (trimmed.rfind("name ", 0) == 0) {
            out << line << "-bar-david\n";
            continue;
        }
        if (trimmed == "thread:") {
            out << "reg bflag[N] : bool = false\n";
            out << "reg bturn : 0..N-1 = any\n";
            out << "var btmp\n\n";
            out << line << "\n";
            continue;
        }
        out << line << "\n";
        string pad = indent_of(line);
        if (trimmed == "noncrit" && !entry_done) {
            entry_done = true;
            out << pad << "bflag[i] := true\n";
            out << pad << "repeat\n";
            out << pad << "  btmp := bturn\n";
            out << pad << "until btmp == i || bflag[btmp] == false\n";
            out << pad << "btmp := 0\n";
        } else if (trimmed == "crit" && !exit_done) {
            exit_done = true;
            out << pad << "bflag[i] := false\n";
            out << pad << "btmp := bturn\n";
            out << pad << "if bflag[btmp] == false\n";
            out << pad << "  bturn := (btmp + 1) % N\n";
            out << pad << "end\n";
            out << pad << "btmp := 0\n";
        }
    }
    if (!entry_done || !exit_done)
        throw runtime_error("bar-david splice: no noncrit/crit in " + base);
    return out.str();
}

} // namespace

vector<string> builtin_names() {
    vector<string> out(begin(kCorpusNames), end(kCorpusNames));
    out.push_back("dekker-rw-safe-bar-david");
    out.push_back("lamport-1bit-bar-david");
    return out;
}

string builtin_source(const string &name) {
    const string suffix = "-bar-david";
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
        return splice_bar_david(name.substr(0, name.size() - suffix.size()));
    for (const char *c : kCorpusNames)
        if (name == c)
            return load_file(name);
    throw runtime_error("unknown algorithm: " + name);
}

Program builtin(const string &name) {
    return parse(builtin_source(name));
}

const vector<ZooEntry> &reference_table() {
    static const vector<ZooEntry> table = {
        // two threads
        {"anderson", 2, 2, "SSSSMM"},
        {"attiya-welch", 2, 2, "DSSDMM"},
        {"attiya-welch-alt", 2, 2, "SSSDMM"},
        {"attiya-welch-var", 2, 2, "MMSDMM"},
        {"attiya-welch-var-alt", 2, 2, "SSSDMM"},
        {"dekker", 2, 2, "MMSDMM"},
        {"dekker-alt", 2, 2, "MMSSMM"},
        {"dekker-rw-safe", 2, 2, "SSSDMM"},
        {"dekker-rw-safe-bar-david", 2, 2, "SSSSMM"},
        {"kessels", 2, 2, "XXSSMM"},
        {"peterson", 2, 2, "XXSSMM"},
        {"szymanski-3bit-alt", 2, 2, "SSSSMM"},
        // three threads
        {"aravind", 3, 3, "SSSMMM"},
        {"aravind-alt", 3, 3, "SSSSMM"},
        {"burns-lynch", 3, 3, "DDDDMM"},
        {"dijkstra", 3, 3, "MDDMMM"},
        {"dijkstra-alt", 3, 3, "MDDDMM"},
        {"knuth", 3, 3, "MSSMMM"},
        {"lamport-1bit", 3, 3, "DDDDMM"},
        {"lamport-1bit-bar-david", 3, 3, "SSSSMM"},
        {"lamport-3bit", 3, 3, "SSSSMM"},
        {"peterson-new-int", 3, 3, "DSSDMM"},
        {"peterson-new-bit", 3, 3, "SSSDMM"},
        {"szymanski-flag-int", 3, 3, "XXSSMM"},
        {"szymanski-flag-bit", 3, 3, "XXXXXX"},
        {"szymanski-flag-bit-alt", 3, 3, "XXSSMM"},
        {"szymanski-3bit", 3, 3, "XXXXXX"},
        {"szymanski-4bit", 3, 2, "XXSSMM"},
    };
    return table;
}

} // namespace mex
