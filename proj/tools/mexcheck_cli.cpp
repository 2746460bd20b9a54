#include "mexcheck/checker.hpp"
#include "mexcheck/oracle.hpp"
#include "mexcheck/render.hpp"
#include "mexcheck/zoo.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace std;
using namespace mex;

namespace {

Program load_algorithm(const string &spec) {
    bool looks_like_file =
        spec.find('/') != string::npos ||
        (spec.size() > 3 && spec.compare(spec.size() - 3, 3, ".mx") == 0);
    if (looks_like_file) {
        ifstream in(spec);
        if (!in)
            throw runtime_error("cannot open " + spec);
        ostringstream buf;
        buf << in.rdbuf();
        return parse(buf.str());
    }
    return builtin(spec);
}

ExploreBudget parse_budget(const string &s) {
    ExploreBudget b;
    stringstream ss(s);
    string item;
    while (getline(ss, item, ',')) {
        size_t eq = item.find('=');
        if (eq == string::npos)
            throw CLI::ValidationError("--budget expects key=value pairs");
        string key = item.substr(0, eq), val = item.substr(eq + 1);
        if (key == "states")
            b.max_states = stoull(val);
        else if (key == "seconds")
            b.seconds = stod(val);
        else
            throw CLI::ValidationError("unknown budget key: " + key);
    }
    return b;
}

const char *describe_letter(char l) {
    switch (l) {
    case 'X': return "mutual exclusion violated";
    case 'M': return "mutual exclusion holds, deadlock possible";
    case 'D': return "deadlock-free, but a thread can starve";
    case 'S': return "starvation-free";
    default: return "inconclusive (budget exhausted)";
    }
}

int run_check(const string &algo, int nthreads, const string &registers,
              const string &concurrency, const string &property,
              const string &style, const string &blocking, bool trace,
              bool json_out, const string &budget) {
    Program p = load_algorithm(algo);

    ModelConfig mc;
    mc.kind = registers == "safe"      ? RegKind::Safe
              : registers == "regular" ? RegKind::Regular
                                       : RegKind::Atomic;
    mc.conc = concurrency == "T"   ? Conc::T
              : concurrency == "S" ? Conc::S
              : concurrency == "I" ? Conc::I
                                   : Conc::A;
    mc.style = style == "full" ? RegStyle::FullRead : RegStyle::InstantRead;
    if (blocking == "all")
        mc.blocking = Blocking::BlockAll;
    else if (blocking == "writes-reads")
        mc.blocking = Blocking::BlockWritesAndReadsOfWrites;
    else if (blocking == "writes")
        mc.blocking = Blocking::BlockWritesOnly;
    mc.nthreads = nthreads > 0 ? nthreads
                  : p.has_default_n ? p.default_n
                                    : 2;
    validate_model(mc.kind, mc.conc);
    if (mc.blocking != Blocking::None &&
        (mc.kind != RegKind::Atomic || mc.style != RegStyle::FullRead))
        throw ConfigError("--blocking needs atomic registers and --style full");

    CheckOptions opt;
    if (!budget.empty())
        opt.budget = parse_budget(budget);

    Verdict v = verdict_ex(p, mc, opt);

    const PropResult *pr = nullptr;
    string prop_name;
    bool violated = false, inconclusive = false;
    if (property == "me") {
        pr = &v.me;
        prop_name = "mutual exclusion";
        violated = v.letter == 'X';
        inconclusive = !violated && v.me.inconclusive;
    } else if (property == "df") {
        pr = &v.df;
        prop_name = "deadlock freedom";
        violated = v.letter == 'M';
        inconclusive = v.letter == 'X' || (!violated && v.df.inconclusive);
    } else if (property == "sf") {
        pr = v.letter == 'M' ? &v.df : &v.sf;
        prop_name = "starvation freedom";
        violated = v.letter == 'M' || v.letter == 'D';
        inconclusive = v.letter == 'X' || (!violated && v.sf.inconclusive);
    }

    if (pr) {
        cout << prop_name << ": "
             << (inconclusive ? "inconclusive"
                 : violated   ? "violated"
                              : "holds")
             << "\n";
        if (trace && violated && pr->cex)
            cout << render_trace(*pr->cex, json_out ? TraceFormat::Structured
                                                    : TraceFormat::Human);
        return inconclusive ? 2 : violated ? 1 : 0;
    }

    // --property all
    cout << "verdict: " << v.letter << "  (" << describe_letter(v.letter)
         << ")\n";
    auto line = [&](const char *name, const PropResult &r, bool viol) {
        cout << "  " << name << ": "
             << (viol                             ? "violated"
                 : r.inconclusive                 ? "inconclusive"
                                                  : "holds")
             << "\n";
    };
    line("mutual exclusion ", v.me, v.letter == 'X');
    line("deadlock freedom ", v.df, v.letter == 'M');
    line("starvation freedom", v.letter == 'M' ? v.df : v.sf,
         v.letter == 'M' || v.letter == 'D');
    if (trace) {
        const PropResult *worst = v.letter == 'X'   ? &v.me
                                  : v.letter == 'M' ? &v.df
                                  : v.letter == 'D' ? &v.sf
                                                    : nullptr;
        if (worst && worst->cex)
            cout << render_trace(*worst->cex, json_out
                                                 ? TraceFormat::Structured
                                                 : TraceFormat::Human);
    }
    if (v.letter == '?')
        return 2;
    return v.letter == 'S' ? 0 : 1;
}

int run_table(const string &subset, const string &only, const string &budget) {
    CheckOptions opt;
    if (!budget.empty())
        opt.budget = parse_budget(budget);
    cout << "algorithm                   n  safe regular atomic-T -S -I -A\n";
    int mismatches = 0;
    for (const ZooEntry &e : reference_table()) {
        if (subset == "two-thread" && e.threads != 2)
            continue;
        if (subset == "three-thread" && e.threads != 3)
            continue;
        if (!only.empty() && only != e.name)
            continue;
        Program p = builtin(e.name);
        string row;
        try {
            if (e.atomic_threads == e.threads) {
                for (auto &v : verdict_row(p, e.threads, opt))
                    row.push_back(v.letter);
            } else {
                row.push_back(verdict(p, RegKind::Safe, Conc::T, e.threads,
                                      opt).letter);
                row.push_back(verdict(p, RegKind::Regular, Conc::T, e.threads,
                                      opt).letter);
                for (Conc c : {Conc::T, Conc::S, Conc::I, Conc::A})
                    row.push_back(verdict(p, RegKind::Atomic, c,
                                          e.atomic_threads, opt).letter);
            }
        } catch (const exception &ex) {
            row = "error: ";
            row += ex.what();
        }
        printf("%-26s %2d  ", e.name.c_str(), e.threads);
        if (row.size() == 6) {
            printf("%c    %c       %c        %c  %c  %c", row[0], row[1],
                   row[2], row[3], row[4], row[5]);
            if (row != e.row) {
                printf("   MISMATCH (expected %s)", e.row.c_str());
                mismatches++;
            }
        } else {
            printf("%s", row.c_str());
            mismatches++;
        }
        printf("\n");
        fflush(stdout);
    }
    return mismatches ? 1 : 0;
}

int run_examples() {
    cout << "bundled algorithms (safe/regular under T, atomic under "
            "T/S/I/A):\n";
    for (const ZooEntry &e : reference_table())
        printf("  %-26s n=%d  %s\n", e.name.c_str(), e.threads,
               e.row.c_str());
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"mexcheck — verify mutual exclusion algorithms over "
                 "safe/regular/atomic registers"};
    app.require_subcommand(1);

    string algo, registers = "atomic", concurrency = "T", property = "all";
    string style = "instant", blocking = "none", budget, subset, only;
    int nthreads = 0;
    bool trace = false, json_out = false;

    auto *check = app.add_subcommand("check", "check one algorithm");
    check->add_option("--algorithm,-a", algo,
                      "builtin name or path to a .mx file")
        ->required();
    check->add_option("--threads,-n", nthreads, "number of threads");
    check->add_option("--registers,-r", registers, "register model")
        ->check(CLI::IsMember({"safe", "regular", "atomic"}));
    check->add_option("--concurrency,-c", concurrency,
                      "concurrency relation (atomic registers only for S/I/A)")
        ->check(CLI::IsMember({"T", "S", "I", "A"}));
    check->add_option("--property,-p", property, "property to check")
        ->check(CLI::IsMember({"me", "df", "sf", "all"}));
    check->add_option("--style", style, "read modelling style")
        ->check(CLI::IsMember({"instant", "full"}));
    check->add_option("--blocking", blocking,
                      "blocking discipline (atomic full-read only)")
        ->check(CLI::IsMember({"none", "all", "writes-reads", "writes"}));
    check->add_flag("--trace", trace, "print a counterexample run");
    check->add_flag("--json", json_out, "machine-readable counterexample");
    check->add_option("--budget", budget,
                      "exploration budget, e.g. states=2000000,seconds=60");

    auto *table = app.add_subcommand("table",
                                     "reproduce the reference verdict table");
    table->add_option("--subset", subset, "row filter")
        ->check(CLI::IsMember({"two-thread", "three-thread"}));
    table->add_option("--only", only, "single algorithm name");
    table->add_option("--budget", budget, "per-cell exploration budget");

    auto *examples = app.add_subcommand("examples",
                                        "list bundled algorithms");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    try {
        if (check->parsed())
            return run_check(algo, nthreads, registers, concurrency, property,
                             style, blocking, trace, json_out, budget);
        if (table->parsed())
            return run_table(subset, only, budget);
        if (examples->parsed())
            return run_examples();
    } catch (const ConfigError &e) {
        cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CLI::ValidationError &e) {
        cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const exception &e) {
        cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
