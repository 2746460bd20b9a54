#pragma once

#include "mexcheck/lang.hpp"

#include <string>
#include <vector>

namespace mex {

struct ZooEntry {
    std::string name;
    int threads;        // thread count behind the reference verdicts
    int atomic_threads; // thread count for the atomic columns (usually same)
    std::string row;    // six letters: safe-T, regular-T, atomic-T/S/I/A
};

// names of every bundled algorithm, including composed variants
std::vector<std::string> builtin_names();

// raw source text of a bundled algorithm; throws if the name is unknown
std::string builtin_source(const std::string &name);

// load and parse a bundled algorithm
Program builtin(const std::string &name);

// reference verdicts, two-thread block first
const std::vector<ZooEntry> &reference_table();

// directory holding the bundled .mx files (MEXCHECK_CORPUS env overrides)
std::string corpus_dir();

} // namespace mex
