#pragma once

#include "mexcheck/action.hpp"

#include <cstdint>
#include <vector>

namespace mex {

enum class Conc : uint8_t { T, S, I, A };

const char *conc_name(Conc c);

// a ⋪_c b: does b's occurrence discharge the justness obligation of a?
// T: same thread only.  S: additionally any write to a register a reads or
// writes.  I: additionally reads of a register a writes.  A: additionally
// reads of a register a reads.
bool interferes(Conc c, const Action &a, const Action &b);

// per-action bitsets of interfering partners, for the liveness fixpoint
struct InterferenceTable {
    int n = 0, words = 0;
    std::vector<uint64_t> bits; // row a: bits over b

    InterferenceTable() = default;
    InterferenceTable(const ActionTable &tab, Conc c);
    bool get(int a, int b) const {
        return (bits[(size_t)a * words + (b >> 6)] >> (b & 63)) & 1;
    }
    // does the label set (bitset over action ids) contain an interferer of a?
    bool hit(const std::vector<uint64_t> &labels, int a) const {
        const uint64_t *row = &bits[(size_t)a * words];
        for (int w = 0; w < words; w++)
            if (row[w] & labels[w])
                return true;
        return false;
    }
};

} // namespace mex
