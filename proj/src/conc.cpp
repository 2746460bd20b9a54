#include "mexcheck/conc.hpp"

namespace mex {

const char *conc_name(Conc c) {
    switch (c) {
    case Conc::T: return "T";
    case Conc::S: return "S";
    case Conc::I: return "I";
    case Conc::A: return "A";
    }
    return "?";
}

bool interferes(Conc c, const Action &a, const Action &b) {
    if (a.thread == b.thread)
        return true;
    if (c == Conc::T)
        return false;
    bool same_reg = a.reg >= 0 && a.reg == b.reg;
    if (!same_reg)
        return false;
    // S: writes interfere with overlapping reads and writes
    if (is_write(b) && (is_read(a) || is_write(a)))
        return true;
    if (c == Conc::S)
        return false;
    // I: reads additionally interfere with writes
    if (is_read(b) && is_write(a))
        return true;
    if (c == Conc::I)
        return false;
    // A: reads additionally interfere with reads
    return is_read(a) && is_read(b);
}

InterferenceTable::InterferenceTable(const ActionTable &tab, Conc c) {
    n = tab.size();
    words = (n + 63) / 64;
    bits.assign((size_t)n * words, 0);
    for (int a = 0; a < n; a++)
        for (int b = 0; b < n; b++)
            if (interferes(c, tab[a], tab[b]))
                bits[(size_t)a * words + (b >> 6)] |= 1ULL << (b & 63);
}

} // namespace mex
