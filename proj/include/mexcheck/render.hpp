#pragma once

#include "mexcheck/checker.hpp"

#include <string>

namespace mex {

enum class TraceFormat { Human, Structured };

std::string render_trace(const Counterexample &cex, TraceFormat fmt);

// one-line description of an action, e.g. "t0: write flag[1]:=1 (start)"
std::string describe_action(const Action &a,
                            const std::vector<std::string> &reg_names);

} // namespace mex
