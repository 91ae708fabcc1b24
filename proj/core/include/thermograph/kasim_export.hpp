#pragma once

// KaSim 4 text for a compiled model.

#include "thermograph/compile.hpp"

#include <string>
#include <vector>

namespace thermograph {

struct KasimExport {
    std::string text;
    /// One `'name' lhs -> rhs @ rate` line per rule, in rule-set order.
    std::vector<std::string> ruleLines;
};

/// Rate expression of rule `i`, written over the energy pattern names:
/// `[exp] (-1/2 * ('ab' + 't'))` for a symmetric generator member and
/// `[exp] -(-1/2 * ('ab' + 't'))` for its inverse. Throws Error("EXPORT")
/// for nonlinear policies.
std::string kasimRate(const CompiledModel& model, std::size_t i);

KasimExport exportKasim(const CompiledModel& model);

}  // namespace thermograph
