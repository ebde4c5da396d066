#pragma once

#include <string>
#include <vector>

namespace molnar {

struct Violation {
    std::string constraint; ///< which invariant failed
    double witness;         ///< input value exhibiting the failure
    std::string detail;
};

/// Outcome of a non-throwing validity check: empty means accepted.
struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

} // namespace molnar
