#pragma once

#include <string>
#include <vector>

namespace pinndd {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Analytic self-checks: finite-difference derivative oracles, manufactured
/// solution and interface-condition audits, and geometry invariants.
std::vector<CheckResult> run_verification_checks();

}  // namespace pinndd
