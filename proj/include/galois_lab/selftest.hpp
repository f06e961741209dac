#pragma once

#include "galois_lab/lie.hpp"

#include <chrono>
#include <string>
#include <vector>

namespace galois_lab {

enum class SelftestProfile { quick, full };

struct SelftestResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

struct SelftestReport {
    SelftestProfile profile;
    std::vector<SelftestResult> results;
    bool passed() const;
};

// Runs the invariant suites of every module. The bracket is injectable so a
// broken implementation can be shown to fail by name.
SelftestReport run_selftest(SelftestProfile profile, const BracketFn &br = bracket);

} // namespace galois_lab
