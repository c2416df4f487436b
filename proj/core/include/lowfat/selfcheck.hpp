#pragma once

#include <string>
#include <vector>

#include "lowfat/runtime.hpp"

namespace lowfat {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

// Runs the invariant suite against a runtime: fixed-point base agreement,
// allocator alignment/region properties, bounds-check equivalence, vector
// and tree oracle agreement, and a collector round trip. Checks that need
// dereferenceable memory are skipped in Simulated mode.
std::vector<CheckResult> run_selftest(const Runtime& rt, std::uint64_t seed = 1);

}  // namespace lowfat
