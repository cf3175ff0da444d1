// Acceptance gate: runs every end-to-end check and prints one line per
// criterion.  Exits nonzero if any check fails.

#include <cstdio>

#include "mwh/selftest.hpp"

int main() {
    int failures = 0;
    for (const auto& r : mwh::run_selftest()) {
        std::printf("%s %-20s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        if (!r.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
