// Acceptance gate: every check prints one pass/fail line with the measured
// value and its tolerance; exit is nonzero if any check fails.
#include <algorithm>
#include <cstdio>

#include "revscatter/verify.hpp"

int main() {
    revscatter::VerificationReport rep = revscatter::run_verification({});
    for (const auto& c : rep.checks)
        std::printf("[%s] %-26s %7.1fs  %s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.seconds, c.detail.c_str());
    std::printf("%zu/%zu checks passed (seed %llu)\n",
                static_cast<size_t>(std::count_if(rep.checks.begin(), rep.checks.end(),
                                                  [](const auto& c) { return c.pass; })),
                rep.checks.size(), static_cast<unsigned long long>(rep.seed));
    return rep.all_pass() ? 0 : 1;
}
