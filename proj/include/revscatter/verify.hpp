#pragma once

#include <cstdint>

#include "revscatter/marchenko.hpp"
#include "revscatter/riccati.hpp"

namespace revscatter {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // measured value(s) vs tolerance
    double seconds = 0.0;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    std::uint64_t seed = 0;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct VerifyOptions {
    std::uint64_t seed = 20260824;
    double radius = 120.0;  // zero-search radius for the series identities
};

// The full identity/round-trip suite over the built-in fixtures (square
// wells c = 4 and c = -20, the smooth bump, and the sine profile).
VerificationReport run_verification(const VerifyOptions& opts = {});

}  // namespace revscatter
