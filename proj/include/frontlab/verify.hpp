#pragma once

#include <string>
#include <vector>

namespace frontlab {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;
};

struct VerifyOptions {
    // Grid resolutions pinned for the reference checks.
    double census225_dz = 0.02;
    double census6_dz = 0.005;
    double kpp_dz = 0.004;
    double kpp_c = 2.5;
    double stability_dz = 0.02;
};

// Runs the full reference verification: threshold constants, bisections,
// census reproductions, exact-solution checks, convexity/gradient/stability
// properties, and the monotonicity/barrier sweep over every computed front.
std::vector<CheckResult> run_verification(const VerifyOptions& opts = {});

std::string verification_table(const std::vector<CheckResult>& results);
bool verification_passed(const std::vector<CheckResult>& results);

} // namespace frontlab
