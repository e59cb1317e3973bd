#ifndef MARYLAND_TOOLS_CHECKS_HPP
#define MARYLAND_TOOLS_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace maryland::tools {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ChecksConfig {
    std::string only;          // empty: run everything
    std::uint64_t seed = 1;
    double guard = 1e-12;
    std::string theta;         // fixed phase for the LE checks (empty: sampled)
    long long n = 20000;       // product length for LE checks
    int threads = 1;
};

// Runs the cross-module property suites; returns one row per check.
std::vector<CheckResult> run_checks(const ChecksConfig& cfg);

} // namespace maryland::tools

#endif
