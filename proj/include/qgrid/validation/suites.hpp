#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qgrid::validation {

struct CheckResult {
    std::string name;
    bool pass = false;
    double max_err = 0.0;
    std::string detail;
    bool informational = false; // reported but never fatal
};

std::vector<CheckResult> suite_state_algebra(std::uint64_t seed);
std::vector<CheckResult> suite_protocol(std::uint64_t seed);
std::vector<CheckResult> suite_distillation(std::uint64_t seed);
std::vector<CheckResult> run_all_suites(std::uint64_t seed);

// True when every non-informational check passed.
bool all_passed(const std::vector<CheckResult>& results);

} // namespace qgrid::validation
