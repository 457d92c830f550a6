// acceptance.hpp — End-to-end verification suite: one pass/fail line per
// criterion, shared by the `check` CLI subcommand and the acceptance test.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fcs {

struct AcceptanceOptions {
    int threads = 2;
    std::string scratch_dir = "acceptance_out";
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string details;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    bool all_passed() const {
        for (const auto& c : criteria) {
            if (!c.passed) return false;
        }
        return !criteria.empty();
    }
};

AcceptanceReport run_acceptance(const AcceptanceOptions& opts, std::ostream& log);

}  // namespace fcs
