#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spikelab {

struct CriterionResult {
    std::string id;
    std::string title;
    bool passed = false;
    // documented contradiction in the pinned reference values; the check is
    // kept faithful and reported red rather than adjusted to pass
    bool expected_failure = false;
    std::string detail;
    double elapsed_seconds = 0.0;  // printed only; kept out of serialized reports
};

/// Full verification ladder over every module; one entry per criterion
/// (criterion 3 is sub-itemized because its reference values disagree).
std::vector<CriterionResult> run_acceptance();

/// Print one pass/fail line per criterion; returns the number of failures.
int print_acceptance(const std::vector<CriterionResult>& results, std::ostream& os);

}  // namespace spikelab
