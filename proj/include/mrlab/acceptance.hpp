#pragma once

// The end-to-end acceptance checks A1-A10, shared by the acceptance test
// binary and the `mrlab verify` subcommand.

#include <functional>
#include <string>
#include <vector>

namespace mrlab {

struct CriterionResult {
    std::string id;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceCriterion {
    std::string id;
    std::string title;
    std::function<CriterionResult()> run;
};

const std::vector<AcceptanceCriterion>& acceptance_criteria();

/// Runs every criterion (or those whose id is listed), catching exceptions
/// as failures.
std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only = {});

/// "PASS A4  formula exactness ... (0.01 s)  detail"
std::string format_result(const CriterionResult& r);

}  // namespace mrlab
