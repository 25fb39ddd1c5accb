#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gfl/config.hpp"

namespace gfl {

struct CriterionResult {
    std::string name;
    bool pass;
    std::string detail;  // measured value vs bound
};

struct AcceptanceOptions {
    // When set, the file is parsed and checked for parity with the built-in
    // demonstration configuration before the criteria run.
    std::optional<std::string> config_path;
};

/// Runs the acceptance criteria, printing one pass/fail line per criterion
/// to `os` as results come in. Returns all results.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            std::ostream& os);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace gfl
