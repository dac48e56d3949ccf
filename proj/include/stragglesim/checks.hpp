#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stragglesim {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// The numbered end-to-end verification suite behind `stragglesim validate`
/// and the acceptance test binary. Every tolerance is pinned in the
/// implementation; checks never consult the environment except for threads.
std::vector<CheckResult> run_acceptance_checks(int threads);

/// Run the suite and print one pass/fail line per check. Returns the number
/// of failing checks.
int run_and_report_checks(std::ostream& out, int threads);

}  // namespace stragglesim
