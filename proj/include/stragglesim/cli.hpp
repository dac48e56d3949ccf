#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace stragglesim {

// Process exit codes: 0 success, 1 internal failure, 2 usage/config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Run the sweep described by the JSON config and write the CSV to out_path
/// (falls back to the config's "out" entry when out_path is empty).
int cmd_sweep(const std::string& config_path, const std::string& out_path, std::ostream& err);

/// Render a sweep CSV as a log-log SVG chart.
int cmd_plot(const std::string& csv_path, const std::string& out_path, bool overlay, double delta,
             std::ostream& err);

/// Print exact, empirical and closed-form longest-run statistics as CSV.
int cmd_longest_run(int n, double p, int trials, std::uint64_t seed, std::ostream& out,
                    std::ostream& err);

/// Run the full verification suite; exit 0 only if every check passes.
int cmd_validate(int threads, std::ostream& out);

}  // namespace stragglesim
