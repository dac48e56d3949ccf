#pragma once

#include <stdexcept>
#include <string>

#include "stragglesim/experiments.hpp"

namespace stragglesim {

/// Raised for unknown keys, wrong types or out-of-range values; the message
/// names the offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    SweepConfig sweep;
    std::string out;  // optional default output path for the sweep CSV
};

/// Parse and validate a JSON experiment description. Unknown keys are
/// rejected so silent typos cannot change an experiment.
ExperimentConfig parse_experiment_config(const std::string& json_text);

}  // namespace stragglesim
