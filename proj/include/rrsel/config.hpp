#pragma once

#include <string>

#include "rrsel/simulate.hpp"

namespace rrsel {

/// Parses and validates an experiment description in JSON.
///
///   {"experiment_id": "...", "root_seed": 7, "trials": 1000,
///    "design": {"kind": "identity_hadamard", "n": 32},
///    "signal": {"k0": 3, "kind": "pm_one"},
///    "snr_db": [0, 10, 20], "algorithms": ["rrm", "rrt:0.01", {"name": "rrta", "q": 5}]}
///
/// Malformed JSON throws ParseError with a line number; schema violations
/// throw ValidationError naming the field.
ExperimentConfig parse_config(const std::string& json_text);

}  // namespace rrsel
