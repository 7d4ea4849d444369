#pragma once

#include <stdexcept>
#include <string>

namespace mplsrisk {

// Base class for everything the scenario loader can report. The CLI maps
// these to exit code 1; anything else escaping to main is exit code 2.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed JSON (byte-level), with position info in the message.
struct ParseError : ScenarioError {
    using ScenarioError::ScenarioError;
};

// Structurally valid JSON that does not match the scenario schema:
// missing required fields, unknown keys, wrong types.
struct SchemaError : ScenarioError {
    using ScenarioError::ScenarioError;
};

// Schema-valid scenario whose values violate an invariant
// (dangling node references, labels outside the space, bad ranges).
struct ValidationError : ScenarioError {
    using ScenarioError::ScenarioError;
};

// Precondition violation on an analytical or mechanistic model
// (wrong queue model, disabled mitigation, non-monotonic time, ...).
struct ModelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace mplsrisk
