#pragma once

#include <stdexcept>

namespace graphbell {

/// Invalid input: malformed JSON, violated graph/expression invariants,
/// out-of-range parameters. Maps to CLI exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Problem size beyond a configured guard (dense limits, enumeration caps).
/// Maps to CLI exit code 3.
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative solver exhausted its iteration budget.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace graphbell
