#pragma once

#include <stdexcept>
#include <string>

namespace etls {

// Invalid arguments raise std::invalid_argument. The two types below carry
// distinct CLI exit codes.

/// Bad or unknown configuration key/value. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical non-convergence (grid refinement, fitting). CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace etls
