#pragma once

#include <stdexcept>
#include <string>

namespace mimome {

// Error taxonomy; the CLI maps these onto exit codes (config/usage -> 2,
// numerical -> 3, budget refusal -> 4).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad shapes, index ranges, mismatched matrix dimensions.
struct DimensionError : Error {
    using Error::Error;
};

// Malformed or truncated matrix / config files.
struct FormatError : Error {
    using Error::Error;
};

// Invalid sweep or CLI configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Non-finite results, cache drift beyond tolerance.
struct NumericalError : Error {
    using Error::Error;
};

// Exhaustive-search subset cap exceeded.
struct BudgetError : Error {
    using Error::Error;
};

}  // namespace mimome
