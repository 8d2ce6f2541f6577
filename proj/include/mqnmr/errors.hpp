#pragma once

#include <stdexcept>
#include <string>

namespace mqnmr {

// Error hierarchy used across the library. The CLI maps each class to a
// distinct process exit code (validation -> 2, numeric -> 3, io -> 4).

// Invalid arguments, out-of-range sizes/indices, malformed configuration.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures: eigensolver breakdown, non-Hermitian state where a
// Hermitian one is required, degenerate states that defeat a metric.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures: unreadable inputs, unwritable outputs.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mqnmr
