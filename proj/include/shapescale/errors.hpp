#pragma once

#include <stdexcept>
#include <string>

namespace shapescale {

/// Bad arguments or misuse of an operation's contract. CLI exit code 1.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or inconsistent input data. CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown (degenerate formulas, failed batches). CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace shapescale
