#pragma once

#include <stdexcept>
#include <string>

namespace slstail {

/// Bad arguments or violated preconditions at an API boundary.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent input data (DIMACS, CSV, JSON).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a finite answer.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace slstail
