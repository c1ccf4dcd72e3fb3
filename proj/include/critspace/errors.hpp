#pragma once

#include <stdexcept>
#include <string>

namespace critspace {

/// Malformed or unsupported input (CLI exit code 2).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A tensor whose map W -> A (x) B is not injective.
class DegenerateTensor : public InputError {
public:
    DegenerateTensor() : InputError("degenerate tensor") {}
};

/// Work estimate above the configured limit (CLI exit code 3).
class GuardRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two routes to the same number disagreed (CLI exit code 4).
class Inconsistency : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace critspace
