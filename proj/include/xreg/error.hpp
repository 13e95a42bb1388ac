#pragma once

#include <stdexcept>
#include <string>

namespace xreg {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied arguments that violate a documented precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Input files or their contents could not be used.
class DataError : public Error {
public:
    using Error::Error;
};

// A singular kernel was evaluated at zero distance.
class SingularityError : public Error {
public:
    using Error::Error;
};

// A computation has no meaningful answer for the given data
// (zero total weight, zero variance, constant feature column, ...).
class DegenerateError : public Error {
public:
    using Error::Error;
};

}  // namespace xreg
