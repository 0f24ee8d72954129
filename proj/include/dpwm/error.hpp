#pragma once

#include <stdexcept>
#include <string>

namespace dpwm {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Image, plane or block dimensions violate an operation's contract.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A scalar parameter is outside its documented range.
class ParameterError : public Error {
public:
    using Error::Error;
};

} // namespace dpwm
