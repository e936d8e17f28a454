#pragma once

#include <stdexcept>
#include <string>

namespace hk {

/// Raised when an operation's preconditions are violated (bad shapes,
/// degenerate input, guard rejections).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the JSON loaders; the message names the offending field.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace hk
