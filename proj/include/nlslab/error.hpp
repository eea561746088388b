#pragma once

#include <stdexcept>
#include <string>

namespace nlslab {

/// Raised when an operation's precondition is violated by its inputs.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a time integration produces non-finite values.
class BlowUp : public std::runtime_error {
public:
    BlowUp(const std::string& what, long long step)
        : std::runtime_error(what), step_(step) {}

    long long step() const noexcept { return step_; }

private:
    long long step_;
};

/// Raised when an artifact cannot be written or read back.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nlslab
