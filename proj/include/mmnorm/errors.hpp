#pragma once

#include <stdexcept>
#include <string>

namespace mmnorm {

/// Raised when an adaptive integral cannot meet its error budget. Carries the
/// error bound that was actually achieved.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, double achieved_tolerance)
        : std::runtime_error(what), achieved_tolerance_(achieved_tolerance) {}

    double achieved_tolerance() const noexcept { return achieved_tolerance_; }

private:
    double achieved_tolerance_;
};

/// Raised on malformed or semantically invalid configuration input.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a file cannot be read or written.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mmnorm
