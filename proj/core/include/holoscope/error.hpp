#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holo {

enum class ErrorKind {
    InvalidArgument,
    Domain,
    Geometry,
    Parse,
    Validation,
    InsufficientData,
    Residual,
    Internal,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; the kind decides how
// callers (notably the CLI exit codes) react.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace holo
