#pragma once

/**
 * @file error.hpp
 * @brief Exception hierarchy shared by the library, CLI and service.
 *
 * Validation errors map to CLI exit status 1 and HTTP 4xx; I/O errors map to
 * exit status 2. Every error carries a machine token and an optional locator
 * (slot name, row/column) so front ends can point at the offending input.
 */

#include <stdexcept>
#include <string>

namespace frp {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message, std::string detail = {})
        : std::runtime_error(message), code_(std::move(code)), detail_(std::move(detail)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string code_;
    std::string detail_;
};

/// Bad input data: malformed rows, unknown terms, out-of-range values.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    explicit IoError(const std::string& message, std::string path = {})
        : Error("io_error", message, std::move(path)) {}
};

}  // namespace frp
