#pragma once

#include <stdexcept>
#include <string>

namespace culinary {

/// Failure category; doubles as the CLI exit status.
enum class ErrorKind : int {
    config = 2,
    data = 3,
    numeric = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& message)
        : std::runtime_error(message), kind_(kind), module_(std::move(module)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
    std::string module_;
};

class ConfigError : public Error {
public:
    ConfigError(std::string module, const std::string& message)
        : Error(ErrorKind::config, std::move(module), message) {}
};

class DataError : public Error {
public:
    DataError(std::string module, const std::string& message)
        : Error(ErrorKind::data, std::move(module), message) {}
};

class NumericError : public Error {
public:
    NumericError(std::string module, const std::string& message)
        : Error(ErrorKind::numeric, std::move(module), message) {}
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace culinary
