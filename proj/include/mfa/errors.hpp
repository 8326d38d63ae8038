// errors.hpp — exception hierarchy shared by the library and the CLI exit-code map.
#pragma once

#include <stdexcept>
#include <string>

namespace mfa {

// Base for everything the library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input files / malformed definitions. CLI exit code 1.
struct ConfigError : Error {
    int line = 0; // 0 = no line info
    explicit ConfigError(const std::string& msg, int line_no = 0)
        : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

// Mathematically well-posed request with no witness at the asked resolution
// (empty level set, alpha outside the rotation interval, ...). CLI exit code 2.
struct InfeasibleError : Error {
    using Error::Error;
};

} // namespace mfa
