#pragma once

#include <stdexcept>
#include <string>

namespace presshock {

// Domain failure: bad physical input, geometry inconsistent with a case,
// non-converging iteration. Maps to exit status 1 in the CLI.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed configuration text; the message carries the line number.
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace presshock
