#pragma once

#include <stdexcept>
#include <string>

namespace ffwnm {

/// Base class for all recoverable tool errors. The CLI maps the concrete
/// subtypes onto process exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Netlist / config text could not be parsed.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column = 0)
        : Error(format(msg, line, column)), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    static std::string format(const std::string& msg, int line, int column) {
        std::string s = "parse error at line " + std::to_string(line);
        if (column > 0) s += ", column " + std::to_string(column);
        return s + ": " + msg;
    }
    int line_ = 0;
    int column_ = 0;
};

/// Bad run configuration (missing preset, invalid sigma, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Geometry that collapses to a non-positive effective dimension.
class InvalidGeometryError : public Error {
public:
    using Error::Error;
};

/// Non-finite bias or argument fed to a numeric model.
class NumericDomainError : public Error {
public:
    using Error::Error;
};

/// Newton (or source-stepping fallback) failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A measurement could not be extracted (missing crossing, violated bound).
class CharacterizationError : public Error {
public:
    using Error::Error;
};

} // namespace ffwnm
