#pragma once

#include <stdexcept>
#include <string>

namespace geozeta {

// Error classes map onto CLI exit codes:
//   validation/parse -> 2, convergence precondition -> 3, numeric failure -> 4.
enum class ErrorKind { validation, convergence, numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message)
        : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& code() const { return code_; }

    int exit_code() const {
        switch (kind_) {
        case ErrorKind::validation:  return 2;
        case ErrorKind::convergence: return 3;
        case ErrorKind::numeric:     return 4;
        }
        return 4;
    }

private:
    ErrorKind kind_;
    std::string code_;
};

class ValidationError : public Error {
public:
    ValidationError(std::string code, const std::string& message)
        : Error(ErrorKind::validation, std::move(code), message) {}
};

// Malformed input data; carries the 1-based line number when known.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& message, long line = -1)
        : ValidationError("parse", line >= 0 ? "line " + std::to_string(line) + ": " + message
                                             : message),
          line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(std::string code, const std::string& message)
        : Error(ErrorKind::convergence, std::move(code), message) {}
};

class NumericError : public Error {
public:
    NumericError(std::string code, const std::string& message)
        : Error(ErrorKind::numeric, std::move(code), message) {}
};

} // namespace geozeta
