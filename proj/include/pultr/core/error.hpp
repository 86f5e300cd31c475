#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pultr {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SignatureMismatch : public Error {
public:
    using Error::Error;
};

class InvalidStructure : public Error {
public:
    using Error::Error;
};

class MalformedTerm : public Error {
public:
    using Error::Error;
};

class InvalidTemplate : public Error {
public:
    using Error::Error;
};

// A construction was asked for on an input outside its hypotheses.
class PreconditionFailed : public Error {
public:
    using Error::Error;
};

// Materialisation refused because the result would exceed the configured cap.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace pultr
