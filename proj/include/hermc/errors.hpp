#pragma once

#include <stdexcept>
#include <string>

namespace hermc {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated precondition of an operation (bad subset, wrong prefix shape, ...).
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// Input text could not be parsed; carries a 1-based position.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " + std::to_string(col_) + ")"),
          line(line_),
          column(col_) {}
};

// Refusal to run an exponential routine above its size cap.
struct ScaleError : Error {
    explicit ScaleError(const std::string& msg) : Error(msg) {}
};

}  // namespace hermc
