#pragma once

#include <stdexcept>
#include <string>

namespace autoform {

// Base for all library errors so callers can catch the whole family.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

// A syntactically bad input record; carries the 1-based line number.
struct RecordError : Error {
    RecordError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
    std::size_t line_number;
};

}  // namespace autoform
