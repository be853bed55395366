#pragma once

#include <stdexcept>
#include <string>

namespace somps {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. The message names file, line and field.
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& field,
               const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": field '" + field + "': " + what),
          file_(file), line_(line), field_(field) {}

    explicit ParseError(const std::string& what) : Error(what) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string file_;
    std::size_t line_ = 0;
    std::string field_;
};

/// Well-formed input that violates a cross-record invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Bad argument or shape mismatch at an API boundary.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Operation called on an object in the wrong state (e.g. an unfitted encoder).
class StateError : public Error {
public:
    using Error::Error;
};

/// Stratified split cannot satisfy its per-class constraints.
class SplitError : public Error {
public:
    using Error::Error;
};

/// Training diverged (non-finite loss).
class TrainingError : public Error {
public:
    using Error::Error;
};

} // namespace somps
