#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace htpl {

/// Malformed or out-of-range input to a library call.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an algorithm does not hold. Carries the
/// template level at which the check failed, or -1 when no level applies.
class PreconditionError : public InputError {
public:
    PreconditionError(const std::string& what, int level)
        : InputError(what), level_(level) {}

    int level() const noexcept { return level_; }

private:
    int level_;
};

/// Raised when an algorithm reaches a state its preconditions rule out.
/// In practice this means a template that claims an Extension arity it does
/// not have.
class ConsistencyError : public std::logic_error {
public:
    ConsistencyError(const std::string& what, int level)
        : std::logic_error(what), level_(level) {}

    int level() const noexcept { return level_; }

private:
    int level_;
};

/// An enumeration gave up before finishing. `partial()` is a valid lower
/// bound on the quantity being counted.
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, std::uint64_t partial)
        : std::runtime_error(what), partial_(partial) {}

    std::uint64_t partial() const noexcept { return partial_; }

private:
    std::uint64_t partial_;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parse failure in one of the text formats; `line()` is 1-based.
class FormatError : public InputError {
public:
    FormatError(const std::string& what, int line)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace htpl
