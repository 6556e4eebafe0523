#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aigac {

/// Malformed AIGER or DIMACS input. Line numbers are 1-based; 0 means the
/// problem is not attributable to a single line (e.g. binary sections).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Structural violation detected while assembling an Aig.
class AigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A resource cap (memory, enumeration size) was hit.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure talking to an external SAT solver process.
class ExternalSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace aigac
