#pragma once

#include <stdexcept>
#include <string>

namespace magnetworks {

// Violated precondition of a numerical routine (CFL, stability bound, shape).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Scenario text that cannot be tokenized; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// Well-formed scenario that violates a model invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative solve, balancing or closure failure on otherwise valid input.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace magnetworks
