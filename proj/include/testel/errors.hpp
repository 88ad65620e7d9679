#pragma once

#include <stdexcept>
#include <string>

namespace testel {

// Malformed input text; position is a 0-based byte offset into the input.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

// Violated precondition or invariant of an operation.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Word is not a member of the subgroup it is being rewritten in.
class MembershipError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Enumeration or search would exceed its configured budget; the operation
// refuses instead of truncating.
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace testel
