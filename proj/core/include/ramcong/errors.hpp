#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ramcong {

// Input outside an operation's documented domain (n = 0, non-prime p, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A table-backed function was asked for a prime power it does not cover.
class CoverageError : public std::out_of_range {
 public:
  CoverageError(std::uint64_t q, std::uint64_t e, const std::string& what)
      : std::out_of_range(what), q_(q), e_(e) {}
  std::uint64_t prime() const { return q_; }
  std::uint64_t exponent() const { return e_; }

 private:
  std::uint64_t q_;
  std::uint64_t e_;
};

// Caller broke an operation's precondition in a way that indicates a logic
// error upstream (e.g. asking compute_U for a prime that divides A').
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ResourceLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Malformed input document; line is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        detail_(what) {}
  std::size_t line() const { return line_; }
  // Message without the line prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

}  // namespace ramcong
