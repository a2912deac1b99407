#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mediff {

// Caller passed arguments that violate an operation's contract.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The input is well-formed but too short for the requested windows.
class InsufficientDataError : public std::runtime_error {
 public:
  InsufficientDataError(const std::string& what, std::size_t required_minimum)
      : std::runtime_error(what), required_minimum_(required_minimum) {}

  std::size_t required_minimum() const noexcept { return required_minimum_; }

 private:
  std::size_t required_minimum_;
};

// Malformed external input (CSV rows, JSON documents, timestamps).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mediff
