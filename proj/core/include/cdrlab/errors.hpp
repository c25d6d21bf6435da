#pragma once

#include <stdexcept>
#include <string>

namespace cdrlab {

// Invalid or inconsistent configuration (unreachable target, bad ranges, indivisible budgets).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API called out of contract (stepping a finished episode, shape mismatch).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite or otherwise malformed numeric input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A library invariant did not hold; indicates a bug rather than bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Persisted artifact could not be read back.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void throw_usage(const std::string& what);
[[noreturn]] void throw_config(const std::string& what);

}  // namespace cdrlab
