#pragma once

#include <stdexcept>
#include <string>

namespace gedanken {

// Malformed or self-inconsistent configuration input.  The CLI maps this to
// exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An operation cannot produce numerically valid output: wrapping ridge,
// aliased kernel, null postselection, zero-norm tensor.  Exit code 3.
class ValidityError : public std::runtime_error {
 public:
  explicit ValidityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gedanken
