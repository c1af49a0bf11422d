#pragma once

#include <stdexcept>
#include <string>

namespace lrfree {

// Invalid configuration or an unrecoverable setup state (e.g. every base
// eliminated). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Caller broke an API precondition.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// Numerical failure at runtime (e.g. a non-converging solve). Maps to CLI
// exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lrfree
