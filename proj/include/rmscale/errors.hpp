#pragma once

#include <stdexcept>
#include <string>

namespace rmscale {

// Invalid experiment configuration (bad target name, out-of-range sizes, ...).
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A matrix that should have been positive definite was not.
// The CLI maps this (and BracketError) to exit code 3.
class DecompositionError : public std::runtime_error {
 public:
  explicit DecompositionError(const std::string& what) : std::runtime_error(what) {}
};

// Root bracketing for the acceptance-rate solver failed even after expansion.
class BracketError : public std::runtime_error {
 public:
  explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rmscale
