#pragma once

#include <stdexcept>
#include <string>

namespace fpgrank {

/// Malformed textual or JSON input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input with an unsupported parameter, such as a non-prime p.
class ConfigError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A configured memory or size guard was hit.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural check on the algebra failed (spanning, invariance, divisibility).
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fpgrank
