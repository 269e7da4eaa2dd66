#pragma once

#include <stdexcept>
#include <string>

namespace simplexflow {

// Input outside the open simplex, non-finite coordinates, or a map evaluated
// off its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Distribution or model parameter out of range (alpha <= 0, lambda outside (0,1], ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed configuration documents, CLI usage, unsupported option tags.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace simplexflow
