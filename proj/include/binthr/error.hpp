#pragma once

#include <stdexcept>
#include <string>

namespace binthr {

// Argument outside the domain where f(n), L(n) or a helper is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Request would exceed a configured resource budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown check name or malformed command-line request.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace binthr
