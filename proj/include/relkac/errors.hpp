#pragma once

#include <stdexcept>
#include <string>

namespace relkac {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural precondition between inputs was violated (grid merge,
/// horizon overflow, sizes).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The rejection sampler hit its iteration cap.
class SamplerAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid too large, or an eigensolver failed.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Result files could not be written; the message names the path.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace relkac
